//! Limit proportions `ν(r, 3, c0)` for `c0 = 1, 2`.
//!
//! Two independent routes are provided. The closed forms are evaluated in
//! `f64`. The area route sums `(2/3) |T(k)|` over the explicit tuple tables
//! for `(3,1,2)` and `(3,1,0)`: finite rows exactly, infinite rows exactly up
//! to the point where their areas collapse to `|T(k)| = 4/(k(k+1)(k+2))`,
//! and the remaining series numerically with an explicit tail bound.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::farey::{empirical_nu, gap_histogram};
use crate::geometry::{cell, rat, Rational};
use crate::tuple_sets::{table_rows, ResidueSpec, Row};
use crate::{Error, Result};

/// Modulus of the residue classes handled here.
pub const MODULUS: u64 = 3;

fn check_c0(c0: u64) -> Result<()> {
    match c0 {
        1 | 2 => Ok(()),
        _ => Err(Error::InvalidParameter(format!("limit values are known for c0 = 1, 2 only, got {c0}"))),
    }
}

/// `8 / (3 (2r-5) (2r-3) (2r-1))`, the limit for `r >= 6`.
pub fn nu_tail_term(r: u64) -> Rational {
    assert!(r >= 3, "tail formula needs r >= 3");
    let r = BigInt::from(r);
    let two_r = &r * 2u32;
    let den = BigInt::from(3) * (&two_r - 5u32) * (&two_r - 3u32) * (&two_r - 1u32);
    Rational::new(BigInt::from(8), den)
}

/// The limit as an exact rational where it is one: `r = 0` and `r >= 6`.
pub fn limit_nu_rational(r: u64, c0: u64) -> Result<Option<Rational>> {
    check_c0(c0)?;
    Ok(match r {
        0 => Some(rat(1, 3)),
        1..=5 => None,
        _ => Some(nu_tail_term(r)),
    })
}

pub fn limit_nu_closed(r: u64, c0: u64) -> Result<f64> {
    check_c0(c0)?;
    let pi_sqrt3 = std::f64::consts::PI / 3f64.sqrt();
    let ln3 = 3f64.ln();
    Ok(match r {
        0 => 1.0 / 3.0,
        1 => 2.0 / 3.0 * (pi_sqrt3 - ln3 - 0.5),
        2 => 8.0 / 3.0 * (ln3 - 1.0),
        3 => 626.0 / 105.0 - 2.0 * pi_sqrt3 - 2.0 * ln3,
        4 => 4.0 / 3.0 * (pi_sqrt3 - 23.0 / 35.0 - ln3),
        5 => 4.0 / 3.0 * ln3 - 193.0 / 135.0,
        _ => to_f64(&nu_tail_term(r)),
    })
}

/// `sum_{s=from..=to} 8/(3(2s-5)(2s-3)(2s-1))`, term by term.
pub fn nu_tail_partial(from: u64, to: u64) -> Rational {
    (from.max(6)..=to).map(nu_tail_term).fold(Rational::zero(), |acc, t| acc + t)
}

/// `sum_{s > n} 8/(3(2s-5)(2s-3)(2s-1)) = (2/3) / ((2n-3)(2n-1))` for `n >= 5`.
pub fn nu_tail_remainder(n: u64) -> Rational {
    let n = BigInt::from(n);
    let two_n = &n * 2u32;
    Rational::new(BigInt::from(2), BigInt::from(3) * (&two_n - 3u32) * (&two_n - 1u32))
}

/// `sum_{r >= 6} ν(r)`, by telescoping `8/(3abc) = (2/3)(1/(ab) - 1/(bc))`.
pub fn tail_identity_check() -> Rational {
    nu_tail_remainder(5)
}

/// Collapse point of an infinite row: from this parameter on,
/// the row's cell has the area of the single-index cell `T(k)`.
fn collapse_from(prefix: &[u64], suffix: &[u64]) -> Option<u64> {
    match (prefix, suffix) {
        ([], []) => Some(2),
        ([], [1]) | ([1], []) => Some(5),
        ([1], [1]) => Some(6),
        ([], [1, 2]) | ([2, 1], []) | ([2, 1], [1]) | ([1], [1, 2]) | ([2, 1], [1, 2]) => Some(9),
        _ => None,
    }
}

/// Area contributions of one table: an exact part and the residue series
/// `sum_{j >= 0} |T(start + 3j)|` left over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaParts {
    /// Fixed rows and finite families.
    pub finite: Rational,
    /// Members of infinite families below their collapse point.
    pub pre_collapse: Rational,
    /// First parameter of each collapsed series (step 3).
    pub series_starts: Vec<u64>,
}

impl AreaParts {
    pub fn exact(&self) -> Rational {
        &self.finite + &self.pre_collapse
    }
}

pub fn area_parts(r: usize, spec: &ResidueSpec) -> Result<AreaParts> {
    let mut parts = AreaParts { finite: Rational::zero(), pre_collapse: Rational::zero(), series_starts: vec![] };
    for row in table_rows(r, spec)? {
        match row {
            Row::Fixed(v) => parts.finite += cell(&crate::KTuple::new(v)?).area(),
            Row::Family(f) => match f.hi {
                Some(hi) => {
                    for k in f.params(hi) {
                        parts.finite += cell(&f.tuple(k)).area();
                    }
                }
                None => {
                    let from = collapse_from(&f.prefix, &f.suffix).ok_or_else(|| {
                        Error::InvalidParameter("infinite row without a known collapse point".into())
                    })?;
                    let below = from.saturating_sub(1);
                    for k in f.params(below) {
                        parts.pre_collapse += cell(&f.tuple(k)).area();
                    }
                    let residue = f.residue.unwrap_or(from % 3);
                    let start = (from.max(f.lo)..).find(|k| k % 3 == residue).expect("residue class is hit");
                    parts.series_starts.push(start);
                }
            },
        }
    }
    Ok(parts)
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().expect("finite rational")
}

/// `sum_{j < terms} 4/(k(k+1)(k+2))`, `k = start + 3j`, compensated, and a
/// bound for the omitted terms.
///
/// For `j >= terms` the parameter is at least `3j + 2`, so the omitted sum is
/// at most `int_{terms-1}^inf 4/(3t+2)^3 dt <= 2/(3 terms - 1)^2`.
pub fn residue_series(start: u64, terms: u64) -> (f64, f64) {
    assert!(start >= 2 && terms >= 1);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for j in 0..terms {
        let k = (start + 3 * j) as f64;
        let term = 4.0 / (k * (k + 1.0) * (k + 2.0)) - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    let bound = 2.0 / ((3 * terms - 1) as f64).powi(2);
    (sum, bound)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaLimit {
    pub value: f64,
    /// `(2/3)` times the exactly computed areas.
    pub exact_part: String,
    pub tail_bound: f64,
}

/// Exact `(2/3)(finite areas)` and `(value, tail_bound)` for `1 <= r`.
fn area_limit_positive(r: usize, terms: u64) -> Result<(Rational, f64, f64)> {
    let two_thirds = rat(2, 3);
    let mut exact = Rational::zero();
    let mut series = 0.0;
    let mut bound = 0.0;
    for spec in [ResidueSpec::new(3, 1, 2)?, ResidueSpec::new(3, 1, 0)?] {
        let parts = area_parts(r, &spec)?;
        exact += parts.exact();
        for start in parts.series_starts {
            let (s, b) = residue_series(start, terms);
            series += s;
            bound += b;
        }
    }
    let exact = &two_thirds * exact;
    Ok((exact.clone(), to_f64(&exact) + 2.0 / 3.0 * series, 2.0 / 3.0 * bound))
}

/// `ν(r, 3, c0)` as `(2/3)` times the total cell area over the tables, with
/// `terms` terms of every residue series. `r = 0` is `1 - sum_{r >= 1}`.
pub fn limit_nu_area(r: u64, c0: u64, terms: u64) -> Result<AreaLimit> {
    check_c0(c0)?;
    if terms < 10 {
        return Err(Error::InvalidParameter(format!("need at least 10 series terms, got {terms}")));
    }
    let (exact, value, tail_bound) = if r == 0 {
        let mut exact = Rational::one() - tail_identity_check();
        let mut value = to_f64(&exact);
        let mut bound = 0.0;
        for s in 1..=5 {
            let (e, v, b) = area_limit_positive(s, terms)?;
            exact -= e;
            value -= v;
            bound += b;
        }
        (exact, value, bound)
    } else {
        area_limit_positive(r as usize, terms)?
    };
    Ok(AreaLimit { value, exact_part: exact.to_string(), tail_bound })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub r: u64,
    pub nu_closed: f64,
    pub nu_area: f64,
    pub tail_bound: f64,
    pub exact_part: String,
}

/// Closed and area values side by side for `r = 0..=rmax`.
pub fn limit_table(c0: u64, rmax: u64, terms: u64) -> Result<Vec<LimitRow>> {
    (0..=rmax)
        .map(|r| {
            let area = limit_nu_area(r, c0, terms)?;
            Ok(LimitRow {
                r,
                nu_closed: limit_nu_closed(r, c0)?,
                nu_area: area.value,
                tail_bound: area.tail_bound,
                exact_part: area.exact_part,
            })
        })
        .collect()
}

pub fn limit_table_csv(rows: &[LimitRow]) -> String {
    let mut out = String::from("r,nu_closed,nu_area,tail_bound,exact_part\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.r, row.nu_closed, row.nu_area, row.tail_bound, row.exact_part
        ));
    }
    out
}

/// Slack allowed on top of a tail bound when comparing the two routes.
pub const AGREEMENT_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub r: u64,
    pub nu_hat: f64,
    pub nu_closed: Option<f64>,
    pub nu_area: Option<f64>,
    pub tail_bound: Option<f64>,
    pub abs_error: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProportionReport {
    #[serde(rename = "Q")]
    pub order: u64,
    pub c0: u64,
    pub tol: f64,
    pub rows: Vec<ReportRow>,
}

impl ProportionReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows).expect("rows serialise")
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("r,nu_hat,nu_closed,nu_area,tail_bound,abs_error,pass\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.r,
                row.nu_hat,
                opt(row.nu_closed),
                opt(row.nu_area),
                opt(row.tail_bound),
                opt(row.abs_error),
                row.pass
            ));
        }
        out
    }
}

/// Empirical proportions at order `Q` against both limit routes.
///
/// For `c0 = 0` only `ν(0) = 0` is known; other rows carry no limit and pass.
pub fn verify_report(order: u64, c0: u64, rmax: u64, terms: u64, tol: f64) -> Result<ProportionReport> {
    if order < 100 {
        return Err(Error::InvalidParameter(format!("Q must be >= 100, got {order}")));
    }
    if c0 >= MODULUS {
        return Err(Error::InvalidParameter(format!("residue {c0} not in [0, 2]")));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be >= 0, got {tol}")));
    }
    let hist = gap_histogram(order, MODULUS, c0, rmax as usize)?;
    let mut rows = Vec::new();
    for r in 0..=rmax {
        let nu_hat = empirical_nu(&hist, r as usize)?;
        let row = if c0 == 0 {
            let nu_closed = (r == 0).then_some(0.0);
            let abs_error = nu_closed.map(|v| (nu_hat - v).abs());
            ReportRow {
                r,
                nu_hat,
                nu_closed,
                nu_area: None,
                tail_bound: None,
                abs_error,
                pass: abs_error.map_or(true, |e| e <= tol),
            }
        } else {
            let closed = limit_nu_closed(r, c0)?;
            let area = limit_nu_area(r, c0, terms)?;
            let abs_error = (nu_hat - closed).abs();
            let agree = (area.value - closed).abs() <= area.tail_bound + AGREEMENT_SLACK;
            ReportRow {
                r,
                nu_hat,
                nu_closed: Some(closed),
                nu_area: Some(area.value),
                tail_bound: Some(area.tail_bound),
                abs_error: Some(abs_error),
                pass: abs_error <= tol && agree,
            }
        };
        rows.push(row);
    }
    Ok(ProportionReport { order, c0, tol, rows })
}
