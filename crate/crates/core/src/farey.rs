//! Farey sequences and gap statistics for denominators in a residue class.
//!
//! A fraction of `Φ_Q` is coloured when its denominator is `c0 (mod D)`.
//! A gap of order `r` is a run of exactly `r` uncoloured fractions between
//! two consecutive coloured ones. Counting is linear: the sequence runs from
//! `0/1` to `1/1` and does not wrap around.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FareyFraction {
    pub a: u64,
    pub q: u64,
}

/// Streams `Φ_Q` in ascending order with the next-term recurrence
/// `k = floor((Q + q) / q')`, `(a'', q'') = (k a' - a, k q' - q)`.
#[derive(Clone, Debug)]
pub struct FareyIter {
    order: u64,
    prev: FareyFraction,
    cur: FareyFraction,
    started: bool,
    done: bool,
}

impl FareyIter {
    pub fn new(order: u64) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidOrder);
        }
        // every intermediate value is at most Q + q <= 2Q
        if order > u64::MAX / 2 {
            return Err(Error::Overflow(order));
        }
        Ok(FareyIter {
            order,
            prev: FareyFraction { a: 0, q: 1 },
            cur: FareyFraction { a: 1, q: order },
            started: false,
            done: false,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }
}

impl Iterator for FareyIter {
    type Item = FareyFraction;

    fn next(&mut self) -> Option<FareyFraction> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.prev);
        }
        let out = self.cur;
        if out.a == out.q {
            self.done = true;
            return Some(out);
        }
        let (p, c) = (self.prev, self.cur);
        let k = (self.order + p.q) / c.q;
        let next = FareyFraction { a: k * c.a - p.a, q: k * c.q - p.q };
        self.prev = c;
        self.cur = next;
        Some(out)
    }
}

/// `Φ_Q` as a stream.
pub fn farey_iter(order: u64) -> Result<FareyIter> {
    FareyIter::new(order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapHistogram {
    #[serde(rename = "Q")]
    pub order: u64,
    #[serde(rename = "D")]
    pub d: u64,
    pub c0: u64,
    pub rmax: usize,
    /// `counts[r]` for `r = 0..=rmax`.
    pub counts: Vec<u64>,
    /// Gaps of order `> rmax`.
    pub overflow: u64,
    pub colored_total: u64,
}

impl GapHistogram {
    fn new(order: u64, d: u64, c0: u64, rmax: usize) -> Self {
        GapHistogram { order, d, c0, rmax, counts: vec![0; rmax + 1], overflow: 0, colored_total: 0 }
    }

    pub fn count(&self, r: usize) -> u64 {
        self.counts.get(r).copied().unwrap_or(0)
    }

    pub fn gaps(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }

    /// Adds the counts of `other`, which must describe the same `(Q, D, c0, rmax)`.
    pub fn merge(&mut self, other: &GapHistogram) -> Result<()> {
        let key = |h: &GapHistogram| (h.order, h.d, h.c0, h.rmax);
        if key(self) != key(other) {
            return Err(Error::InvalidParameter("histograms with different parameters".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.overflow += other.overflow;
        self.colored_total += other.colored_total;
        Ok(())
    }

    /// `r,count,nu_hat` rows for `r <= rmax`, then an `overflow` row.
    pub fn to_csv(&self) -> String {
        let nu = |c: u64| {
            if self.colored_total == 0 {
                String::new()
            } else {
                (c as f64 / self.colored_total as f64).to_string()
            }
        };
        let mut out = String::from("r,count,nu_hat\n");
        for (r, &c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{r},{c},{}\n", nu(c)));
        }
        out.push_str(&format!("overflow,{},{}\n", self.overflow, nu(self.overflow)));
        out
    }
}

/// Single pass over `Φ_Q` recording gap orders between coloured fractions.
pub fn gap_histogram(order: u64, d: u64, c0: u64, rmax: usize) -> Result<GapHistogram> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("modulus must be >= 2, got {d}")));
    }
    if c0 >= d {
        return Err(Error::InvalidParameter(format!("residue {c0} not in [0, {}]", d - 1)));
    }
    let mut hist = GapHistogram::new(order, d, c0, rmax);
    let mut run: Option<usize> = None;
    for f in farey_iter(order)? {
        if f.q % d == c0 {
            if let Some(r) = run {
                match hist.counts.get_mut(r) {
                    Some(c) => *c += 1,
                    None => hist.overflow += 1,
                }
            }
            hist.colored_total += 1;
            run = Some(0);
        } else if let Some(r) = run.as_mut() {
            *r += 1;
        }
    }
    Ok(hist)
}

/// `N(Q; r, D, c0) / N(Q; D, c0)`.
pub fn empirical_nu(hist: &GapHistogram, r: usize) -> Result<f64> {
    if hist.colored_total == 0 {
        return Err(Error::NoColoredFractions);
    }
    if r > hist.rmax {
        return Err(Error::InvalidParameter(format!("r = {r} exceeds rmax = {}", hist.rmax)));
    }
    Ok(hist.count(r) as f64 / hist.colored_total as f64)
}
