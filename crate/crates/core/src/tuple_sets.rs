//! The tuple sets `A°_r(D, c0, c1)` and `A*_r(D, c0, c1)`.
//!
//! A tuple `k = (k1, .., kr)` with non-empty cell belongs to `A°_r` when
//!
//! ```text
//! c1 K_i(k1..ki) - c0 K_(i-1)(k2..ki)  !=  c0  (mod D)   for i < r
//! c1 K_r(k1..kr) - c0 K_(r-1)(k2..kr)  ==  c0  (mod D)
//! ```
//!
//! and to `A*_r` when the last congruence fails as well. Two sources are
//! provided: a brute-force search over entries `<= kmax`, and the explicit
//! tables for `D = 3`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuant::{continuant, KTuple};
use crate::geometry::{extend_cell, farey_triangle, ConvexRegion};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueSpec {
    d: u64,
    c0: u64,
    c1: u64,
}

impl ResidueSpec {
    pub fn new(d: u64, c0: u64, c1: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidResidue(format!("modulus must be >= 2, got {d}")));
        }
        if c0 >= d || c1 >= d {
            return Err(Error::InvalidResidue(format!("residues must lie in [0, {}]", d - 1)));
        }
        if c0 == c1 {
            return Err(Error::InvalidResidue("c1 must differ from c0".into()));
        }
        Ok(ResidueSpec { d, c0, c1 })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn c0(&self) -> u64 {
        self.c0
    }

    pub fn c1(&self) -> u64 {
        self.c1
    }

    /// `gcd(c0, D)`.
    pub fn delta(&self) -> u64 {
        num_integer::gcd(self.c0, self.d)
    }
}

/// Running residues of `K_i(k1..ki)` and `K_(i-1)(k2..ki)` mod `D`.
#[derive(Clone, Copy, Debug)]
struct Residues {
    d: i64,
    a: (i64, i64),
    b: (i64, i64),
}

impl Residues {
    fn start(d: u64) -> Self {
        // (K_(i-1), K_i) at i = 0 for both sequences; b starts one step late
        Residues { d: d as i64, a: (0, 1), b: (0, 0) }
    }

    fn push(self, k: u64, first: bool) -> Self {
        let d = self.d;
        let k = (k % d as u64) as i64;
        let a = (self.a.1, (k * self.a.1 - self.a.0).rem_euclid(d));
        let b = if first { (0, 1) } else { (self.b.1, (k * self.b.1 - self.b.0).rem_euclid(d)) };
        Residues { d, a, b }
    }

    fn value(&self, spec: &ResidueSpec) -> u64 {
        let d = self.d;
        let v = spec.c1 as i64 * self.a.1 - spec.c0 as i64 * self.b.1;
        v.rem_euclid(d) as u64
    }
}

/// `c1 K_i(k1..ki) - c0 K_(i-1)(k2..ki) mod D` for `i = 1..r`.
pub fn condition_values(k: &KTuple, spec: &ResidueSpec) -> Vec<u64> {
    let mut res = Residues::start(spec.d);
    k.entries()
        .iter()
        .enumerate()
        .map(|(i, &ki)| {
            res = res.push(ki, i == 0);
            res.value(spec)
        })
        .collect()
}

/// Congruence part of the `A°` definition; the cell is not consulted.
pub fn satisfies_circ(k: &KTuple, spec: &ResidueSpec) -> bool {
    let v = condition_values(k, spec);
    match v.split_last() {
        None => false,
        Some((last, init)) => *last == spec.c0 && init.iter().all(|&x| x != spec.c0),
    }
}

/// Congruence part of the `A*` definition; the cell is not consulted.
pub fn satisfies_star(k: &KTuple, spec: &ResidueSpec) -> bool {
    !k.is_empty() && condition_values(k, spec).iter().all(|&x| x != spec.c0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Brute,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    Circ,
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSetPage {
    pub r: usize,
    pub spec: ResidueSpec,
    pub kind: SetKind,
    /// Sorted lexicographically, no duplicates.
    pub tuples: Vec<KTuple>,
    pub kmax: u64,
    pub source: Source,
}

/// JSON form of a page: `{r, D, c0, c1, kmax, tuples, source}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDump {
    pub r: usize,
    #[serde(rename = "D")]
    pub d: u64,
    pub c0: u64,
    pub c1: u64,
    pub kmax: u64,
    pub tuples: Vec<Vec<u64>>,
    pub source: Source,
}

impl TupleSetPage {
    pub fn dump(&self) -> PageDump {
        PageDump {
            r: self.r,
            d: self.spec.d,
            c0: self.spec.c0,
            c1: self.spec.c1,
            kmax: self.kmax,
            tuples: self.tuples.iter().map(|t| t.entries().to_vec()).collect(),
            source: self.source,
        }
    }
}

/// Depth-first search over tuples of length `r` with entries `<= kmax` and
/// non-empty cells. `accept(prefix, is_full_length)` prunes prefixes.
fn search<F>(r: usize, kmax: u64, accept: &F) -> Vec<KTuple>
where
    F: Fn(&[u64], bool) -> bool + Sync,
{
    if r == 0 || kmax == 0 {
        return Vec::new();
    }
    let triangle = farey_triangle();
    let mut out: Vec<KTuple> = (1..=kmax)
        .into_par_iter()
        .flat_map_iter(|k1| {
            let mut found = Vec::new();
            let mut prefix = Vec::with_capacity(r);
            descend(&triangle, &mut prefix, k1, r, kmax, accept, &mut found);
            found
        })
        .collect();
    out.sort();
    out
}

fn descend<F>(
    parent: &ConvexRegion,
    prefix: &mut Vec<u64>,
    k: u64,
    r: usize,
    kmax: u64,
    accept: &F,
    found: &mut Vec<KTuple>,
) where
    F: Fn(&[u64], bool) -> bool,
{
    prefix.push(k);
    let last = prefix.len() == r;
    if accept(prefix, last) {
        let t = KTuple::new(prefix.clone()).expect("entries are >= 1");
        let region = extend_cell(parent, &t).expect("index within range");
        if !region.is_empty() {
            if last {
                found.push(t);
            } else {
                for j in 1..=kmax {
                    descend(&region, prefix, j, r, kmax, accept, found);
                }
            }
        }
    }
    prefix.pop();
}

fn residue_filter(spec: ResidueSpec, kind: SetKind) -> impl Fn(&[u64], bool) -> bool + Sync {
    move |prefix: &[u64], last: bool| {
        // condition values of all shorter prefixes were checked on the way down
        let mut res = Residues::start(spec.d);
        for (i, &k) in prefix.iter().enumerate() {
            res = res.push(k, i == 0);
        }
        let hit = res.value(&spec) == spec.c0;
        match (last, kind) {
            (true, SetKind::Circ) => hit,
            _ => !hit,
        }
    }
}

fn enumerate(r: usize, spec: &ResidueSpec, kmax: u64, kind: SetKind) -> TupleSetPage {
    let tuples = search(r, kmax, &residue_filter(*spec, kind));
    TupleSetPage { r, spec: *spec, kind, tuples, kmax, source: Source::Brute }
}

/// All tuples of `A°_r(spec)` with entries `<= kmax`, by exhaustive search.
pub fn enumerate_circ(r: usize, spec: &ResidueSpec, kmax: u64) -> TupleSetPage {
    enumerate(r, spec, kmax, SetKind::Circ)
}

/// All tuples of `A*_r(spec)` with entries `<= kmax`, by exhaustive search.
pub fn enumerate_star(r: usize, spec: &ResidueSpec, kmax: u64) -> TupleSetPage {
    enumerate(r, spec, kmax, SetKind::Star)
}

/// Every tuple of length `r`, entries `<= kmax`, whose cell is non-empty.
pub fn enumerate_nonempty(r: usize, kmax: u64) -> Vec<KTuple> {
    search(r, kmax, &|_: &[u64], _: bool| true)
}

/// One row of an explicit table: either a single tuple or a one-parameter
/// family `(prefix, k, suffix)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Row {
    Fixed(Vec<u64>),
    Family(FamilyRow),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRow {
    pub prefix: Vec<u64>,
    pub suffix: Vec<u64>,
    pub lo: u64,
    /// `None` for an infinite family.
    pub hi: Option<u64>,
    /// Restricts the parameter to `k == residue (mod 3)`.
    pub residue: Option<u64>,
}

impl FamilyRow {
    pub fn tuple(&self, k: u64) -> KTuple {
        let mut v = self.prefix.clone();
        v.push(k);
        v.extend_from_slice(&self.suffix);
        KTuple::new(v).expect("entries are >= 1")
    }

    /// Admissible parameters up to `kmax`.
    pub fn params(&self, kmax: u64) -> impl Iterator<Item = u64> + '_ {
        let hi = self.hi.map_or(kmax, |h| h.min(kmax));
        (self.lo..=hi).filter(move |k| self.residue.map_or(true, |c| k % 3 == c))
    }
}

fn fixed(v: &[u64]) -> Row {
    Row::Fixed(v.to_vec())
}

fn fam(prefix: &[u64], suffix: &[u64], lo: u64, hi: Option<u64>, residue: Option<u64>) -> Row {
    Row::Family(FamilyRow { prefix: prefix.to_vec(), suffix: suffix.to_vec(), lo, hi, residue })
}

fn twos(n: usize) -> Vec<u64> {
    vec![2; n]
}

/// Rows for `A°_r(3,1,2)` (equal to `A°_r(3,2,1)`).
fn rows_312(r: usize) -> Vec<Row> {
    match r {
        0 => vec![],
        1 => vec![fam(&[], &[], 1, None, Some(1))],
        2 => vec![fam(&[], &[1], 2, None, Some(2)), fixed(&[2, 2]), fixed(&[2, 3]), fixed(&[2, 4])],
        3 => vec![
            // (3,1,2) itself is empty
            fam(&[], &[1, 2], 6, None, Some(0)),
            fam(&[3, 1], &[], 4, Some(8), None),
            fixed(&[6, 1, 3]),
        ],
        4 => vec![fam(&[3, 2, 1], &[], 7, Some(12), None)],
        _ => {
            let mut prefix = vec![3];
            prefix.extend(twos(r - 3));
            prefix.push(1);
            let r = r as u64;
            vec![fam(&prefix, &[], 4 * r - 10, Some(4 * r - 4), None)]
        }
    }
}

/// Rows for `A°_r(3,1,0)` (equal to `A°_r(3,2,0)`).
fn rows_310(r: usize) -> Vec<Row> {
    match r {
        0 | 1 => vec![],
        2 => vec![fam(&[1], &[], 2, None, Some(2)), fixed(&[2, 2]), fixed(&[3, 2]), fixed(&[4, 2])],
        3 => vec![
            fam(&[1], &[1], 3, None, Some(0)),
            fam(&[2, 1], &[], 6, None, Some(0)),
            fixed(&[1, 3, 2]),
            fixed(&[2, 3, 1]),
            fixed(&[2, 3, 2]),
            fixed(&[3, 1, 6]),
            fam(&[], &[1, 3], 4, Some(8), None),
        ],
        4 => {
            let mut rows = vec![fam(&[1], &[1, 2], 7, None, Some(1)), fam(&[2, 1], &[1], 7, None, Some(1))];
            for t in [
                [1, 4, 1, 3],
                [1, 4, 1, 4],
                [1, 4, 1, 5],
                [2, 4, 1, 3],
                [1, 7, 1, 3],
                [2, 4, 1, 4],
            ] {
                rows.push(fixed(&t));
                let mut rev = t;
                rev.reverse();
                rows.push(fixed(&rev));
            }
            rows.push(fam(&[], &[1, 2, 3], 7, Some(12), None));
            rows
        }
        5 => vec![
            fam(&[2, 1], &[1, 2], 8, None, Some(2)),
            fam(&[], &[1, 2, 2, 3], 10, Some(16), None),
            fam(&[], &[1, 2, 4, 1], 6, Some(8), None),
            fam(&[1, 4, 2, 1], &[], 6, Some(8), None),
            fixed(&[3, 1, 5, 1, 3]),
            fixed(&[2, 1, 8, 1, 3]),
            fixed(&[3, 1, 8, 1, 2]),
            fixed(&[3, 1, 5, 1, 4]),
            fixed(&[4, 1, 5, 1, 3]),
        ],
        _ => {
            let mut suffix = vec![1];
            suffix.extend(twos(r - 3));
            suffix.push(3);
            let r = r as u64;
            vec![fam(&[], &suffix, 4 * r - 10, Some(4 * r - 4), None)]
        }
    }
}

/// The explicit table rows of `A°_r` for the four supported `D = 3` specs.
pub fn table_rows(r: usize, spec: &ResidueSpec) -> Result<Vec<Row>> {
    match (spec.d, spec.c0, spec.c1) {
        (3, 1, 2) | (3, 2, 1) => Ok(rows_312(r)),
        (3, 1, 0) | (3, 2, 0) => Ok(rows_310(r)),
        (d, c0, c1) => Err(Error::UnsupportedSpec { d, c0, c1 }),
    }
}

/// `A°_r(spec)` from the explicit tables, truncated to entries `<= kmax`.
pub fn closed_form_circ(r: usize, spec: &ResidueSpec, kmax: u64) -> Result<TupleSetPage> {
    let mut set = BTreeSet::new();
    for row in table_rows(r, spec)? {
        match row {
            Row::Fixed(v) => {
                if v.iter().all(|&k| k <= kmax) {
                    set.insert(KTuple::new(v)?);
                }
            }
            Row::Family(f) => {
                for k in f.params(kmax) {
                    let t = f.tuple(k);
                    if t.max_entry() <= kmax {
                        set.insert(t);
                    }
                }
            }
        }
    }
    Ok(TupleSetPage {
        r,
        spec: *spec,
        kind: SetKind::Circ,
        tuples: set.into_iter().collect(),
        kmax,
        source: Source::Closed,
    })
}

pub fn continuant_column(page: &TupleSetPage) -> Vec<BigInt> {
    page.tuples.iter().map(continuant).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cell, is_empty};
    use proptest::prelude::*;

    fn t(v: &[u64]) -> KTuple {
        KTuple::new(v.to_vec()).unwrap()
    }

    fn spec(d: u64, c0: u64, c1: u64) -> ResidueSpec {
        ResidueSpec::new(d, c0, c1).unwrap()
    }

    fn tuples(page: &TupleSetPage) -> Vec<Vec<u64>> {
        page.tuples.iter().map(|t| t.entries().to_vec()).collect()
    }

    /// Direct evaluation with big continuants.
    fn values_oracle(k: &KTuple, s: &ResidueSpec) -> Vec<u64> {
        let e = k.entries();
        let d = BigInt::from(s.d());
        (1..=e.len())
            .map(|i| {
                let v = BigInt::from(s.c1()) * continuant(&t(&e[..i]))
                    - BigInt::from(s.c0()) * continuant(&t(&e[1..i]));
                let m = ((v % &d) + &d) % &d;
                u64::try_from(m).unwrap()
            })
            .collect()
    }

    #[test]
    fn spec_validation() {
        assert!(ResidueSpec::new(1, 0, 0).is_err());
        assert!(ResidueSpec::new(3, 3, 1).is_err());
        assert!(ResidueSpec::new(3, 1, 1).is_err());
        assert_eq!(spec(6, 4, 1).delta(), 2);
    }

    #[test]
    fn predicate_examples() {
        let s312 = spec(3, 1, 2);
        let s310 = spec(3, 1, 0);
        assert!(satisfies_circ(&t(&[4]), &s312));
        assert!(!satisfies_star(&t(&[4]), &s312));
        assert!(satisfies_circ(&t(&[2, 2]), &s312));
        assert!(!satisfies_circ(&t(&[1]), &s310));
        assert!(satisfies_star(&t(&[3, 2]), &s312));
        assert!(satisfies_star(&t(&[3, 2, 2, 2, 2, 2]), &s312));
        assert!(!satisfies_circ(&KTuple::empty(), &s312));
    }

    #[test]
    fn enumerate_examples() {
        let got = enumerate_circ(4, &spec(3, 1, 2), 20);
        let want: Vec<Vec<u64>> = (7..=12).map(|k| vec![3, 2, 1, k]).collect();
        assert_eq!(tuples(&got), want);
        assert!(enumerate_circ(1, &spec(3, 1, 0), 30).tuples.is_empty());

        let got = enumerate_circ(3, &spec(3, 1, 0), 9);
        let mut want = vec![
            vec![1, 3, 1],
            vec![1, 6, 1],
            vec![1, 9, 1],
            vec![2, 1, 6],
            vec![2, 1, 9],
            vec![1, 3, 2],
            vec![2, 3, 1],
            vec![2, 3, 2],
            vec![3, 1, 6],
        ];
        want.extend((4..=8).map(|k| vec![k, 1, 3]));
        want.sort();
        assert_eq!(tuples(&got), want);
    }

    #[test]
    fn closed_form_examples() {
        let p = closed_form_circ(5, &spec(3, 1, 2), 100).unwrap();
        assert_eq!(tuples(&p), (10..=16).map(|k| vec![3, 2, 2, 1, k]).collect::<Vec<_>>());
        let p = closed_form_circ(6, &spec(3, 1, 0), 30).unwrap();
        assert_eq!(tuples(&p), (14..=20).map(|k| vec![k, 1, 2, 2, 2, 3]).collect::<Vec<_>>());
        let p = closed_form_circ(2, &spec(3, 1, 0), 8).unwrap();
        assert_eq!(
            tuples(&p),
            vec![vec![1, 2], vec![1, 5], vec![1, 8], vec![2, 2], vec![3, 2], vec![4, 2]]
        );
        assert!(matches!(closed_form_circ(2, &spec(5, 1, 2), 8), Err(Error::UnsupportedSpec { .. })));
    }

    #[test]
    fn continuant_column_examples() {
        let page = TupleSetPage {
            r: 0,
            spec: spec(3, 1, 0),
            kind: SetKind::Circ,
            tuples: vec![t(&[3, 2, 1, 9]), t(&[2, 3, 2]), t(&[1, 4, 1, 5])],
            kmax: 9,
            source: Source::Closed,
        };
        let col: Vec<i64> = continuant_column(&page).iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(col, vec![13, 8, 7]);
    }

    #[test]
    fn brute_matches_tables() {
        for r in 1..=5 {
            let kmax = 4 * r as u64 + 8;
            for s in [spec(3, 1, 2), spec(3, 1, 0)] {
                let brute = enumerate_circ(r, &s, kmax);
                let closed = closed_form_circ(r, &s, kmax).unwrap();
                assert_eq!(brute.tuples, closed.tuples, "r={r} spec={s:?}");
            }
        }
    }

    #[test]
    fn residue_symmetry() {
        for r in 1..=4 {
            let kmax = 4 * r as u64 + 8;
            assert_eq!(enumerate_circ(r, &spec(3, 1, 2), kmax).tuples, enumerate_circ(r, &spec(3, 2, 1), kmax).tuples);
            assert_eq!(enumerate_circ(r, &spec(3, 1, 0), kmax).tuples, enumerate_circ(r, &spec(3, 2, 0), kmax).tuples);
        }
    }

    #[test]
    fn star_stabilisation() {
        for r in 4..=5usize {
            let kmax = 4 * r as u64 + 8;
            let got = enumerate_star(r, &spec(3, 1, 2), kmax);
            let mut a = vec![3];
            a.extend(twos(r - 2));
            a.push(1);
            let mut b = vec![3];
            b.extend(twos(r - 1));
            let mut want = vec![a, b];
            want.sort();
            assert_eq!(tuples(&got), want, "r={r}");
        }
        let r = 5usize;
        let kmax = 4 * r as u64 + 8;
        let got = enumerate_star(r, &spec(3, 1, 0), kmax);
        let want: Vec<Vec<u64>> = (4 * r as u64 - 6..=kmax).map(|k| vec![k, 1, 2, 2, 2]).collect();
        assert_eq!(tuples(&got), want);
    }

    #[test]
    fn large_entries_force_ones_and_twos() {
        for r in 1..=4usize {
            let kmax = 4 * r as u64 + 12;
            for k in enumerate_nonempty(r, kmax) {
                let e = k.entries();
                let m = k.max_entry();
                if m < 4 * r as u64 + 2 {
                    continue;
                }
                let j = e.iter().position(|&x| x == m).unwrap();
                for (i, &x) in e.iter().enumerate() {
                    match i.abs_diff(j) {
                        0 => {}
                        1 => assert_eq!(x, 1, "{k}"),
                        _ => assert_eq!(x, 2, "{k}"),
                    }
                }
            }
        }
    }

    #[test]
    fn nonempty_enumeration_agrees_with_cells() {
        let all = enumerate_nonempty(3, 9);
        let mut want = Vec::new();
        for a in 1..=9 {
            for b in 1..=9 {
                for c in 1..=9 {
                    let k = t(&[a, b, c]);
                    if !is_empty(&k) {
                        want.push(k);
                    }
                }
            }
        }
        assert_eq!(all, want);
    }

    #[test]
    fn pages_are_sorted_and_valid() {
        let s = spec(3, 1, 0);
        let page = enumerate_circ(4, &s, 16);
        assert!(page.tuples.windows(2).all(|w| w[0] < w[1]));
        for k in &page.tuples {
            assert!(satisfies_circ(k, &s));
            assert!(!cell(k).is_empty());
        }
    }

    #[test]
    fn page_dump_json() {
        let page = closed_form_circ(2, &spec(3, 1, 0), 5).unwrap();
        let json = serde_json::to_string(&page.dump()).unwrap();
        assert_eq!(
            json,
            r#"{"r":2,"D":3,"c0":1,"c1":0,"kmax":5,"tuples":[[1,2],[1,5],[2,2],[3,2],[4,2]],"source":"closed"}"#
        );
        let back: PageDump = serde_json::from_str(&json).unwrap();
        assert_eq!(back, page.dump());
    }

    proptest! {
        #[test]
        fn running_residues_match_big_continuants(
            v in prop::collection::vec(1u64..40, 1..9),
            d in 2u64..8,
            c0 in 0u64..8,
            c1 in 0u64..8,
        ) {
            prop_assume!(c0 < d && c1 < d && c0 != c1);
            let s = spec(d, c0, c1);
            let k = t(&v);
            prop_assert_eq!(condition_values(&k, &s), values_oracle(&k, &s));
        }
    }
}
