//! Exact rational convex polygons and the BCZ cells `T(k1, .., kr)`.
//!
//! A cell is the set of points of the Farey triangle whose first `r` BCZ
//! indices are `k1, .., kr`. It is cut out of the triangle by two linear
//! inequalities per index. Writing `x0 = x`, `x1 = y` and
//! `x(i+1) = ki * xi - x(i-1)` for the coordinates of the iterates, the
//! `i`-th index equals `ki` iff
//!
//! ```text
//! K(k1,..,ki+1) y - K(k2,..,ki+1) x > 1      (lower line f_i)
//! K(k1,..,ki)   y - K(k2,..,ki)   x <= 1     (upper line g_i)
//! ```
//!
//! with `K` the minus-sign continuant. These are kept in this
//! denominator-free form, so no division by a (possibly non-positive)
//! continuant ever happens.
//!
//! Regions are stored by their closure. Strict and non-strict boundaries
//! give the same closure; a region is empty when its interior is, i.e. when
//! its area is zero.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::continuant::{continuant_of, KTuple};
use crate::{Error, Result};

pub type Rational = BigRational;

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Point::new(rat(x.0, x.1), rat(y.0, y.1))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `o, a, b`.
fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    /// `a x + b y < c`
    Strict,
    /// `a x + b y <= c`
    NonStrict,
}

/// The half-plane `a x + b y < c` (or `<=`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub sense: Sense,
}

impl HalfPlane {
    pub fn new(a: Rational, b: Rational, c: Rational, sense: Sense) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidParameter(
                "half-plane normal must be non-zero".into(),
            ));
        }
        Ok(HalfPlane { a, b, c, sense })
    }

    /// `c - (a x + b y)`; non-negative exactly on the closure.
    fn slack(&self, p: &Point) -> Rational {
        &self.c - (&self.a * &p.x + &self.b * &p.y)
    }

    pub fn contains(&self, p: &Point) -> bool {
        let s = self.slack(p);
        match self.sense {
            Sense::Strict => s.is_positive(),
            Sense::NonStrict => !s.is_negative(),
        }
    }
}

/// A closed convex polygon with exact vertices.
///
/// Vertices run counter-clockwise from the lexicographically smallest one,
/// with no three consecutive vertices collinear. When the interior is empty
/// the region is flagged `empty` and whatever degenerate vertex list was
/// left (a segment, a point, nothing) is kept for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexRegion {
    vertices: Vec<Point>,
    empty: bool,
}

impl ConvexRegion {
    /// Convex hull of the given points, in canonical order.
    pub fn from_points(points: impl IntoIterator<Item = Point>) -> Self {
        let mut pts: Vec<Point> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            return ConvexRegion { vertices: pts, empty: true };
        }
        // Andrew's monotone chain; collinear points are dropped.
        let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
        for p in &pts {
            while lower.len() >= 2
                && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            // all points collinear: keep the extreme points
            let first = pts[0].clone();
            let last = pts[pts.len() - 1].clone();
            return ConvexRegion { vertices: vec![first, last], empty: true };
        }
        ConvexRegion { vertices: lower, empty: false }
    }

    pub fn empty_region() -> Self {
        ConvexRegion { vertices: Vec::new(), empty: true }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Exact area of the closure; zero when empty.
    pub fn area(&self) -> Rational {
        if self.empty {
            return Rational::zero();
        }
        let n = self.vertices.len();
        let mut twice = Rational::zero();
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            twice += &p.x * &q.y - &q.x * &p.y;
        }
        twice / int(2)
    }

    /// Average of the vertices; an interior point for a non-empty region.
    pub fn centroid(&self) -> Option<Point> {
        if self.empty {
            return None;
        }
        let n = int(self.vertices.len() as i64);
        let mut sx = Rational::zero();
        let mut sy = Rational::zero();
        for p in &self.vertices {
            sx += &p.x;
            sy += &p.y;
        }
        Some(Point::new(sx / &n, sy / n))
    }

    /// Membership in the closure.
    pub fn contains_closed(&self, p: &Point) -> bool {
        if self.empty {
            return false;
        }
        let n = self.vertices.len();
        (0..n).all(|i| !cross(&self.vertices[i], &self.vertices[(i + 1) % n], p).is_negative())
    }

    /// Membership in the open interior.
    pub fn contains_interior(&self, p: &Point) -> bool {
        if self.empty {
            return false;
        }
        let n = self.vertices.len();
        (0..n).all(|i| cross(&self.vertices[i], &self.vertices[(i + 1) % n], p).is_positive())
    }
}

/// The Farey triangle `0 < x, y <= 1, x + y > 1`.
pub fn farey_triangle() -> ConvexRegion {
    ConvexRegion::from_points([
        Point::from_ratios((0, 1), (1, 1)),
        Point::from_ratios((1, 1), (1, 1)),
        Point::from_ratios((1, 1), (0, 1)),
    ])
}

/// `T(k)`, built directly from its known vertices.
pub fn base_cell(k: u64) -> Result<ConvexRegion> {
    match k {
        0 => Err(Error::ZeroIndex),
        1 => Ok(ConvexRegion::from_points([
            Point::from_ratios((0, 1), (1, 1)),
            Point::from_ratios((1, 1), (1, 1)),
            Point::from_ratios((1, 3), (2, 3)),
        ])),
        _ => {
            let k = k as i64;
            Ok(ConvexRegion::from_points([
                Point::from_ratios((k, k + 2), (2, k + 2)),
                Point::from_ratios((1, 1), (2, k)),
                Point::from_ratios((1, 1), (2, k + 1)),
                Point::from_ratios((k - 1, k + 1), (2, k + 1)),
            ]))
        }
    }
}

/// The two constraints contributed by index `i` (1-based) of `k`:
/// `(f, g)` with `f` the strict lower line and `g` the non-strict upper line.
pub fn constraint_pair(k: &KTuple, i: usize) -> Result<(HalfPlane, HalfPlane)> {
    let ks = k.entries();
    if i == 0 || i > ks.len() {
        return Err(Error::IndexOutOfRange { index: i, len: ks.len() });
    }
    let prefix = &ks[..i];
    let mut bumped = prefix.to_vec();
    bumped[i - 1] += 1;

    let upper_y = continuant_of(prefix);
    let upper_x = continuant_of(&prefix[1..]);
    let lower_y = continuant_of(&bumped);
    let lower_x = continuant_of(&bumped[1..]);

    // K+ y - A+ x > 1   <=>   A+ x - K+ y < -1
    let f = HalfPlane {
        a: int(lower_x),
        b: -int(lower_y),
        c: -Rational::one(),
        sense: Sense::Strict,
    };
    // K y - A x <= 1
    let g = HalfPlane {
        a: -int(upper_x),
        b: int(upper_y),
        c: Rational::one(),
        sense: Sense::NonStrict,
    };
    Ok((f, g))
}

/// Intersection of `region` with the closure of `h`.
pub fn clip(region: &ConvexRegion, h: &HalfPlane) -> ConvexRegion {
    let vs = &region.vertices;
    if vs.is_empty() {
        return region.clone();
    }
    let slack: Vec<Rational> = vs.iter().map(|p| h.slack(p)).collect();
    if slack.iter().all(|s| !s.is_negative()) {
        return region.clone();
    }
    let n = vs.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (&vs[i], &vs[j]);
        let (sp, sq) = (&slack[i], &slack[j]);
        if !sp.is_negative() {
            out.push(p.clone());
        }
        if (sp.is_positive() && sq.is_negative()) || (sp.is_negative() && sq.is_positive()) {
            let t = sp / (sp - sq);
            out.push(Point::new(
                &p.x + (&q.x - &p.x) * &t,
                &p.y + (&q.y - &p.y) * &t,
            ));
        }
    }
    let mut clipped = ConvexRegion::from_points(out);
    clipped.empty |= region.empty;
    clipped
}

/// Refines the cell of `k` without its last index to the cell of `k`.
pub fn extend_cell(prefix_cell: &ConvexRegion, k: &KTuple) -> Result<ConvexRegion> {
    if prefix_cell.is_empty() {
        return Ok(prefix_cell.clone());
    }
    let (f, g) = constraint_pair(k, k.len())?;
    Ok(clip(&clip(prefix_cell, &f), &g))
}

/// The closure of `T(k1, .., kr)`; the empty tuple gives the whole triangle.
pub fn cell(k: &KTuple) -> ConvexRegion {
    let mut region = farey_triangle();
    for i in 1..=k.len() {
        let (f, g) = constraint_pair(k, i).expect("index within range");
        region = clip(&clip(&region, &f), &g);
        if region.is_empty() {
            break;
        }
    }
    region
}

pub fn area(region: &ConvexRegion) -> Rational {
    region.area()
}

pub fn is_empty(k: &KTuple) -> bool {
    cell(k).is_empty()
}

/// Exact `4 / (k (k+1) (k+2))`, the area of `T(k)` for `k >= 2`.
pub fn base_cell_area(k: u64) -> Rational {
    if k == 1 {
        return rat(1, 6);
    }
    let k = BigInt::from(k);
    Rational::new(BigInt::from(4), &k * (&k + 1u32) * (&k + 2u32))
}

/// JSON dump of a cell: `{tuple, empty, vertices: [["p/q","p/q"], ..], area: "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDump {
    pub tuple: Vec<u64>,
    pub empty: bool,
    pub vertices: Vec<[String; 2]>,
    pub area: String,
}

impl RegionDump {
    pub fn new(k: &KTuple, region: &ConvexRegion) -> Self {
        RegionDump {
            tuple: k.entries().to_vec(),
            empty: region.is_empty(),
            vertices: region
                .vertices()
                .iter()
                .map(|p| [p.x.to_string(), p.y.to_string()])
                .collect(),
            area: region.area().to_string(),
        }
    }
}
