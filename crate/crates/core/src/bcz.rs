//! The BCZ map `T(x, y) = (y, floor((1 + x) / y) * y - x)` on the Farey
//! triangle, evaluated exactly on rationals.
//!
//! Consecutive Farey denominators scaled by the order, `(q/Q, q'/Q)`, are
//! carried by `T` to `(q'/Q, q''/Q)`; the index `floor((1+x)/y)` of a point
//! tells which cell `T(k)` it lies in.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::continuant::KTuple;
use crate::geometry::{int, Point, Rational};
use crate::{Error, Result};

/// A point of the Farey triangle `0 < x, y <= 1, x + y > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrianglePoint(Point);

impl TrianglePoint {
    pub fn new(x: Rational, y: Rational) -> Result<Self> {
        let one = Rational::one();
        let inside = x.is_positive() && y.is_positive() && x <= one && y <= one && &x + &y > one;
        if !inside {
            return Err(Error::OutsideTriangle { x: x.to_string(), y: y.to_string() });
        }
        Ok(TrianglePoint(Point::new(x, y)))
    }

    pub fn from_point(p: Point) -> Result<Self> {
        TrianglePoint::new(p.x, p.y)
    }

    /// `(a/n, b/n)`, the normalised pair of consecutive denominators.
    pub fn from_denominators(a: u64, b: u64, n: u64) -> Result<Self> {
        let n = BigInt::from(n);
        TrianglePoint::new(
            Rational::new(BigInt::from(a), n.clone()),
            Rational::new(BigInt::from(b), n),
        )
    }

    pub fn x(&self) -> &Rational {
        &self.0.x
    }

    pub fn y(&self) -> &Rational {
        &self.0.y
    }

    pub fn point(&self) -> &Point {
        &self.0
    }
}

/// `floor((1 + x) / y)`, always `>= 1` on the triangle.
pub fn kappa(p: &TrianglePoint) -> u64 {
    let q = (Rational::one() + p.x()) / p.y();
    let floor = q.numer().div_floor(q.denom());
    floor.to_u64().expect("index fits in u64 on the triangle")
}

/// The affine branch of `T` used on the cell `T(k)`: `(x, y) -> (y, k y - x)`.
///
/// Applies to any point; on `T(k)` it agrees with [`bcz_map`].
pub fn apply_branch(k: u64, p: &Point) -> Point {
    Point::new(p.y.clone(), int(k) * &p.y - &p.x)
}

pub fn bcz_map(p: &TrianglePoint) -> TrianglePoint {
    let image = apply_branch(kappa(p), p.point());
    debug_assert!(TrianglePoint::new(image.x.clone(), image.y.clone()).is_ok());
    TrianglePoint(image)
}

/// `(kappa(p), kappa(T p), .., kappa(T^(r-1) p))`.
pub fn itinerary(p: &TrianglePoint, r: usize) -> KTuple {
    let mut out = Vec::with_capacity(r);
    let mut cur = p.clone();
    for step in 0..r {
        out.push(kappa(&cur));
        if step + 1 < r {
            cur = bcz_map(&cur);
        }
    }
    KTuple::new(out).expect("indices are >= 1 on the triangle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{base_cell, cell, clip, farey_triangle, rat, ConvexRegion, HalfPlane, Sense};

    fn tp(x: (i64, i64), y: (i64, i64)) -> TrianglePoint {
        TrianglePoint::new(rat(x.0, x.1), rat(y.0, y.1)).unwrap()
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&tp((1, 1), (1, 1))), 2);
        assert_eq!(kappa(&tp((1, 5), (1, 1))), 1);
        assert_eq!(kappa(&tp((2, 3), (2, 5))), 4);
    }

    #[test]
    fn map_examples() {
        assert_eq!(bcz_map(&tp((1, 1), (1, 1))), tp((1, 1), (1, 1)));
        assert_eq!(bcz_map(&tp((1, 5), (1, 1))), tp((1, 1), (4, 5)));
        assert_eq!(bcz_map(&tp((1, 1), (4, 5))), tp((4, 5), (3, 5)));
    }

    #[test]
    fn outside_points_rejected() {
        assert!(TrianglePoint::new(rat(1, 2), rat(1, 2)).is_err());
        assert!(TrianglePoint::new(rat(0, 1), rat(1, 1)).is_err());
        assert!(TrianglePoint::new(rat(3, 2), rat(1, 2)).is_err());
        assert!(TrianglePoint::new(rat(1, 2), rat(6, 5)).is_err());
        assert!(TrianglePoint::new(rat(1, 1), rat(1, 1)).is_ok());
    }

    #[test]
    fn itinerary_examples() {
        assert_eq!(itinerary(&tp((1, 1), (1, 1)), 3).entries(), &[2, 2, 2]);
        let k = KTuple::new(vec![3, 2, 1, 7]).unwrap();
        let c = cell(&k).centroid().unwrap();
        assert_eq!(itinerary(&TrianglePoint::from_point(c).unwrap(), 4), k);
        let c = base_cell(5).unwrap().centroid().unwrap();
        assert_eq!(itinerary(&TrianglePoint::from_point(c).unwrap(), 1).entries(), &[5]);
    }

    #[test]
    fn affine_branches_preserve_area() {
        // y <= 3/4 meets every T(k), k <= 4 (y >= 3/4 misses T(3), T(4))
        let top = HalfPlane::new(int(0), int(1), rat(3, 4), Sense::NonStrict).unwrap();
        let band = clip(&farey_triangle(), &top);
        for k in 1..=4 {
            let piece = clip_region(&band, &base_cell(k).unwrap());
            assert!(!piece.is_empty(), "k={k}");
            let image = ConvexRegion::from_points(
                piece.vertices().iter().map(|p| apply_branch(k, p)),
            );
            assert_eq!(image.area(), piece.area(), "k={k}");
            assert!(image.vertices().iter().all(|v| farey_triangle().contains_closed(v)));
        }
    }

    /// Intersection of two convex regions by clipping against the edges of
    /// the second.
    fn clip_region(a: &ConvexRegion, b: &ConvexRegion) -> ConvexRegion {
        let vs = b.vertices();
        let n = vs.len();
        let mut out = a.clone();
        for i in 0..n {
            let (p, q) = (&vs[i], &vs[(i + 1) % n]);
            // left of p->q:  (q - p) x (z - p) >= 0
            let a_ = &q.y - &p.y;
            let b_ = &p.x - &q.x;
            let c_ = &a_ * &p.x + &b_ * &p.y;
            let h = HalfPlane::new(a_, b_, c_, Sense::NonStrict).unwrap();
            out = clip(&out, &h);
        }
        out
    }
}
