//! Exact-arithmetic toolkit for the distribution of gaps between Farey
//! fractions whose denominators lie in a fixed residue class.
//!
//! The crate is organised bottom-up:
//!
//! * [`continuant`] – tuples of BCZ indices and the minus-sign continuant.
//! * [`geometry`] – exact rational convex polygons, the cells `T(k1,..,kr)`.
//! * [`bcz`] – the BCZ map on the Farey triangle and point itineraries.
//! * [`tuple_sets`] – the tuple sets whose cells carry the limit densities,
//!   by brute force and by closed-form tables.
//! * [`farey`] – streaming Farey sequences and empirical gap histograms.
//! * [`proportions`] – limit proportions for `D = 3`, closed forms and
//!   area sums, plus verification reports.

pub mod bcz;
pub mod continuant;
pub mod farey;
pub mod geometry;
pub mod proportions;
pub mod tuple_sets;

pub use continuant::{continuant, family_continuant, Family, KTuple};
pub use geometry::{area, cell, is_empty, ConvexRegion, HalfPlane, Point, Rational, Sense};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("tuple entries must be >= 1, got {0}")]
    NonPositiveEntry(i64),
    #[error("could not parse tuple {0:?}")]
    TupleParse(String),
    #[error("constraint index {index} out of range for tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index value k must be >= 1")]
    ZeroIndex,
    #[error("point ({x}, {y}) is outside the Farey triangle")]
    OutsideTriangle { x: String, y: String },
    #[error("invalid residue specification: {0}")]
    InvalidResidue(String),
    #[error("no closed-form table for D={d}, c0={c0}, c1={c1}")]
    UnsupportedSpec { d: u64, c0: u64, c1: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Farey order must be >= 1")]
    InvalidOrder,
    #[error("arithmetic overflow at Farey order {0}")]
    Overflow(u64),
    #[error("no coloured fractions in the histogram")]
    NoColoredFractions,
}

pub type Result<T> = std::result::Result<T, Error>;
