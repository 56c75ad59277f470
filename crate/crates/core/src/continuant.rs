//! BCZ index tuples and the minus-sign continuant.
//!
//! The continuant used here satisfies
//!
//! ```text
//! K(-1) = 0,  K() = 1,  K(k1,..,kn) = kn * K(k1,..,k(n-1)) - K(k1,..,k(n-2))
//! ```
//!
//! which is the recurrence obeyed by consecutive Farey denominators
//! (`q'' = k q' - q`). It is *not* the classical plus-sign continuant of
//! continued fractions. The sign convention is inferred from the explicit
//! instances it has to reproduce, e.g. `K(2,1,k) = k - 2`,
//! `K(3,2,1,k) = 2k - 5`, `K(4,2,1,k) = 3k - 7`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite sequence of BCZ indices `(k1, .., kr)`, every entry `>= 1`.
///
/// The empty tuple is allowed; its continuant is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct KTuple(Vec<u64>);

impl KTuple {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.iter().any(|&k| k == 0) {
            return Err(Error::NonPositiveEntry(0));
        }
        Ok(KTuple(entries))
    }

    pub fn empty() -> Self {
        KTuple(Vec::new())
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest entry, `0` for the empty tuple.
    pub fn max_entry(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn reversed(&self) -> KTuple {
        KTuple(self.0.iter().rev().copied().collect())
    }

    /// The tuple with `k` appended.
    pub fn pushed(&self, k: u64) -> Result<KTuple> {
        if k == 0 {
            return Err(Error::NonPositiveEntry(0));
        }
        let mut v = self.0.clone();
        v.push(k);
        Ok(KTuple(v))
    }
}

impl TryFrom<Vec<u64>> for KTuple {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        KTuple::new(v)
    }
}

impl From<KTuple> for Vec<u64> {
    fn from(t: KTuple) -> Vec<u64> {
        t.0
    }
}

impl fmt::Display for KTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Parses `"3,2,1,7"`, optionally wrapped in parentheses. An empty string
/// (or `"()"`) is the empty tuple.
impl FromStr for KTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if body.is_empty() {
            return Ok(KTuple::empty());
        }
        let mut entries = Vec::new();
        for part in body.split(',') {
            let part = part.trim();
            let v: i64 = part.parse().map_err(|_| Error::TupleParse(s.to_string()))?;
            if v < 1 {
                return Err(Error::NonPositiveEntry(v));
            }
            entries.push(v as u64);
        }
        Ok(KTuple(entries))
    }
}

/// Continuant of an arbitrary slice of indices (no entry validation).
pub(crate) fn continuant_of(ks: &[u64]) -> BigInt {
    let mut prev = BigInt::from(0); // K(-1)
    let mut cur = BigInt::from(1); // K()
    for &k in ks {
        let next = BigInt::from(k) * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Minus-sign continuant `K_r(k1, .., kr)`.
///
/// May be zero or negative for tuples whose cell is empty.
pub fn continuant(k: &KTuple) -> BigInt {
    continuant_of(k.entries())
}

/// Closed one- and two-parameter tuple families whose continuants have
/// simple polynomial values. `n` counts the repeated 2's.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `(3, 2^n)`: `2n + 3`.
    ThreeTwos { n: u64 },
    /// `(2^n, k)`: `k(n+1) - n`.
    TwosK { n: u64, k: u64 },
    /// `(3, 2^n, k)`: `2kn + 3k - 2n - 1`.
    ThreeTwosK { n: u64, k: u64 },
    /// `(2^n, 1, k)`: `k - n - 1`.
    TwosOneK { n: u64, k: u64 },
    /// `(3, 2^n, 1, k)`: `2k - 2n - 3`.
    ThreeTwosOneK { n: u64, k: u64 },
    /// `(k, 1, 2^n)`: `k - n - 1` (reversal of [`Family::TwosOneK`]).
    KOneTwos { n: u64, k: u64 },
    /// `(k, 1, 2^n, 3)`: `2k - 2n - 3` (reversal of [`Family::ThreeTwosOneK`]).
    KOneTwosThree { n: u64, k: u64 },
}

impl Family {
    /// Looks a family up by name, e.g. `"3,2^n,1,k"`. Whitespace and
    /// parentheses are ignored.
    pub fn from_id(id: &str, n: u64, k: u64) -> Result<Family> {
        let key: String = id
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        let f = match key.as_str() {
            "3,2^n" => Family::ThreeTwos { n },
            "2^n,k" => Family::TwosK { n, k },
            "3,2^n,k" => Family::ThreeTwosK { n, k },
            "2^n,1,k" => Family::TwosOneK { n, k },
            "3,2^n,1,k" => Family::ThreeTwosOneK { n, k },
            "k,1,2^n" => Family::KOneTwos { n, k },
            "k,1,2^n,3" => Family::KOneTwosThree { n, k },
            _ => return Err(Error::InvalidParameter(format!("unknown tuple family {id:?}"))),
        };
        Ok(f)
    }

    /// The tuple this family member denotes.
    pub fn expand(&self) -> Result<KTuple> {
        let twos = |n: u64| std::iter::repeat(2).take(n as usize);
        let v: Vec<u64> = match *self {
            Family::ThreeTwos { n } => std::iter::once(3).chain(twos(n)).collect(),
            Family::TwosK { n, k } => twos(n).chain([k]).collect(),
            Family::ThreeTwosK { n, k } => std::iter::once(3).chain(twos(n)).chain([k]).collect(),
            Family::TwosOneK { n, k } => twos(n).chain([1, k]).collect(),
            Family::ThreeTwosOneK { n, k } => {
                std::iter::once(3).chain(twos(n)).chain([1, k]).collect()
            }
            Family::KOneTwos { n, k } => [k, 1].into_iter().chain(twos(n)).collect(),
            Family::KOneTwosThree { n, k } => [k, 1].into_iter().chain(twos(n)).chain([3]).collect(),
        };
        KTuple::new(v)
    }
}

/// Closed-form continuant of a family member; always equal to
/// `continuant(&family.expand()?)`.
pub fn family_continuant(family: Family) -> Result<BigInt> {
    // expansion doubles as parameter validation (k >= 1)
    family.expand()?;
    let i = |v: u64| BigInt::from(v);
    let value = match family {
        Family::ThreeTwos { n } => 2 * i(n) + 3,
        Family::TwosK { n, k } => i(k) * (i(n) + 1) - i(n),
        Family::ThreeTwosK { n, k } => 2 * i(k) * i(n) + 3 * i(k) - 2 * i(n) - 1,
        Family::TwosOneK { n, k } | Family::KOneTwos { n, k } => i(k) - i(n) - 1,
        Family::ThreeTwosOneK { n, k } | Family::KOneTwosThree { n, k } => {
            2 * i(k) - 2 * i(n) - 3
        }
    };
    Ok(value)
}
