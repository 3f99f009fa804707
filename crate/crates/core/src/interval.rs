//! Single intervals with rational endpoints and per-endpoint openness.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("interval endpoints out of order: lo {lo} > hi {hi}")]
    Reversed { lo: Rational, hi: Rational },
    #[error("degenerate interval at {0} must be closed at both ends")]
    EmptyDegenerate(Rational),
    #[error("scale factor must be non-zero")]
    ZeroScale,
}

/// An interval `lo..hi` where each end is independently open or closed.
///
/// Either `lo < hi`, or `lo == hi` with both ends closed (a single point).
/// The empty set is not an `Interval`; emptiness is represented by an empty
/// [`IntervalUnion`](crate::IntervalUnion).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Deserialize)]
struct RawInterval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl TryFrom<RawInterval> for Interval {
    type Error = IntervalError;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.lo, raw.hi, raw.lo_closed, raw.hi_closed)
    }
}

impl Interval {
    pub fn new(
        lo: Rational,
        hi: Rational,
        lo_closed: bool,
        hi_closed: bool,
    ) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError::Reversed { lo, hi });
        }
        if lo == hi && !(lo_closed && hi_closed) {
            return Err(IntervalError::EmptyDegenerate(lo));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    /// Builds the interval when it is non-empty, `None` otherwise.
    pub fn try_new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }

    /// `[lo, hi]`. Panics if `lo > hi`.
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, hi, true, true).expect("closed interval with lo > hi")
    }

    /// `(lo, hi)`. Panics unless `lo < hi`.
    pub fn open(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, hi, false, false).expect("open interval needs lo < hi")
    }

    /// The single point `[x, x]`.
    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    /// `c(I)`
    pub fn center(&self) -> Rational {
        Rational::midpoint(&self.lo, &self.hi)
    }

    /// `|I|`; openness does not matter.
    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }

    pub fn is_open(&self) -> bool {
        !self.lo_closed && !self.hi_closed
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// True when `other` is a subset of `self`.
    pub fn covers(&self, other: &Interval) -> bool {
        let lo_ok = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => self.lo_closed || !other.lo_closed,
            std::cmp::Ordering::Greater => false,
        };
        let hi_ok = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => self.hi_closed || !other.hi_closed,
            std::cmp::Ordering::Less => false,
        };
        lo_ok && hi_ok
    }

    /// Intersection of two intervals, `None` when empty.
    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::try_new(lo, hi, lo_closed, hi_closed)
    }

    /// `{x + t : x ∈ I}`
    pub fn translate(&self, t: &Rational) -> Interval {
        Interval {
            lo: &self.lo + t,
            hi: &self.hi + t,
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }

    /// `{-x : x ∈ I}`; the flags swap ends.
    pub fn reflect(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }

    /// `{k x : x ∈ I}` for `k != 0`.
    pub fn scale(&self, k: &Rational) -> Result<Interval, IntervalError> {
        if k.is_zero() {
            return Err(IntervalError::ZeroScale);
        }
        let a = &self.lo * k;
        let b = &self.hi * k;
        Ok(if k.is_positive() {
            Interval {
                lo: a,
                hi: b,
                lo_closed: self.lo_closed,
                hi_closed: self.hi_closed,
            }
        } else {
            Interval {
                lo: b,
                hi: a,
                lo_closed: self.hi_closed,
                hi_closed: self.lo_closed,
            }
        })
    }

    /// Pairwise Minkowski sum: an end is attained only if both summands attain theirs.
    pub fn sum(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            lo_closed: self.lo_closed && other.lo_closed,
            hi_closed: self.hi_closed && other.hi_closed,
        }
    }

    /// Some point of the interval: a closed end if there is one, else the center.
    pub fn representative(&self) -> Rational {
        if self.lo_closed {
            self.lo.clone()
        } else if self.hi_closed {
            self.hi.clone()
        } else {
            self.center()
        }
    }

    pub(crate) fn into_parts(self) -> (Rational, Rational, bool, bool) {
        (self.lo, self.hi, self.lo_closed, self.hi_closed)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn rejects_empty_shapes() {
        assert!(Interval::new(q(1, 2), q(1, 3), true, true).is_err());
        assert!(Interval::new(q(1, 2), q(1, 2), true, false).is_err());
        assert!(Interval::new(q(1, 2), q(1, 2), true, true).is_ok());
    }

    #[test]
    fn accessors() {
        let i = Interval::open(q(1, 3), q(2, 3));
        assert_eq!(i.center(), q(1, 2));
        assert_eq!(i.length(), q(1, 3));
        assert!(!i.contains(&q(1, 3)));
        assert!(i.contains(&q(1, 2)));
    }

    #[test]
    fn reflect_swaps_flags() {
        let i = Interval::new(q(1, 2), q(1, 1), false, true).unwrap();
        let r = i.reflect();
        assert_eq!(r, Interval::new(q(-1, 1), q(-1, 2), true, false).unwrap());
    }

    #[test]
    fn pair_sum_rule() {
        let a = Interval::open(q(1, 3), q(2, 3));
        let p = Interval::point(q(-1, 3));
        assert_eq!(a.sum(&p), Interval::open(q(0, 1), q(1, 3)));
        let b = Interval::new(q(0, 1), q(1, 1), true, false).unwrap();
        let c = Interval::closed(q(0, 1), q(1, 1));
        assert_eq!(b.sum(&c), Interval::new(q(0, 1), q(2, 1), true, false).unwrap());
    }

    #[test]
    fn negative_scale_swaps() {
        let i = Interval::new(q(0, 1), q(1, 1), true, false).unwrap();
        assert_eq!(
            i.scale(&q(-2, 1)).unwrap(),
            Interval::new(q(-2, 1), q(0, 1), false, true).unwrap()
        );
        assert_eq!(i.scale(&q(0, 1)), Err(IntervalError::ZeroScale));
    }

    #[test]
    fn deserialize_validates() {
        let ok: Interval =
            serde_json::from_str(r#"{"lo":"0/1","hi":"1/3","lo_closed":true,"hi_closed":false}"#)
                .unwrap();
        assert_eq!(ok, Interval::new(q(0, 1), q(1, 3), true, false).unwrap());
        let bad = serde_json::from_str::<Interval>(
            r#"{"lo":"1/2","hi":"1/3","lo_closed":true,"hi_closed":true}"#,
        );
        assert!(bad.is_err());
    }
}
