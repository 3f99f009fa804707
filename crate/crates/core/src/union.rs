//! Normalized finite unions of intervals and their exact set algebra.
//!
//! A union is kept in canonical form: parts sorted by left end, pairwise
//! disjoint, and never mergeable. Two parts may share an endpoint only when
//! both facing ends are open; the shared point is then a *puncture* that is
//! missing from the set. Punctures matter here: the missing sets studied by
//! this crate contain isolated points that closed-interval arithmetic would
//! erase.
//!
//! Boolean operations work on the elementary subdivision induced by all
//! endpoints of both operands: every endpoint is a piece, and so is every open
//! gap between consecutive endpoints. Membership is constant on each piece, so
//! evaluating the predicate once per piece is exact.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::interval::{Interval, IntervalError};
use crate::rational::Rational;

/// A canonical finite union of [`Interval`]s.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl From<Vec<Interval>> for IntervalUnion {
    fn from(raw: Vec<Interval>) -> Self {
        IntervalUnion::normalize(raw)
    }
}

impl From<IntervalUnion> for Vec<Interval> {
    fn from(u: IntervalUnion) -> Self {
        u.parts
    }
}

impl From<Interval> for IntervalUnion {
    fn from(i: Interval) -> Self {
        IntervalUnion { parts: vec![i] }
    }
}

impl FromIterator<Interval> for IntervalUnion {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IntervalUnion::normalize(iter.into_iter().collect())
    }
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    /// Canonical form of an arbitrary finite collection of intervals.
    pub fn normalize(mut raw: Vec<Interval>) -> Self {
        raw.sort_by(|a, b| {
            a.lo()
                .cmp(b.lo())
                .then_with(|| b.lo_closed().cmp(&a.lo_closed()))
        });
        let parts = merge_sorted(raw);
        let u = IntervalUnion { parts };
        debug_assert!(u.is_normalized(), "normalize produced {u:?}");
        u
    }

    /// Union of single points.
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Rational>) -> Self {
        points.into_iter().cloned().map(Interval::point).collect()
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.parts.iter()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Checks the canonical-form invariant.
    pub fn is_normalized(&self) -> bool {
        self.parts.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            match a.hi().cmp(b.lo()) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => !a.hi_closed() && !b.lo_closed(),
                std::cmp::Ordering::Greater => false,
            }
        })
    }

    /// Parts that are single points.
    pub fn point_parts(&self) -> impl Iterator<Item = &Interval> {
        self.parts.iter().filter(|p| p.is_point())
    }

    /// Parts of positive length.
    pub fn interval_parts(&self) -> impl Iterator<Item = &Interval> {
        self.parts.iter().filter(|p| !p.is_point())
    }

    /// Smallest closed interval containing the union.
    pub fn hull(&self) -> Option<Interval> {
        let first = self.parts.first()?;
        let last = self.parts.last()?;
        Some(Interval::closed(first.lo().clone(), last.hi().clone()))
    }

    /// Sum of part lengths; openness and punctures do not contribute.
    pub fn measure(&self) -> Rational {
        self.parts.iter().map(|p| p.length()).sum()
    }

    /// Length of the longest part, `0` for the empty union.
    pub fn max_component_length(&self) -> Rational {
        self.parts
            .iter()
            .map(|p| p.length())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Index of the last part whose left end is `<= x`.
    fn locate(&self, x: &Rational) -> Option<usize> {
        let idx = self.parts.partition_point(|p| p.lo() <= x);
        idx.checked_sub(1)
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        match self.locate(x) {
            Some(i) => self.parts[i].contains(x),
            None => false,
        }
    }

    /// Whether the open interval `(v, w)`, `v < w`, lies inside the union.
    fn covers_open(&self, v: &Rational, w: &Rational) -> bool {
        match self.locate(v) {
            Some(i) => self.parts[i].hi() >= w,
            None => false,
        }
    }

    /// Whether a single interval lies inside the union.
    pub fn covers_interval(&self, i: &Interval) -> bool {
        match self.locate(i.lo()) {
            Some(k) => self.parts[k].covers(i),
            None => false,
        }
    }

    /// `a ⊆ b`
    pub fn is_subset(&self, other: &IntervalUnion) -> bool {
        self.parts.iter().all(|p| other.covers_interval(p))
    }

    /// Parts whose closure meets `[lo, hi]`, as a sub-union.
    pub fn window(&self, lo: &Rational, hi: &Rational) -> IntervalUnion {
        let start = self.parts.partition_point(|p| p.hi() < lo);
        let end = self.parts.partition_point(|p| p.lo() <= hi);
        if start >= end {
            return IntervalUnion::empty();
        }
        IntervalUnion {
            parts: self.parts[start..end].to_vec(),
        }
    }

    /// Applies a membership predicate over the elementary subdivision of both operands.
    fn combine(&self, other: &IntervalUnion, keep: impl Fn(bool, bool) -> bool) -> IntervalUnion {
        debug_assert!(!keep(false, false));
        let mut cuts: Vec<&Rational> = Vec::with_capacity(2 * (self.len() + other.len()));
        for p in self.parts.iter().chain(other.parts.iter()) {
            cuts.push(p.lo());
            cuts.push(p.hi());
        }
        cuts.sort();
        cuts.dedup();

        let mut pieces = Vec::new();
        for (i, v) in cuts.iter().enumerate() {
            if keep(self.contains_point(v), other.contains_point(v)) {
                pieces.push(Interval::point((*v).clone()));
            }
            if let Some(w) = cuts.get(i + 1) {
                if keep(self.covers_open(v, w), other.covers_open(v, w)) {
                    pieces.push(Interval::open((*v).clone(), (*w).clone()));
                }
            }
        }
        let u = IntervalUnion {
            parts: merge_sorted(pieces),
        };
        debug_assert!(u.is_normalized());
        u
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        if self.is_empty() || other.is_empty() {
            return IntervalUnion::empty();
        }
        self.combine(other, |a, b| a && b)
    }

    pub fn intersect_interval(&self, frame: &Interval) -> IntervalUnion {
        self.intersect(&IntervalUnion::from(frame.clone()))
    }

    /// `{y ∈ a : y + t ∈ b}`, i.e. `a ∩ (b − t)`, touching only the parts of `b` near each part of `a`.
    pub fn intersect_translated(&self, other: &IntervalUnion, t: &Rational) -> IntervalUnion {
        let neg = -t;
        let mut pieces = Vec::new();
        for p in &self.parts {
            let moved = p.translate(t);
            let start = other.parts.partition_point(|w| w.hi() < moved.lo());
            for w in &other.parts[start..] {
                if w.lo() > moved.hi() {
                    break;
                }
                if let Some(x) = moved.intersection(w) {
                    pieces.push(x.translate(&neg));
                }
            }
        }
        let u = IntervalUnion {
            parts: merge_sorted(pieces),
        };
        debug_assert!(u.is_normalized());
        u
    }

    /// `a ∖ b`
    pub fn set_difference(&self, other: &IntervalUnion) -> IntervalUnion {
        if self.is_empty() || other.is_empty() {
            return self.clone();
        }
        self.combine(other, |a, b| a && !b)
    }

    /// `frame ∖ a`
    pub fn complement_within(&self, frame: &Interval) -> IntervalUnion {
        IntervalUnion::from(frame.clone()).set_difference(self)
    }

    /// `{x + y : x ∈ a, y ∈ b}` by pairwise sums followed by normalization.
    pub fn minkowski_sum(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for p in &self.parts {
            for r in &other.parts {
                raw.push(p.sum(r));
            }
        }
        IntervalUnion::normalize(raw)
    }

    /// `{x - y : x ∈ a, y ∈ b}`
    pub fn minkowski_difference(&self, other: &IntervalUnion) -> IntervalUnion {
        self.minkowski_sum(&other.reflect())
    }

    /// `{-x : x ∈ a}`
    pub fn reflect(&self) -> IntervalUnion {
        IntervalUnion {
            parts: self.parts.iter().rev().map(Interval::reflect).collect(),
        }
    }

    /// `{x + t : x ∈ a}`
    pub fn translate(&self, t: &Rational) -> IntervalUnion {
        IntervalUnion {
            parts: self.parts.iter().map(|p| p.translate(t)).collect(),
        }
    }

    /// `{k x : x ∈ a}`, `k != 0`.
    pub fn scale(&self, k: &Rational) -> Result<IntervalUnion, IntervalError> {
        let mut parts = self
            .parts
            .iter()
            .map(|p| p.scale(k))
            .collect::<Result<Vec<_>, _>>()?;
        if k.is_negative() {
            parts.reverse();
        }
        Ok(IntervalUnion { parts })
    }
}

/// Merges a list already sorted by `(lo, closed-first)` into canonical form.
fn merge_sorted(sorted: Vec<Interval>) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
    let mut iter = sorted.into_iter();
    let Some(first) = iter.next() else {
        return out;
    };
    let (mut lo, mut hi, mut lo_c, mut hi_c) = first.into_parts();
    for next in iter {
        let (nlo, nhi, nlo_c, nhi_c) = next.into_parts();
        let joins = match nlo.cmp(&hi) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => hi_c || nlo_c,
            std::cmp::Ordering::Greater => false,
        };
        if joins {
            if nlo == lo {
                lo_c |= nlo_c;
            }
            match nhi.cmp(&hi) {
                std::cmp::Ordering::Greater => {
                    hi = nhi;
                    hi_c = nhi_c;
                }
                std::cmp::Ordering::Equal => hi_c |= nhi_c,
                std::cmp::Ordering::Less => {}
            }
        } else {
            out.push(Interval::new(lo, hi, lo_c, hi_c).expect("merged part is non-empty"));
            lo = nlo;
            hi = nhi;
            lo_c = nlo_c;
            hi_c = nhi_c;
        }
    }
    out.push(Interval::new(lo, hi, lo_c, hi_c).expect("merged part is non-empty"));
    out
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
