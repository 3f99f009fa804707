//! The survivor sweep of `missing_outer` over integers.
//!
//! Every coordinate involved is an endpoint of the stage or `−1`, `1`, `2`, so all
//! of them share a common denominator `D`. Multiplying through by `D` turns the
//! sweep into integer additions and comparisons with no gcd work per step. Values
//! stay in `i128` when they fit and fall back to `BigInt` otherwise.

use std::cmp::Ordering;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::interval::Interval;
use crate::rational::Rational;
use crate::union::IntervalUnion;

#[derive(Debug, Clone)]
struct Seg<T> {
    lo: T,
    hi: T,
    lo_closed: bool,
    hi_closed: bool,
}

impl<T: Ord + Clone> Seg<T> {
    fn intersect(&self, other: &Seg<T>) -> Option<Seg<T>> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        let keep = match lo.cmp(&hi) {
            Ordering::Less => true,
            Ordering::Equal => lo_closed && hi_closed,
            Ordering::Greater => false,
        };
        keep.then_some(Seg {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }
}

/// `{y ∈ survivors : y + e ∈ w for every e}`. Inputs are sorted and pairwise
/// disjoint, and so is the output.
fn sweep<T>(mut survivors: Vec<Seg<T>>, w: &[Seg<T>], shifts: &[T]) -> Vec<Seg<T>>
where
    T: Ord + Clone,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    let mut next = Vec::with_capacity(survivors.len());
    for e in shifts {
        next.clear();
        for p in &survivors {
            let lo = &p.lo + e;
            let hi = &p.hi + e;
            let start = w.partition_point(|x| x.hi < lo);
            let Some(first) = w.get(start) else {
                continue;
            };
            // Common case: the whole piece sits inside one part of `w`.
            if first.lo < lo && hi < first.hi {
                next.push(p.clone());
                continue;
            }
            for x in &w[start..] {
                if x.lo > hi {
                    break;
                }
                let back = Seg {
                    lo: &x.lo - e,
                    hi: &x.hi - e,
                    lo_closed: x.lo_closed,
                    hi_closed: x.hi_closed,
                };
                if let Some(s) = p.intersect(&back) {
                    next.push(s);
                }
            }
        }
        std::mem::swap(&mut survivors, &mut next);
        if survivors.is_empty() {
            break;
        }
    }
    survivors
}

fn to_segs<T>(u: &IntervalUnion, scale: &BigInt, conv: impl Fn(BigInt) -> T) -> Vec<Seg<T>> {
    u.iter()
        .map(|p| Seg {
            lo: conv(scaled(p.lo(), scale)),
            hi: conv(scaled(p.hi(), scale)),
            lo_closed: p.lo_closed(),
            hi_closed: p.hi_closed(),
        })
        .collect()
}

fn scaled(x: &Rational, scale: &BigInt) -> BigInt {
    x.numer() * (scale / x.denom())
}

fn from_segs<T>(segs: Vec<Seg<T>>, scale: &BigInt, conv: impl Fn(T) -> BigInt) -> IntervalUnion {
    let back = |v: T| Rational::from_bigints(conv(v), scale.clone());
    IntervalUnion::normalize(
        segs.into_iter()
            .map(|s| {
                Interval::new(back(s.lo), back(s.hi), s.lo_closed, s.hi_closed)
                    .expect("sweep keeps non-empty pieces")
            })
            .collect(),
    )
}

/// `{y ∈ [−1, 1] : y + e ∈ w for every endpoint e}`.
pub(super) fn survivor_sweep(order: &[&Rational], w: &IntervalUnion) -> IntervalUnion {
    let scale = order
        .iter()
        .map(|e| e.denom())
        .chain(w.iter().flat_map(|p| [p.lo().denom(), p.hi().denom()]))
        .fold(BigInt::one(), |acc, d| acc.lcm(d));
    let start = IntervalUnion::from(Interval::closed(-Rational::one(), Rational::one()));
    // Coordinates lie in [−1, 2] and sums of two of them in [−2, 4].
    if (&scale * BigInt::from(8)).to_i128().is_some() {
        let conv = |b: BigInt| b.to_i128().expect("checked range");
        let shifts: Vec<i128> = order.iter().map(|e| conv(scaled(e, &scale))).collect();
        let out = sweep(to_segs(&start, &scale, conv), &to_segs(w, &scale, conv), &shifts);
        from_segs(out, &scale, BigInt::from)
    } else {
        let shifts: Vec<BigInt> = order.iter().map(|e| scaled(e, &scale)).collect();
        let out = sweep(to_segs(&start, &scale, |b| b), &to_segs(w, &scale, |b| b), &shifts);
        from_segs(out, &scale, |b| b)
    }
}
