//! Gap × endpoint translates of a stage, merged by a plain sweep.

#![allow(dead_code)]

use cantor_core::cantor::CantorStage;
use cantor_core::Rational;

/// All gap − endpoint translates, unmerged.
pub fn brute_inner_parts(stage: &CantorStage) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for g in stage.gaps() {
        for e in stage.endpoints() {
            out.push((g.interval.lo() - e, g.interval.hi() - e));
        }
    }
    out
}

pub fn in_some_open(parts: &[(Rational, Rational)], x: &Rational) -> bool {
    parts.iter().any(|(a, b)| a < x && x < b)
}

/// Measure of a union of open intervals by a plain sort-and-sweep.
pub fn swept_measure(mut parts: Vec<(Rational, Rational)>) -> Rational {
    parts.sort();
    let mut total = Rational::zero();
    let mut current: Option<(Rational, Rational)> = None;
    for (a, b) in parts {
        current = match current {
            Some((lo, hi)) if a <= hi => Some((lo, hi.max(b))),
            Some((lo, hi)) => {
                total = total + (hi - lo);
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((lo, hi)) = current {
        total = total + (hi - lo);
    }
    total
}
