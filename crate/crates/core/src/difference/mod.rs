//! Certified brackets `inner ⊆ 𝒞ᶜ − 𝒞 ⊆ outer` computed from a single stage.
//!
//! Here `𝒞ᶜ` is the complement of the limit set inside `[0, 1]`. Two facts about
//! any stage make the brackets sound for the limit set: recorded gaps never meet
//! `𝒞`, and component endpoints always belong to `𝒞`.

mod llg;
mod ls;
mod scaled;
mod steinhaus;
mod theory;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use llg::{llg_certify, LlgCertificate, LlgHypotheses, LlgMode};
pub use ls::{ls_certify_composite, ls_stage_certify, LsCertificate};
pub use steinhaus::{steinhaus_suite, SteinhausReport, SteinhausRow};
pub use theory::{
    countability_certificate, countability_chain, geometric_half_measure_lower_bound,
    t13_certificates, theoretical_missing_set, ChainLink, ClaimKind, MissingSetClaim,
    T13Certificates,
};

use crate::cantor::{CantorStage, ConstructionError, NodeAddress};
use crate::interval::Interval;
use crate::rational::Rational;
use crate::union::IntervalUnion;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("not certifiable at stage {stage}: {reason}")]
    NotCertifiable { stage: usize, reason: String },
    #[error("{value} is not a component endpoint at stage {stage}")]
    NotAnEndpoint { stage: usize, value: Rational },
    #[error("bad range [{a}, {b}]: {reason}")]
    BadRange { a: Rational, b: Rational, reason: String },
    #[error("no gap at address {0}")]
    MissingGap(NodeAddress),
    #[error("stage {stage}: {witness} lies in (C + Y) ∩ [0,1] but not in C")]
    LsViolation { stage: usize, witness: Rational },
    #[error("Y at stage {stage} is not contained in Y at the previous stage")]
    NotNested { stage: usize },
    #[error("got {c} family stages but {y} Y stages")]
    LengthMismatch { c: usize, y: usize },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Inner and outer approximations of `𝒞ᶜ − 𝒞` at one stage, with the induced
/// bracket `missing_inner ⊆ S ⊆ missing_outer` for `S = [−1,1] ∖ (𝒞ᶜ − 𝒞)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffBracket {
    pub n: usize,
    pub inner: IntervalUnion,
    pub outer: IntervalUnion,
    pub missing_outer: IntervalUnion,
    pub missing_inner: IntervalUnion,
}

impl DiffBracket {
    /// `inner ⊆ outer`, `missing_inner ⊆ missing_outer` and `{−1, 0, 1} ⊆ missing_outer`.
    pub fn is_consistent(&self) -> bool {
        self.inner.is_subset(&self.outer)
            && self.missing_inner.is_subset(&self.missing_outer)
            && [-1, 0, 1]
                .iter()
                .all(|&x| self.missing_outer.contains_point(&Rational::from(x)))
    }

    /// `inner` grows and `outer` shrinks from `self` to `next`.
    pub fn refines_into(&self, next: &DiffBracket) -> bool {
        self.inner.is_subset(&next.inner) && next.outer.is_subset(&self.outer)
    }
}

fn unit() -> Interval {
    Interval::closed(Rational::zero(), Rational::one())
}

fn symmetric_unit() -> Interval {
    Interval::closed(-Rational::one(), Rational::one())
}

/// `[−1, 1] ∖ inner_diff(stage)`, computed without forming the gap × endpoint product.
///
/// For `y ∈ [−1, 1]` and an endpoint `e`, `y + e` lies in `[−1, 2]`, so `y` escapes
/// every translate `G − e` exactly when `y + e ∈ W = [−1, 2] ∖ ⋃ gaps` for all `e`.
/// The running intersection only shrinks, and each step looks at the parts of `W`
/// near the surviving pieces.
pub fn missing_outer(stage: &CantorStage) -> IntervalUnion {
    let order: Vec<&Rational> = endpoint_order(stage.endpoints()).collect();
    scaled::survivor_sweep(&order, &escape_set(stage))
}

/// `W = [−1, 2] ∖ ⋃ gaps`
fn escape_set(stage: &CantorStage) -> IntervalUnion {
    let wide = Interval::closed(-Rational::one(), Rational::from(2));
    stage.gap_union().complement_within(&wide)
}

/// The same sweep in plain rational arithmetic, kept as a cross-check.
#[cfg(test)]
fn missing_outer_rational(stage: &CantorStage) -> IntervalUnion {
    let w = escape_set(stage);
    let mut survivors = IntervalUnion::from(symmetric_unit());
    for e in endpoint_order(stage.endpoints()) {
        survivors = survivors.intersect_translated(&w, e);
    }
    survivors
}

/// Endpoints from both ends inwards, which prunes the survivors fastest.
fn endpoint_order(e: &[Rational]) -> impl Iterator<Item = &Rational> {
    let (mut i, mut j) = (0usize, e.len());
    std::iter::from_fn(move || {
        if i >= j {
            return None;
        }
        let take_left = (i + e.len() - j).is_multiple_of(2);
        if take_left {
            i += 1;
            Some(&e[i - 1])
        } else {
            j -= 1;
            Some(&e[j])
        }
    })
}

/// `⋃_{G ∈ gaps} ⋃_{e ∈ endpoints} (G − e)`, certified inside `𝒞ᶜ − 𝒞`.
pub fn inner_diff(stage: &CantorStage) -> IntervalUnion {
    missing_outer(stage).complement_within(&symmetric_unit())
}

/// `([0,1] ∖ E_n) − C_n`, a certified superset of `𝒞ᶜ − 𝒞`.
///
/// The pieces of `[0,1] ∖ E_n` abut each other, so subtracting a component of
/// positive length fuses them into `hull − K`. Point components keep the punctures.
pub fn outer_diff(stage: &CantorStage) -> IntervalUnion {
    let punctured = IntervalUnion::from(unit())
        .set_difference(&IntervalUnion::from_points(stage.endpoints()));
    let (Some(first), Some(last)) = (punctured.parts().first(), punctured.parts().last()) else {
        return IntervalUnion::empty();
    };
    let hull = Interval::new(
        first.lo().clone(),
        last.hi().clone(),
        first.lo_closed(),
        last.hi_closed(),
    )
    .expect("hull of a non-empty union");
    let mut raw = Vec::new();
    for k in stage.components().iter() {
        if k.is_point() {
            raw.extend(punctured.translate(&-k.lo()).iter().cloned());
        } else {
            raw.push(hull.sum(&k.reflect()));
        }
    }
    IntervalUnion::normalize(raw)
}

pub fn diff_bracket(stage: &CantorStage) -> DiffBracket {
    let frame = symmetric_unit();
    let missing_outer = missing_outer(stage);
    let inner = missing_outer.complement_within(&frame);
    let outer = outer_diff(stage);
    let missing_inner = outer.complement_within(&frame);
    DiffBracket {
        n: stage.n(),
        inner,
        outer,
        missing_outer,
        missing_inner,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{central_stage, central_stages, CentralSpec, DEFAULT_BUDGET};
    use crate::rational::q;

    fn ternary(n: usize) -> CantorStage {
        central_stage(&CentralSpec::constant(q(1, 3)).unwrap(), n).unwrap()
    }

    #[test]
    fn ternary_stage_one_inner() {
        let inner = inner_diff(&ternary(1));
        let expected = IntervalUnion::normalize(vec![
            Interval::open(q(-2, 3), q(-1, 3)),
            Interval::open(q(-1, 3), q(0, 1)),
            Interval::open(q(0, 1), q(1, 3)),
            Interval::open(q(1, 3), q(2, 3)),
        ]);
        assert_eq!(inner, expected);
        assert_eq!(inner.measure(), q(4, 3));
    }

    #[test]
    fn ternary_stage_two_reaches_one_third() {
        assert!(inner_diff(&ternary(2)).contains_point(&q(1, 3)));
    }

    #[test]
    fn zero_is_never_covered() {
        for n in 0..6 {
            assert!(!inner_diff(&ternary(n)).contains_point(&q(0, 1)));
        }
    }

    #[test]
    fn outer_of_first_stages() {
        assert_eq!(
            outer_diff(&ternary(0)),
            IntervalUnion::from(Interval::open(q(-1, 1), q(1, 1)))
        );
        let s1 = ternary(1);
        let outer = outer_diff(&s1);
        assert!(outer.measure() >= inner_diff(&s1).measure());
        assert!(outer.contains_point(&q(2, 3)) && outer.contains_point(&q(-2, 3)));
    }

    #[test]
    fn ternary_bracket_stage_one() {
        let b = diff_bracket(&ternary(1));
        let expected = IntervalUnion::normalize(vec![
            Interval::closed(q(-1, 1), q(-2, 3)),
            Interval::point(q(-1, 3)),
            Interval::point(q(0, 1)),
            Interval::point(q(1, 3)),
            Interval::closed(q(2, 3), q(1, 1)),
        ]);
        assert_eq!(b.missing_outer, expected);
        assert!(b.is_consistent());
    }

    #[test]
    fn brackets_refine() {
        let stages = central_stages(&CentralSpec::constant(q(2, 5)).unwrap(), 5, DEFAULT_BUDGET).unwrap();
        let brackets: Vec<_> = stages.iter().map(diff_bracket).collect();
        for w in brackets.windows(2) {
            assert!(w[0].refines_into(&w[1]));
            assert!(w[1].is_consistent());
        }
    }

    #[test]
    fn integer_sweep_matches_rational_sweep() {
        let ternary = central_stages(&CentralSpec::constant(q(1, 3)).unwrap(), 5, DEFAULT_BUDGET).unwrap();
        let odd = central_stages(&CentralSpec::constant(q(3, 7)).unwrap(), 4, DEFAULT_BUDGET).unwrap();
        for s in ternary.iter().chain(&odd) {
            assert_eq!(missing_outer(s), missing_outer_rational(s), "stage {}", s.n());
        }
    }

    #[test]
    fn endpoint_order_visits_all_once() {
        let e: Vec<Rational> = (0..7).map(|i| q(i, 1)).collect();
        let seen: Vec<_> = endpoint_order(&e).cloned().collect();
        assert_eq!(seen, vec![q(0, 1), q(6, 1), q(1, 1), q(5, 1), q(2, 1), q(4, 1), q(3, 1)]);
    }
}
