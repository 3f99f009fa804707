//! The composite `C = A ∪ ((A + B + 1/2) ∩ [1/2, 1])` built from two sets in `[0, 1/2]`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{
    central_stages, perturbed_stages, CantorStage, CentralSpec, ConstructionError, Family,
    GapRecord, PerturbedSpec, DEFAULT_BUDGET,
};
use crate::interval::Interval;
use crate::rational::Rational;
use crate::union::IntervalUnion;

/// A binary-tree family used at half scale, i.e. inside `[0, 1/2]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceSpec {
    Central(CentralSpec),
    Perturbed(PerturbedSpec),
}

impl SourceSpec {
    /// Stages `0..=n` scaled into `[0, 1/2]`.
    pub fn half_stages(&self, n: usize, budget: usize) -> Result<Vec<CantorStage>, ConstructionError> {
        let full = match self {
            SourceSpec::Central(s) => central_stages(s, n, budget)?,
            SourceSpec::Perturbed(s) => perturbed_stages(s, n, budget)?,
        };
        let half = Rational::half();
        Ok(full.iter().map(|s| s.scaled(&half)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawCompositeSpec")]
pub struct CompositeSpec {
    pub a: SourceSpec,
    pub b: SourceSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompositeSpec {
    a: SourceSpec,
    b: SourceSpec,
    #[serde(default, rename = "family")]
    _family: Option<String>,
}

impl From<RawCompositeSpec> for CompositeSpec {
    fn from(raw: RawCompositeSpec) -> Self {
        CompositeSpec::new(raw.a, raw.b)
    }
}

impl CompositeSpec {
    pub fn new(a: SourceSpec, b: SourceSpec) -> Self {
        CompositeSpec { a, b }
    }

    /// `A = B =` the central set with ratio `1/2`, scaled into `[0, 1/2]`.
    pub fn builtin() -> Self {
        let half = SourceSpec::Central(
            CentralSpec::constant(Rational::half()).expect("1/2 is a valid ratio"),
        );
        CompositeSpec::new(half.clone(), half)
    }
}

/// Builds `C_k = A_k ∪ ((A_k + B_k + 1/2) ∩ [1/2, 1])` for each supplied pair.
///
/// Fails with [`ConstructionError::NotShrinking`] when the longest component of
/// `C_k` is not strictly shorter than that of `C_{k-1}`.
pub fn compose_tab_stages(
    a_stages: &[CantorStage],
    b_stages: &[CantorStage],
    family: Family,
    budget: usize,
) -> Result<Vec<CantorStage>, ConstructionError> {
    let half = Rational::half();
    let upper = Interval::closed(half.clone(), Rational::one());
    let frame = Interval::closed(Rational::zero(), Rational::one());
    let mut out: Vec<CantorStage> = Vec::with_capacity(a_stages.len());
    let mut born: HashMap<Interval, usize> = HashMap::new();

    for (k, (a, b)) in a_stages.iter().zip(b_stages).enumerate() {
        let e = a
            .components()
            .minkowski_sum(b.components())
            .translate(&half)
            .intersect_interval(&upper);
        let components = a.components().union(&e);
        if components.len() > budget {
            return Err(ConstructionError::BudgetExceeded {
                n: k,
                components: components.len(),
                budget,
            });
        }
        let mut gaps: Vec<GapRecord> = components
            .complement_within(&frame)
            .iter()
            .map(|g| {
                let stage_created = *born.entry(g.clone()).or_insert(k);
                GapRecord {
                    address: None,
                    interval: g.clone(),
                    stage_created,
                }
            })
            .collect();
        gaps.sort_by(|x, y| {
            x.stage_created
                .cmp(&y.stage_created)
                .then_with(|| x.interval.lo().cmp(y.interval.lo()))
        });
        let stage = CantorStage::new(k, family, frame.clone(), components, None, gaps);
        if let Some(prev) = out.last() {
            let previous = prev.max_component_length();
            let current = stage.max_component_length();
            if current >= previous {
                return Err(ConstructionError::NotShrinking {
                    n: k,
                    previous,
                    current,
                });
            }
        }
        out.push(stage);
    }
    Ok(out)
}

/// Stages `0..=n` of the composite built from `spec`.
pub fn tab_stages(
    spec: &CompositeSpec,
    n: usize,
    budget: usize,
) -> Result<Vec<CantorStage>, ConstructionError> {
    let a = spec.a.half_stages(n, budget)?;
    let b = spec.b.half_stages(n, budget)?;
    compose_tab_stages(&a, &b, Family::Tab, budget)
}

/// Stage `n` of the composite under the default budget.
pub fn tab_stage(spec: &CompositeSpec, n: usize) -> Result<CantorStage, ConstructionError> {
    Ok(tab_stages(spec, n, DEFAULT_BUDGET)?
        .pop()
        .expect("at least stage 0"))
}

/// `Y_k = B_k + 1/2` for each stage of `B`.
pub fn shifted_b(b_stages: &[CantorStage]) -> Vec<IntervalUnion> {
    b_stages
        .iter()
        .map(|b| b.components().translate(&Rational::half()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn builtin_first_stage() {
        let s = tab_stage(&CompositeSpec::builtin(), 1).unwrap();
        assert_eq!(
            s.components().parts(),
            &[
                Interval::closed(q(0, 1), q(1, 8)),
                Interval::closed(q(3, 8), q(3, 4)),
                Interval::closed(q(7, 8), q(1, 1)),
            ]
        );
        assert_eq!(s.gaps().len(), 2);
        assert!(s.gaps().iter().all(|g| g.address.is_none()));
    }

    #[test]
    fn builtin_keeps_one_and_gaps_persist() {
        let stages = tab_stages(&CompositeSpec::builtin(), 5, DEFAULT_BUDGET).unwrap();
        for w in stages.windows(2) {
            assert!(w[1].components().contains_point(&q(1, 1)));
            assert!(w[1].components().is_subset(w[0].components()));
            for g in w[0].gaps() {
                assert!(w[1].gaps().contains(g), "gap {:?} lost", g.interval);
            }
        }
    }

    #[test]
    fn half_sources_live_in_left_half() {
        let b = SourceSpec::Central(CentralSpec::constant(q(1, 3)).unwrap())
            .half_stages(2, DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(b[2].frame(), &Interval::closed(q(0, 1), q(1, 2)));
        assert_eq!(b[2].endpoints().last(), Some(&q(1, 2)));
        assert_eq!(b[1].gaps()[0].interval, Interval::open(q(1, 6), q(1, 3)));
    }
}
