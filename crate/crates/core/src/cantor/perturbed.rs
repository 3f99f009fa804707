//! The perturbed family: the two extreme branches get gaps flush with the
//! component center, every other gap is concentric.
//!
//! Stage `n+1` removes from `I_{0^n}` a gap of length `c_{n+1}` starting at
//! `c(I_{0^n})`, from `I_{1^n}` one of the same length ending at `c(I_{1^n})`,
//! and from every other component a centered gap of length
//! `min(φ·c_{n+1}, |I_s|/2)`. The cap keeps both children non-degenerate.

use serde::{Deserialize, Serialize};

use super::{CantorStage, ConstructionError, Family, Tree, DEFAULT_BUDGET};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPerturbedSpec")]
pub struct PerturbedSpec {
    c1: Rational,
    shrink: Rational,
    interior_gap_fraction: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPerturbedSpec {
    #[serde(default, rename = "family")]
    _family: Option<String>,
    c1: Rational,
    #[serde(default = "Rational::half")]
    shrink: Rational,
    #[serde(default = "Rational::one")]
    interior_gap_fraction: Rational,
}

impl TryFrom<RawPerturbedSpec> for PerturbedSpec {
    type Error = ConstructionError;

    fn try_from(raw: RawPerturbedSpec) -> Result<Self, Self::Error> {
        PerturbedSpec::new(raw.c1, raw.shrink, raw.interior_gap_fraction)
    }
}

impl Default for PerturbedSpec {
    /// `c₁ = 1/5`, `ρ = 1/2`, `φ = 1`.
    fn default() -> Self {
        PerturbedSpec::new(Rational::new(1, 5), Rational::half(), Rational::one())
            .expect("default parameters are valid")
    }
}

impl PerturbedSpec {
    pub fn new(
        c1: Rational,
        shrink: Rational,
        interior_gap_fraction: Rational,
    ) -> Result<Self, ConstructionError> {
        let one = Rational::one();
        let bad = |name, reason: &str| ConstructionError::InvalidParameter {
            name,
            reason: reason.to_string(),
        };
        if !c1.is_positive() || c1 >= one {
            return Err(bad("c1", "must lie in (0,1)"));
        }
        if !shrink.is_positive() || shrink >= one {
            return Err(bad("shrink", "must lie in (0,1)"));
        }
        if !interior_gap_fraction.is_positive() || interior_gap_fraction > one {
            return Err(bad("interior_gap_fraction", "must lie in (0,1]"));
        }
        Ok(PerturbedSpec {
            c1,
            shrink,
            interior_gap_fraction,
        })
    }

    pub fn c1(&self) -> &Rational {
        &self.c1
    }

    pub fn shrink(&self) -> &Rational {
        &self.shrink
    }

    pub fn interior_gap_fraction(&self) -> &Rational {
        &self.interior_gap_fraction
    }
}

/// Stages `0..=n` of the perturbed set.
pub fn perturbed_stages(
    spec: &PerturbedSpec,
    n: usize,
    budget: usize,
) -> Result<Vec<CantorStage>, ConstructionError> {
    let mut tree = Tree::root(Family::Perturbed);
    let mut out = vec![tree.to_stage()];
    let mut c = spec.c1.clone();
    for k in 0..n {
        if k == 0 {
            tree = tree.split(budget, |_, lo, hi| {
                let mid = Rational::midpoint(lo, hi);
                let half_gap = &c * Rational::half();
                Ok((&mid - &half_gap, &mid + &half_gap))
            })?;
        } else {
            let (_, lo0, hi0) = &tree.nodes[0];
            let edge_len = hi0 - lo0;
            let next = &spec.shrink * c.clone().min(edge_len.clone());
            let half_edge = &edge_len * Rational::half();
            if next >= c || next >= half_edge {
                return Err(ConstructionError::GapTooLong {
                    stage: k + 1,
                    c: next,
                    half: half_edge,
                });
            }
            c = next;
            tree = tree.split(budget, |addr, lo, hi| {
                let mid = Rational::midpoint(lo, hi);
                Ok(if addr.is_uniform(false) {
                    let g_hi = &mid + &c;
                    (mid, g_hi)
                } else if addr.is_uniform(true) {
                    let g_lo = &mid - &c;
                    (g_lo, mid)
                } else {
                    let len = (&spec.interior_gap_fraction * &c).min((hi - lo) * Rational::half());
                    let half_gap = len * Rational::half();
                    (&mid - &half_gap, &mid + &half_gap)
                })
            })?;
        }
        out.push(tree.to_stage());
    }
    Ok(out)
}

/// Stage `n` of the perturbed set under the default budget.
pub fn perturbed_stage(spec: &PerturbedSpec, n: usize) -> Result<CantorStage, ConstructionError> {
    Ok(perturbed_stages(spec, n, DEFAULT_BUDGET)?
        .pop()
        .expect("at least stage 0"))
}
