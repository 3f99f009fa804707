//! Central Cantor sets: remove the open middle `a_n` fraction of every component.

use serde::{Deserialize, Serialize};

use super::{CantorStage, ConstructionError, Family, NodeAddress, Tree, DEFAULT_BUDGET};
use crate::interval::Interval;
use crate::rational::Rational;

/// How the ratio `a_n` is produced for each stage `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase", try_from = "RawRatioRule")]
pub enum RatioRule {
    /// `a_n = value`
    Constant { value: Rational },
    /// `a_n = values[n-1]`, then `tail` once the list runs out.
    List { values: Vec<Rational>, tail: Rational },
    /// `a_n = first · ratio^(n-1)`
    Geometric { first: Rational, ratio: Rational },
}

// Read as a flat struct so that a bad value is reported at its own position
// rather than at the end of a buffered, tagged object.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRatioRule {
    rule: RuleKind,
    value: Option<UnitRatio>,
    values: Option<Vec<UnitRatio>>,
    tail: Option<UnitRatio>,
    first: Option<UnitRatio>,
    ratio: Option<Rational>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum RuleKind {
    Constant,
    List,
    Geometric,
}

struct UnitRatio(Rational);

impl<'de> Deserialize<'de> for UnitRatio {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = Rational::deserialize(d)?;
        if in_unit_open(&r) {
            Ok(UnitRatio(r))
        } else {
            Err(serde::de::Error::custom(ConstructionError::RatioOutOfRange(r)))
        }
    }
}

impl TryFrom<RawRatioRule> for RatioRule {
    type Error = String;

    fn try_from(raw: RawRatioRule) -> Result<Self, Self::Error> {
        let need = |field: &str| format!("rule needs field `{field}`");
        Ok(match raw.rule {
            RuleKind::Constant => RatioRule::Constant {
                value: raw.value.ok_or_else(|| need("value"))?.0,
            },
            RuleKind::List => RatioRule::List {
                values: raw.values.ok_or_else(|| need("values"))?.into_iter().map(|u| u.0).collect(),
                tail: raw.tail.ok_or_else(|| need("tail"))?.0,
            },
            RuleKind::Geometric => RatioRule::Geometric {
                first: raw.first.ok_or_else(|| need("first"))?.0,
                ratio: raw.ratio.ok_or_else(|| need("ratio"))?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCentralSpec")]
pub struct CentralSpec {
    ratios: RatioRule,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCentralSpec {
    ratios: RatioRule,
    #[serde(default, rename = "family")]
    _family: Option<String>,
}

impl TryFrom<RawCentralSpec> for CentralSpec {
    type Error = ConstructionError;

    fn try_from(raw: RawCentralSpec) -> Result<Self, Self::Error> {
        CentralSpec::new(raw.ratios)
    }
}

fn in_unit_open(x: &Rational) -> bool {
    x.is_positive() && x < Rational::one()
}

impl CentralSpec {
    pub fn new(ratios: RatioRule) -> Result<Self, ConstructionError> {
        let check = |x: &Rational| {
            if in_unit_open(x) {
                Ok(())
            } else {
                Err(ConstructionError::RatioOutOfRange(x.clone()))
            }
        };
        match &ratios {
            RatioRule::Constant { value } => check(value)?,
            RatioRule::List { values, tail } => {
                values.iter().try_for_each(check)?;
                check(tail)?;
            }
            RatioRule::Geometric { first, ratio } => {
                check(first)?;
                if !ratio.is_positive() || ratio > Rational::one() {
                    return Err(ConstructionError::InvalidParameter {
                        name: "ratio",
                        reason: format!("geometric factor {ratio} must lie in (0,1]"),
                    });
                }
            }
        }
        Ok(CentralSpec { ratios })
    }

    /// `a_n ≡ a`
    pub fn constant(a: Rational) -> Result<Self, ConstructionError> {
        CentralSpec::new(RatioRule::Constant { value: a })
    }

    pub fn rule(&self) -> &RatioRule {
        &self.ratios
    }

    /// `a_n` for `n ≥ 1`.
    pub fn ratio(&self, n: usize) -> Rational {
        assert!(n >= 1, "ratios are indexed from 1");
        match &self.ratios {
            RatioRule::Constant { value } => value.clone(),
            RatioRule::List { values, tail } => values.get(n - 1).unwrap_or(tail).clone(),
            RatioRule::Geometric { first, ratio } => first * ratio.pow((n - 1) as u32),
        }
    }

    /// Whether `a_n ≥ x` holds for every `n`, decided exactly from the rule.
    pub fn all_ratios_at_least(&self, x: &Rational) -> bool {
        match &self.ratios {
            RatioRule::Constant { value } => value >= x,
            RatioRule::List { values, tail } => values.iter().all(|v| v >= x) && tail >= x,
            RatioRule::Geometric { first, ratio } => ratio == Rational::one() && first >= x,
        }
    }

    /// `|I_t|` for any address of length `n`: `∏_{k≤n} (1-a_k)/2`.
    pub fn component_length(&self, n: usize) -> Rational {
        (1..=n)
            .map(|k| (Rational::one() - self.ratio(k)) * Rational::half())
            .product()
    }
}

/// Stages `0..=n` of the central set.
pub fn central_stages(
    spec: &CentralSpec,
    n: usize,
    budget: usize,
) -> Result<Vec<CantorStage>, ConstructionError> {
    let mut tree = Tree::root(Family::Central);
    let mut out = vec![tree.to_stage()];
    for k in 0..n {
        let a = spec.ratio(k + 1);
        let keep = (Rational::one() - &a) * Rational::half();
        tree = tree.split(budget, |_, lo, hi| {
            let side = (hi - lo) * &keep;
            Ok((lo + &side, hi - &side))
        })?;
        out.push(tree.to_stage());
    }
    Ok(out)
}

/// Stage `n` of the central set under the default budget.
pub fn central_stage(spec: &CentralSpec, n: usize) -> Result<CantorStage, ConstructionError> {
    Ok(central_stages(spec, n, DEFAULT_BUDGET)?
        .pop()
        .expect("at least stage 0"))
}

/// `r(P_{1^k}) = 1 - ∏_{j=1}^{k+1} (1-a_j)/2`, the right end of the gap cut from `I_{1^k}`.
pub fn central_r_p(spec: &CentralSpec, k: usize) -> Rational {
    Rational::one() - spec.component_length(k + 1)
}

/// The shift `s` with `(C_n ∩ I_{0^m}) + s = C_n ∩ I_t`, `m = |t|`, checked exactly.
pub fn lbrick_shift(stage: &CantorStage, t: &NodeAddress) -> Result<Rational, ConstructionError> {
    if stage.family() != Family::Central {
        return Err(ConstructionError::NotCentral(stage.family()));
    }
    if t.len() > stage.n() {
        return Err(ConstructionError::AddressTooDeep {
            address: t.clone(),
            n: stage.n(),
        });
    }
    let zeros = NodeAddress::uniform(false, t.len());
    let base = stage.node_interval(&zeros).expect("tree stage");
    let target = stage.node_interval(t).expect("tree stage");
    let shift = target.lo() - base.lo();

    let below = |prefix: &NodeAddress| components_below(stage, prefix);
    let (base_parts, target_parts) = (below(&zeros), below(t));
    let matches = base_parts.len() == target_parts.len()
        && base_parts
            .iter()
            .zip(&target_parts)
            .all(|(p, q)| &p.translate(&shift) == *q);
    if matches {
        Ok(shift)
    } else {
        Err(ConstructionError::ShiftMismatch(t.clone()))
    }
}

fn components_below<'a>(stage: &'a CantorStage, prefix: &NodeAddress) -> Vec<&'a Interval> {
    let addrs = stage.component_addresses().expect("tree stage");
    addrs
        .iter()
        .zip(stage.components().parts())
        .filter(|(a, _)| a.starts_with(prefix))
        .map(|(_, p)| p)
        .collect()
}
