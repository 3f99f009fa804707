//! A thin set `A ⊆ [0, 1/2]` chosen so that `A + B` misses a growing list of
//! dense points `d_1, d_2, …`, and the composite built from `(A, B)`.
//!
//! At stage `k` the next admissible dense point `d_k` is picked, then every
//! component `K = [l, r]` of `A_{k-1}` keeps two closed end pieces `[l, x]` and
//! `[y, r]` that avoid the padded set `⋃_{j≤k} (d_j - B_k) ⊕ δ_k`. Component
//! endpoints are never moved, so they stay in the limit set.
//!
//! A candidate `d` is admissible at stage `k` when `d ∉ (E(A_{k-1}) + B_k) ⊕ δ_k`:
//! this keeps every existing endpoint of `A` (in particular `0` and `1/2`)
//! outside the new forbidden set. Rejected candidates are deferred and retried
//! first at later stages, when `B_k` is thinner.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::composite::{compose_tab_stages, SourceSpec};
use super::{
    CantorStage, CentralSpec, ConstructionError, Family, GapRecord, NodeAddress, RatioRule,
    DEFAULT_BUDGET,
};
use crate::interval::Interval;
use crate::rational::Rational;
use crate::union::IntervalUnion;

/// Dyadic rationals of `[lo, hi]` in breadth-first order: integers first, then
/// odd multiples of `1/2`, of `1/4`, and so on, each level left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseSeq {
    pub lo: Rational,
    pub hi: Rational,
}

impl Default for DenseSeq {
    fn default() -> Self {
        DenseSeq {
            lo: Rational::from_integer(-1),
            hi: Rational::from_integer(2),
        }
    }
}

impl DenseSeq {
    pub fn iter(&self) -> DyadicIter {
        DyadicIter::new(self.lo.clone(), self.hi.clone())
    }
}

const MAX_LEVEL: u32 = 256;

pub struct DyadicIter {
    lo: Rational,
    hi: Rational,
    level: u32,
    m: BigInt,
    end: BigInt,
}

impl DyadicIter {
    fn new(lo: Rational, hi: Rational) -> Self {
        let mut it = DyadicIter {
            lo,
            hi,
            level: 0,
            m: BigInt::zero(),
            end: BigInt::zero(),
        };
        it.start_level(0);
        it
    }

    fn start_level(&mut self, level: u32) {
        let scale = Rational::from_integer(2).pow(level);
        self.level = level;
        self.m = (&self.lo * &scale).ceil();
        self.end = (&self.hi * &scale).floor();
        if level > 0 && self.m.is_even() {
            self.m += 1;
        }
    }
}

impl Iterator for DyadicIter {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        if self.lo > self.hi {
            return None;
        }
        while self.m > self.end {
            if self.level >= MAX_LEVEL {
                return None;
            }
            let next = self.level + 1;
            self.start_level(next);
        }
        let den = BigInt::one() << self.level;
        let value = Rational::from_bigints(self.m.clone(), den);
        self.m += if self.level == 0 { 1 } else { 2 };
        Some(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGreedySpec")]
pub struct GreedySpec {
    pub b: SourceSpec,
    pub dense: DenseSeq,
    /// `δ_k = margin_base^k`.
    pub margin_base: Rational,
    /// `θ`: each kept end piece is at most `θ·|K|` long.
    pub child_fraction: Rational,
    /// Candidates examined per stage before giving up.
    pub scan_limit: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGreedySpec {
    b: SourceSpec,
    #[serde(default)]
    dense: DenseSeq,
    #[serde(default = "default_margin_base")]
    margin_base: Rational,
    #[serde(default = "default_child_fraction")]
    child_fraction: Rational,
    #[serde(default = "default_scan_limit")]
    scan_limit: usize,
    #[serde(default, rename = "family")]
    _family: Option<String>,
}

fn default_margin_base() -> Rational {
    Rational::new(1, 4)
}

fn default_child_fraction() -> Rational {
    Rational::new(1, 8)
}

fn default_scan_limit() -> usize {
    4096
}

impl TryFrom<RawGreedySpec> for GreedySpec {
    type Error = ConstructionError;

    fn try_from(raw: RawGreedySpec) -> Result<Self, Self::Error> {
        GreedySpec::new(
            raw.b,
            raw.dense,
            raw.margin_base,
            raw.child_fraction,
            raw.scan_limit,
        )
    }
}

impl GreedySpec {
    pub fn new(
        b: SourceSpec,
        dense: DenseSeq,
        margin_base: Rational,
        child_fraction: Rational,
        scan_limit: usize,
    ) -> Result<Self, ConstructionError> {
        let bad = |name, reason: &str| ConstructionError::InvalidParameter {
            name,
            reason: reason.to_string(),
        };
        if dense.lo > dense.hi {
            return Err(bad("dense", "lo must not exceed hi"));
        }
        if !margin_base.is_positive() || margin_base >= Rational::one() {
            return Err(bad("margin_base", "must lie in (0,1)"));
        }
        if !child_fraction.is_positive() || child_fraction >= Rational::half() {
            return Err(bad("child_fraction", "must lie in (0,1/2)"));
        }
        if scan_limit == 0 {
            return Err(bad("scan_limit", "must be positive"));
        }
        Ok(GreedySpec {
            b,
            dense,
            margin_base,
            child_fraction,
            scan_limit,
        })
    }

    /// Greedy spec with every tunable at its default.
    pub fn with_b(b: SourceSpec) -> Self {
        GreedySpec::new(
            b,
            DenseSeq::default(),
            default_margin_base(),
            default_child_fraction(),
            default_scan_limit(),
        )
        .expect("defaults are valid")
    }

    /// `B` = central set with ratios `b_j = base^j`, at half scale.
    ///
    /// Dense points are drawn from `[0, 1]`, where the avoidance actually
    /// constrains `A`, with margins `base^{3k}` and end pieces of `|K|/64`.
    pub fn fat(base: Rational) -> Result<Self, ConstructionError> {
        let central = CentralSpec::new(RatioRule::Geometric {
            first: base.clone(),
            ratio: base.clone(),
        })?;
        GreedySpec::new(
            SourceSpec::Central(central),
            DenseSeq {
                lo: Rational::zero(),
                hi: Rational::one(),
            },
            base.pow(3),
            Rational::new(1, 64),
            default_scan_limit(),
        )
    }
}

/// A dense point that was not admissible at `stage` and was put back in line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeferralEvent {
    pub stage: usize,
    pub candidate: Rational,
}

/// Stage `n` of the greedy construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyStage {
    /// `A_n`, inside `[0, 1/2]`.
    pub a: CantorStage,
    /// `B_n`, inside `[0, 1/2]`.
    pub b: CantorStage,
    /// The composite `A_n ∪ ((A_n + B_n + 1/2) ∩ [1/2, 1])`.
    pub c: CantorStage,
    /// `d_1, …, d_n`.
    pub dense_points: Vec<Rational>,
    /// Deferrals logged up to this stage.
    pub deferrals: Vec<DeferralEvent>,
}

impl GreedyStage {
    /// Checks `(A_n + B_n) ∩ {d_1, …, d_n} = ∅` directly.
    pub fn avoidance_holds(&self) -> bool {
        let sum = self.a.components().minkowski_sum(self.b.components());
        self.dense_points.iter().all(|d| !sum.contains_point(d))
    }
}

fn padded(u: &IntervalUnion, delta: &Rational) -> IntervalUnion {
    u.iter()
        .map(|p| Interval::closed(p.lo() - delta, p.hi() + delta))
        .collect()
}

/// Stages `0..=n` of the greedy construction.
pub fn greedy_stages(
    spec: &GreedySpec,
    n: usize,
    budget: usize,
) -> Result<Vec<GreedyStage>, ConstructionError> {
    let b_stages = spec.b.half_stages(n, budget)?;
    let half = Rational::half();
    let frame = Interval::closed(Rational::zero(), half.clone());

    let mut nodes: Vec<(NodeAddress, Rational, Rational)> =
        vec![(NodeAddress::root(), Rational::zero(), half.clone())];
    let mut gaps: Vec<GapRecord> = Vec::new();
    let mut a_stages = vec![a_stage(0, &frame, &nodes, &gaps)];
    let mut dense_points: Vec<Rational> = Vec::new();
    let mut deferrals: Vec<DeferralEvent> = Vec::new();
    let mut per_stage_points = vec![Vec::new()];
    let mut per_stage_deferrals = vec![Vec::new()];

    let mut deferred: Vec<Rational> = Vec::new();
    let mut fresh = spec.dense.iter();

    for k in 1..=n {
        if nodes.len() * 2 > budget {
            return Err(ConstructionError::BudgetExceeded {
                n: k,
                components: nodes.len() * 2,
                budget,
            });
        }
        let delta = spec.margin_base.pow(k as u32);
        let b_pad = padded(b_stages[k].components(), &delta);
        let admissible = |d: &Rational| {
            nodes
                .iter()
                .flat_map(|(_, lo, hi)| [lo, hi])
                .all(|e| !b_pad.contains_point(&(d - e)))
        };

        let mut chosen = None;
        if let Some(i) = deferred.iter().position(&admissible) {
            chosen = Some(deferred.remove(i));
        } else {
            for _ in 0..spec.scan_limit {
                let Some(d) = fresh.next() else { break };
                if admissible(&d) {
                    chosen = Some(d);
                    break;
                }
                deferrals.push(DeferralEvent {
                    stage: k,
                    candidate: d.clone(),
                });
                deferred.push(d);
            }
        }
        let Some(d) = chosen else {
            return Err(ConstructionError::AvoidanceExhausted {
                stage: k,
                scanned: spec.scan_limit,
            });
        };
        dense_points.push(d);

        let reflected = b_pad.reflect();
        let forbidden: IntervalUnion = dense_points
            .iter()
            .flat_map(|d| reflected.translate(d).parts().to_vec())
            .collect::<IntervalUnion>()
            .window(&Rational::zero(), &half);
        let forbidden = forbidden.parts();

        let mut next = Vec::with_capacity(nodes.len() * 2);
        for (addr, l, r) in &nodes {
            debug_assert!(!forbidden.iter().any(|p| p.contains(l) || p.contains(r)));
            let len = r - l;
            let reach = &spec.child_fraction * &len;
            // First forbidden point to the right of l, last one to the left of r.
            let right_of_l = forbidden
                .iter()
                .find(|p| p.hi() > l)
                .map(|p| p.lo().clone())
                .filter(|f| f < r)
                .unwrap_or_else(|| r.clone());
            let left_of_r = forbidden
                .iter()
                .rev()
                .find(|p| p.lo() < r)
                .map(|p| p.hi().clone())
                .filter(|f| f > l)
                .unwrap_or_else(|| l.clone());
            let x = (l + &reach).min(Rational::midpoint(l, &right_of_l));
            let y = (r - &reach).max(Rational::midpoint(&left_of_r, r));
            debug_assert!(l < x && x < y && &y < r);
            gaps.push(GapRecord {
                address: Some(addr.clone()),
                interval: Interval::open(x.clone(), y.clone()),
                stage_created: k,
            });
            next.push((addr.child(false), l.clone(), x));
            next.push((addr.child(true), y, r.clone()));
        }
        nodes = next;
        a_stages.push(a_stage(k, &frame, &nodes, &gaps));
        per_stage_points.push(dense_points.clone());
        per_stage_deferrals.push(deferrals.clone());
    }

    let c_stages = compose_tab_stages(&a_stages, &b_stages, Family::Greedy, budget)?;
    Ok(a_stages
        .into_iter()
        .zip(b_stages)
        .zip(c_stages)
        .zip(per_stage_points.into_iter().zip(per_stage_deferrals))
        .map(|(((a, b), c), (dense_points, deferrals))| GreedyStage {
            a,
            b,
            c,
            dense_points,
            deferrals,
        })
        .collect())
}

/// Stage `n` of the greedy construction under the default budget.
pub fn greedy_stage(spec: &GreedySpec, n: usize) -> Result<GreedyStage, ConstructionError> {
    Ok(greedy_stages(spec, n, DEFAULT_BUDGET)?
        .pop()
        .expect("at least stage 0"))
}

fn a_stage(
    n: usize,
    frame: &Interval,
    nodes: &[(NodeAddress, Rational, Rational)],
    gaps: &[GapRecord],
) -> CantorStage {
    let parts = nodes
        .iter()
        .map(|(_, lo, hi)| Interval::closed(lo.clone(), hi.clone()))
        .collect();
    CantorStage::new(
        n,
        Family::Greedy,
        frame.clone(),
        IntervalUnion::normalize(parts),
        Some(nodes.iter().map(|(a, _, _)| a.clone()).collect()),
        gaps.to_vec(),
    )
}
