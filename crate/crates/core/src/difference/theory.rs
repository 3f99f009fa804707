//! Closed-form missing sets for central Cantor sets and the certificate chains
//! that pin the difference set down between those points.

use serde::{Deserialize, Serialize};

use super::{llg_certify, DiffError, LlgCertificate};
use crate::cantor::{
    central_r_p, central_stages, CantorStage, CentralSpec, GapRecord, NodeAddress, RatioRule,
    DEFAULT_BUDGET,
};
use crate::interval::Interval;
use crate::rational::Rational;
use crate::union::IntervalUnion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    /// Every ratio is at least 1/3: the points are the whole missing set.
    Exact,
    /// Smaller ratios occur: the points are only known to be missing.
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingSetClaim {
    pub points: IntervalUnion,
    pub kind: ClaimKind,
}

/// `{0, ±1} ∪ {±r(P_{1^k}) : k ≤ k_max}` as point parts.
pub fn theoretical_missing_set(spec: &CentralSpec, k_max: usize) -> MissingSetClaim {
    let mut pts = vec![Rational::zero(), Rational::one(), -Rational::one()];
    for k in 0..=k_max {
        let r = central_r_p(spec, k);
        pts.push(-&r);
        pts.push(r);
    }
    let kind = if spec.all_ratios_at_least(&Rational::new(1, 3)) {
        ClaimKind::Exact
    } else {
        ClaimKind::LowerBound
    };
    MissingSetClaim {
        points: IntervalUnion::from_points(&pts),
        kind,
    }
}

/// Certificates covering `(r(P_{1^{k-1}}), r(P_{1^k}))` and its mirror image,
/// with `r(P_{1^{-1}}) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct T13Certificates {
    pub k: usize,
    /// `G = P_{1^k}` against `[0, |I_{0^{k+1}}|]`.
    pub positive: LlgCertificate,
    /// `G = P_{0^k}` against `[1 − |I_{1^{k+1}}|, 1]`.
    pub negative: LlgCertificate,
}

pub fn t13_certificates(stage: &CantorStage, k: usize) -> Result<T13Certificates, DiffError> {
    let gap = |bit: bool| {
        let addr = NodeAddress::uniform(bit, k);
        stage
            .gap_at(&addr)
            .cloned()
            .ok_or(DiffError::MissingGap(addr))
    };
    let node = |bit: bool| {
        let addr = NodeAddress::uniform(bit, k + 1);
        stage
            .node_interval(&addr)
            .ok_or(DiffError::MissingGap(addr))
    };
    let left = node(false)?;
    let right = node(true)?;
    let positive = llg_certify(stage, &gap(true)?, left.lo(), left.hi())?;
    let negative = llg_certify(stage, &gap(false)?, right.lo(), right.hi())?;
    Ok(T13Certificates {
        k,
        positive,
        negative,
    })
}

/// One step of the rightmost-longest-gap chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    /// 1-based position in the chain.
    pub k: usize,
    /// `r(G_{k-1})`, zero for the first link.
    pub previous_right: Rational,
    pub gap: GapRecord,
    /// Covers `(r(G_{k-1}), r(G_k))` minus its exceptions.
    pub certificate: LlgCertificate,
}

/// Rightmost longest recorded gap inside `[from, 1]`, provided no later gap there
/// can be longer, i.e. it is at least as long as every component there.
fn settled_rightmost_longest<'a>(stage: &'a CantorStage, from: &Rational) -> Option<&'a GapRecord> {
    let region = Interval::closed(from.clone(), Rational::one());
    let best = stage
        .gaps()
        .iter()
        .filter(|g| region.covers(&g.interval))
        .max_by(|x, y| {
            x.length()
                .cmp(&y.length())
                .then_with(|| x.interval.lo().cmp(y.interval.lo()))
        })?;
    let longest_component = stage
        .components()
        .window(from, &Rational::one())
        .intersect_interval(&region)
        .max_component_length();
    (best.length() >= longest_component).then_some(best)
}

/// Builds the chain `G_1, …, G_depth` from the given stages, using for each link
/// the shallowest stage at which the choice is settled and certifiable.
pub fn countability_chain(stages: &[CantorStage], depth: usize) -> Result<Vec<ChainLink>, DiffError> {
    let mut links = Vec::with_capacity(depth);
    let mut previous_right = Rational::zero();
    for k in 1..=depth {
        let mut last_err = DiffError::NotCertifiable {
            stage: stages.last().map_or(0, |s| s.n()),
            reason: format!("no settled gap to the right of {previous_right}"),
        };
        let mut found = None;
        for stage in stages {
            let Some(gap) = settled_rightmost_longest(stage, &previous_right) else {
                continue;
            };
            let b = gap.interval.lo() - &previous_right;
            match llg_certify(stage, gap, &Rational::zero(), &b) {
                Ok(certificate) => {
                    found = Some((gap.clone(), certificate));
                    break;
                }
                Err(e) => last_err = e,
            }
        }
        let (gap, certificate) = found.ok_or(last_err)?;
        let right = gap.interval.hi().clone();
        links.push(ChainLink {
            k,
            previous_right,
            gap,
            certificate,
        });
        previous_right = right;
    }
    Ok(links)
}

/// The chain for a central set, built on stages `0..=depth + 2`.
pub fn countability_certificate(spec: &CentralSpec, depth: usize) -> Result<Vec<ChainLink>, DiffError> {
    let stages = central_stages(spec, depth + 2, DEFAULT_BUDGET)?;
    countability_chain(&stages, depth)
}

/// Exact lower bound on `m(B) = ½ ∏ (1 − b_j)` for a geometric ratio rule, from the
/// first `terms` factors and `∏_{j>N} (1 − b_j) ≥ 1 − Σ_{j>N} b_j`.
pub fn geometric_half_measure_lower_bound(spec: &CentralSpec, terms: usize) -> Option<Rational> {
    let RatioRule::Geometric { ratio, .. } = spec.rule() else {
        return None;
    };
    if ratio >= Rational::one() {
        return None;
    }
    let partial: Rational = (1..=terms).map(|j| Rational::one() - spec.ratio(j)).product();
    let tail = spec.ratio(terms + 1) / (Rational::one() - ratio);
    let rest = (Rational::one() - tail).max(Rational::zero());
    Some(Rational::half() * partial * rest)
}
