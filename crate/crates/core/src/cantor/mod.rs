//! Finite-stage generators for the Cantor-set families.
//!
//! Every generator emits a sequence of nested [`CantorStage`] values. Binary-tree
//! families (central and perturbed) label each component by its [`NodeAddress`];
//! the composite families only carry the components and the complementary gaps.

mod central;
mod composite;
mod greedy;
mod perturbed;
mod spec;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::Interval;
use crate::rational::Rational;
use crate::union::IntervalUnion;

pub use central::{central_r_p, central_stage, central_stages, lbrick_shift, CentralSpec, RatioRule};
pub use composite::{compose_tab_stages, shifted_b, tab_stage, tab_stages, CompositeSpec, SourceSpec};
pub use greedy::{greedy_stage, greedy_stages, DeferralEvent, DenseSeq, GreedySpec, GreedyStage};
pub use perturbed::{perturbed_stage, perturbed_stages, PerturbedSpec};
pub use spec::{FamilySpec, SpecError};

/// Default cap on the number of components a single stage may hold.
pub const DEFAULT_BUDGET: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("stage {n} would need {components} components, budget is {budget}")]
    BudgetExceeded {
        n: usize,
        components: usize,
        budget: usize,
    },
    #[error("ratio out of (0,1): {0}")]
    RatioOutOfRange(Rational),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("stage {stage}: c = {c} is not below half of |I_0…0| = {half}")]
    GapTooLong {
        stage: usize,
        c: Rational,
        half: Rational,
    },
    #[error("stage {n}: max component length {current} did not drop below {previous}")]
    NotShrinking {
        n: usize,
        previous: Rational,
        current: Rational,
    },
    #[error("stage {stage}: no admissible dense point among {scanned} candidates")]
    AvoidanceExhausted { stage: usize, scanned: usize },
    #[error("operation needs a central stage, got {0}")]
    NotCentral(Family),
    #[error("address {address} is deeper than stage {n}")]
    AddressTooDeep { address: NodeAddress, n: usize },
    #[error("shift check failed for address {0}")]
    ShiftMismatch(NodeAddress),
}

/// Which construction produced a stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Central,
    Perturbed,
    Tab,
    Greedy,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Central => "central",
            Family::Perturbed => "perturbed",
            Family::Tab => "tab",
            Family::Greedy => "greedy",
        })
    }
}

/// Binary path from the root interval; `0` is the left child.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeAddress(Vec<bool>);

impl NodeAddress {
    pub fn root() -> Self {
        NodeAddress(Vec::new())
    }

    /// `bit` repeated `len` times.
    pub fn uniform(bit: bool, len: usize) -> Self {
        NodeAddress(vec![bit; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn child(&self, bit: bool) -> Self {
        let mut bits = self.0.clone();
        bits.push(bit);
        NodeAddress(bits)
    }

    /// True when every bit equals `bit` (vacuously for the root).
    pub fn is_uniform(&self, bit: bool) -> bool {
        self.0.iter().all(|&b| b == bit)
    }

    pub fn starts_with(&self, prefix: &NodeAddress) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl fmt::Display for NodeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for NodeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for NodeAddress {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ε" {
            return Ok(NodeAddress::root());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid address character {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(NodeAddress)
    }
}

impl Serialize for NodeAddress {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let bits: String = self.0.iter().map(|&b| if b { '1' } else { '0' }).collect();
        s.serialize_str(&bits)
    }
}

impl<'de> Deserialize<'de> for NodeAddress {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A removed open interval together with where and when it was removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRecord {
    /// Component the gap was cut from; absent for composite families.
    pub address: Option<NodeAddress>,
    pub interval: Interval,
    pub stage_created: usize,
}

impl GapRecord {
    pub fn length(&self) -> Rational {
        self.interval.length()
    }
}

/// Stage-`n` approximation of a Cantor set inside `frame`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorStage {
    n: usize,
    family: Family,
    frame: Interval,
    components: IntervalUnion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    component_addresses: Option<Vec<NodeAddress>>,
    gaps: Vec<GapRecord>,
    endpoints: Vec<Rational>,
}

impl CantorStage {
    pub(crate) fn new(
        n: usize,
        family: Family,
        frame: Interval,
        components: IntervalUnion,
        component_addresses: Option<Vec<NodeAddress>>,
        gaps: Vec<GapRecord>,
    ) -> Self {
        let mut endpoints: Vec<Rational> = components
            .iter()
            .flat_map(|p| [p.lo().clone(), p.hi().clone()])
            .collect();
        endpoints.dedup();
        debug_assert!(endpoints.windows(2).all(|w| w[0] < w[1]));
        CantorStage {
            n,
            family,
            frame,
            components,
            component_addresses,
            gaps,
            endpoints,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn frame(&self) -> &Interval {
        &self.frame
    }

    pub fn components(&self) -> &IntervalUnion {
        &self.components
    }

    /// Address of each component, aligned with `components().parts()`.
    pub fn component_addresses(&self) -> Option<&[NodeAddress]> {
        self.component_addresses.as_deref()
    }

    /// Gaps ordered by stage of creation, then left to right.
    pub fn gaps(&self) -> &[GapRecord] {
        &self.gaps
    }

    /// Sorted endpoints of all components.
    pub fn endpoints(&self) -> &[Rational] {
        &self.endpoints
    }

    pub fn is_endpoint(&self, x: &Rational) -> bool {
        self.endpoints.binary_search(x).is_ok()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn max_component_length(&self) -> Rational {
        self.components.max_component_length()
    }

    /// Union of all recorded gap intervals.
    pub fn gap_union(&self) -> IntervalUnion {
        IntervalUnion::normalize(self.gaps.iter().map(|g| g.interval.clone()).collect())
    }

    pub fn gap_at(&self, address: &NodeAddress) -> Option<&GapRecord> {
        self.gaps
            .iter()
            .find(|g| g.address.as_ref() == Some(address))
    }

    /// Hull of the components below `prefix`, i.e. the interval `I_prefix`.
    pub fn node_interval(&self, prefix: &NodeAddress) -> Option<Interval> {
        let addrs = self.component_addresses.as_ref()?;
        let parts = self.components.parts();
        let mut hits = addrs
            .iter()
            .zip(parts)
            .filter(|(a, _)| a.starts_with(prefix))
            .map(|(_, p)| p);
        let first = hits.next()?;
        let last = hits.next_back().unwrap_or(first);
        Some(Interval::closed(first.lo().clone(), last.hi().clone()))
    }

    /// The same stage under `x ↦ k·x`, `k > 0`.
    pub(crate) fn scaled(&self, k: &Rational) -> CantorStage {
        assert!(k.is_positive());
        let scale = |i: &Interval| i.scale(k).expect("positive scale");
        CantorStage {
            n: self.n,
            family: self.family,
            frame: scale(&self.frame),
            components: self.components.scale(k).expect("positive scale"),
            component_addresses: self.component_addresses.clone(),
            gaps: self
                .gaps
                .iter()
                .map(|g| GapRecord {
                    address: g.address.clone(),
                    interval: scale(&g.interval),
                    stage_created: g.stage_created,
                })
                .collect(),
            endpoints: self.endpoints.iter().map(|e| e * k).collect(),
        }
    }
}

/// Working state shared by the binary-tree generators.
#[derive(Clone)]
pub(crate) struct Tree {
    pub n: usize,
    pub family: Family,
    pub nodes: Vec<(NodeAddress, Rational, Rational)>,
    pub gaps: Vec<GapRecord>,
}

impl Tree {
    pub fn root(family: Family) -> Self {
        Tree {
            n: 0,
            family,
            nodes: vec![(NodeAddress::root(), Rational::zero(), Rational::one())],
            gaps: Vec::new(),
        }
    }

    /// Cuts one open gap out of every node. `cut` returns the gap ends.
    pub fn split(
        &self,
        budget: usize,
        mut cut: impl FnMut(&NodeAddress, &Rational, &Rational) -> Result<(Rational, Rational), ConstructionError>,
    ) -> Result<Tree, ConstructionError> {
        let components = self.nodes.len() * 2;
        if components > budget {
            return Err(ConstructionError::BudgetExceeded {
                n: self.n + 1,
                components,
                budget,
            });
        }
        let mut nodes = Vec::with_capacity(components);
        let mut gaps = self.gaps.clone();
        for (addr, lo, hi) in &self.nodes {
            let (g_lo, g_hi) = cut(addr, lo, hi)?;
            debug_assert!(lo < g_lo && g_lo < g_hi && &g_hi < hi);
            gaps.push(GapRecord {
                address: Some(addr.clone()),
                interval: Interval::open(g_lo.clone(), g_hi.clone()),
                stage_created: self.n + 1,
            });
            nodes.push((addr.child(false), lo.clone(), g_lo));
            nodes.push((addr.child(true), g_hi, hi.clone()));
        }
        Ok(Tree {
            n: self.n + 1,
            family: self.family,
            nodes,
            gaps,
        })
    }

    pub fn to_stage(&self) -> CantorStage {
        let parts = self
            .nodes
            .iter()
            .map(|(_, lo, hi)| Interval::closed(lo.clone(), hi.clone()))
            .collect();
        let addresses = self.nodes.iter().map(|(a, _, _)| a.clone()).collect();
        CantorStage::new(
            self.n,
            self.family,
            Interval::closed(Rational::zero(), Rational::one()),
            IntervalUnion::normalize(parts),
            Some(addresses),
            self.gaps.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn address_round_trip() {
        let a: NodeAddress = "0110".parse().unwrap();
        assert_eq!(a.to_string(), "0110");
        assert_eq!(a.len(), 4);
        assert_eq!("ε".parse::<NodeAddress>().unwrap(), NodeAddress::root());
        assert_eq!("".parse::<NodeAddress>().unwrap(), NodeAddress::root());
        assert!("012".parse::<NodeAddress>().is_err());
        assert!(NodeAddress::uniform(true, 3).is_uniform(true));
        assert!(NodeAddress::root().is_uniform(false));
        assert_eq!(serde_json::to_string(&a).unwrap(), "\"0110\"");
    }
}
