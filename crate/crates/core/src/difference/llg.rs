//! Gap-length certificates: a gap `G` longer than everything inside `[a, b]`
//! forces `(l(G) − b, r(G) − a)` into the difference set.
//!
//! The hypothesis talks about every gap of the limit set inside `[a, b]`, most of
//! which a finite stage has not cut yet. Those future gaps sit strictly inside
//! some current component `K ⊆ [a, b]`, whose endpoints stay in the set, so they
//! are strictly shorter than `|K|`. Hence `|G| ≥` the longest component in
//! `[a, b]` bounds every future gap strictly, and only recorded gaps need
//! comparing.

use serde::{Deserialize, Serialize};

use super::DiffError;
use crate::cantor::{CantorStage, GapRecord};
use crate::interval::Interval;
use crate::rational::Rational;
use crate::union::IntervalUnion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LlgMode {
    /// `G` is strictly longer than every gap in `[a, b]`.
    Strict,
    /// Ties allowed; each tying gap `H` costs the single point `l(G) − l(H)`.
    NonStrict,
}

/// The quantities the certificate was checked against, so it can be re-verified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlgHypotheses {
    pub stage: usize,
    pub gap_length: Rational,
    /// Longest component of the stage inside `[a, b]` (zero if none).
    pub max_component_length: Rational,
    /// Longest recorded gap inside `[a, b]`, if any.
    pub longest_gap_inside: Option<Rational>,
    /// Recorded gaps inside `[a, b]` as long as `G`.
    pub tying_gaps: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlgCertificate {
    pub gap: GapRecord,
    pub a: Rational,
    pub b: Rational,
    pub mode: LlgMode,
    pub certified_interval: Interval,
    pub exceptions: Vec<Rational>,
    pub hypotheses: LlgHypotheses,
}

impl LlgCertificate {
    /// `certified_interval ∖ exceptions`
    pub fn certified_set(&self) -> IntervalUnion {
        IntervalUnion::from(self.certified_interval.clone())
            .set_difference(&IntervalUnion::from_points(&self.exceptions))
    }

    /// Re-derives the certificate from `stage` and compares.
    pub fn recheck(&self, stage: &CantorStage) -> bool {
        llg_certify(stage, &self.gap, &self.a, &self.b).as_ref() == Ok(self)
    }
}

pub fn llg_certify(
    stage: &CantorStage,
    gap: &GapRecord,
    a: &Rational,
    b: &Rational,
) -> Result<LlgCertificate, DiffError> {
    let n = stage.n();
    for x in [a, b] {
        if !stage.is_endpoint(x) {
            return Err(DiffError::NotAnEndpoint {
                stage: n,
                value: x.clone(),
            });
        }
    }
    let bad = |reason: &str| DiffError::BadRange {
        a: a.clone(),
        b: b.clone(),
        reason: reason.to_string(),
    };
    if a > b {
        return Err(bad("a exceeds b"));
    }
    let range = Interval::closed(a.clone(), b.clone());
    if range.covers(&gap.interval) {
        return Err(bad("the gap lies inside the range"));
    }
    if !stage.gaps().iter().any(|g| g.interval == gap.interval) {
        return Err(DiffError::NotCertifiable {
            stage: n,
            reason: format!("{} is not a recorded gap", gap.interval),
        });
    }

    let g_len = gap.length();
    let max_component_length = stage
        .components()
        .window(a, b)
        .intersect_interval(&range)
        .max_component_length();
    let inside: Vec<&GapRecord> = stage
        .gaps()
        .iter()
        .filter(|h| range.covers(&h.interval))
        .collect();
    let longest_gap_inside = inside.iter().map(|h| h.length()).max();
    let mut tying: Vec<&GapRecord> = inside.iter().copied().filter(|h| h.length() == g_len).collect();
    tying.sort_by(|x, y| x.interval.lo().cmp(y.interval.lo()));

    if max_component_length > g_len {
        return Err(DiffError::NotCertifiable {
            stage: n,
            reason: format!(
                "a component of length {max_component_length} in [{a}, {b}] exceeds |G| = {g_len}"
            ),
        });
    }
    let mode = match &longest_gap_inside {
        Some(h) if *h > g_len => {
            return Err(DiffError::NotCertifiable {
                stage: n,
                reason: format!("a recorded gap of length {h} in [{a}, {b}] exceeds |G| = {g_len}"),
            })
        }
        Some(h) if *h == g_len => LlgMode::NonStrict,
        _ => LlgMode::Strict,
    };
    let exceptions: Vec<Rational> = tying
        .iter()
        .map(|h| gap.interval.lo() - h.interval.lo())
        .collect();
    let certified_interval = Interval::open(gap.interval.lo() - b, gap.interval.hi() - a);

    Ok(LlgCertificate {
        gap: gap.clone(),
        a: a.clone(),
        b: b.clone(),
        mode,
        certified_interval,
        exceptions,
        hypotheses: LlgHypotheses {
            stage: n,
            gap_length: g_len,
            max_component_length,
            longest_gap_inside,
            tying_gaps: tying.iter().map(|h| h.interval.clone()).collect(),
        },
    })
}
