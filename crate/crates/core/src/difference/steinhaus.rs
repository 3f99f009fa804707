//! Per-stage measures of the missing-set bracket over fixed zones of `[−1, 1]`.

use serde::{Deserialize, Serialize};

use super::DiffBracket;
use crate::interval::Interval;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinhausRow {
    pub n: usize,
    /// `m(missing_outer ∩ [−1/2, 1/2])`
    pub center: Rational,
    /// Point parts of `missing_outer` inside `[−1/2, 1/2]`.
    pub center_points: usize,
    /// `m(missing_outer ∩ Z)` for `Z` = `[−1,−3/4]`, `[−3/4,−1/2]`, `[1/2,3/4]`, `[3/4,1]`.
    pub quarters: [Rational; 4],
    pub total: Rational,
    pub outer: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinhausReport {
    pub rows: Vec<SteinhausRow>,
}

impl SteinhausReport {
    pub fn center_non_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].center <= w[0].center)
    }

    pub fn last(&self) -> Option<&SteinhausRow> {
        self.rows.last()
    }

    /// Smaller measure in each of the pairs `([−1,−3/4], [1/2,3/4])` and
    /// `([−3/4,−1/2], [3/4,1])` at the last stage. Both sets of a pair cannot
    /// keep positive measure in the limit.
    pub fn paired_minima(&self) -> Option<[Rational; 2]> {
        let q = &self.last()?.quarters;
        Some([
            q[0].clone().min(q[2].clone()),
            q[1].clone().min(q[3].clone()),
        ])
    }

    pub fn outer_above(&self, bound: &Rational) -> bool {
        self.rows.iter().all(|r| &r.outer > bound)
    }
}

fn zone(lo: (i64, i64), hi: (i64, i64)) -> Interval {
    Interval::closed(Rational::new(lo.0, lo.1), Rational::new(hi.0, hi.1))
}

pub fn steinhaus_suite(brackets: &[DiffBracket]) -> SteinhausReport {
    let center = zone((-1, 2), (1, 2));
    let quarters = [
        zone((-1, 1), (-3, 4)),
        zone((-3, 4), (-1, 2)),
        zone((1, 2), (3, 4)),
        zone((3, 4), (1, 1)),
    ];
    let rows = brackets
        .iter()
        .map(|b| {
            let mid = b.missing_outer.intersect_interval(&center);
            SteinhausRow {
                n: b.n,
                center: mid.measure(),
                center_points: mid.point_parts().count(),
                quarters: quarters
                    .clone()
                    .map(|z| b.missing_outer.intersect_interval(&z).measure()),
                total: b.missing_outer.measure(),
                outer: b.outer.measure(),
            }
        })
        .collect();
    SteinhausReport { rows }
}
