//! Staged check of `(C_n + Y_n) ∩ [0,1] ⊆ C_n`.
//!
//! If it holds for every `n` and `Y ⊆ ⋂ Y_n`, then `(𝒞 + Y) ∩ [0,1]` sits in every
//! `C_n` and hence in `𝒞`, which puts `Y` inside the missing set `S`. Only this
//! direction is mechanized.

use serde::{Deserialize, Serialize};

use super::DiffError;
use crate::cantor::{shifted_b, CantorStage};
use crate::interval::Interval;
use crate::rational::Rational;
use crate::union::IntervalUnion;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LsCertificate {
    /// `Y_N` at the deepest stage checked.
    pub y: IntervalUnion,
    pub n_checked: usize,
    /// `Y_n` was derived from the construction itself (`B_n + 1/2`) rather than supplied.
    pub by_construction: bool,
}

pub fn ls_stage_certify(
    c_stages: &[CantorStage],
    y_stages: &[IntervalUnion],
) -> Result<LsCertificate, DiffError> {
    if c_stages.len() != y_stages.len() || c_stages.is_empty() {
        return Err(DiffError::LengthMismatch {
            c: c_stages.len(),
            y: y_stages.len(),
        });
    }
    let unit = Interval::closed(Rational::zero(), Rational::one());
    for (i, (c, y)) in c_stages.iter().zip(y_stages).enumerate() {
        if i > 0 && !y.is_subset(&y_stages[i - 1]) {
            return Err(DiffError::NotNested { stage: c.n() });
        }
        let reached = c.components().minkowski_sum(y).intersect_interval(&unit);
        let escaped = reached.set_difference(c.components());
        if let Some(part) = escaped.parts().first() {
            return Err(DiffError::LsViolation {
                stage: c.n(),
                witness: part.representative(),
            });
        }
    }
    Ok(LsCertificate {
        y: y_stages.last().expect("non-empty").clone(),
        n_checked: c_stages.last().expect("non-empty").n(),
        by_construction: false,
    })
}

/// Certifies `B + 1/2 ⊆ S` for a composite `C` built from `B`.
pub fn ls_certify_composite(
    c_stages: &[CantorStage],
    b_stages: &[CantorStage],
) -> Result<LsCertificate, DiffError> {
    let mut cert = ls_stage_certify(c_stages, &shifted_b(b_stages))?;
    cert.by_construction = true;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{
        central_r_p, central_stages, tab_stages, CentralSpec, CompositeSpec, DEFAULT_BUDGET,
    };
    use crate::rational::q;

    fn ternary(n: usize) -> Vec<CantorStage> {
        central_stages(&CentralSpec::constant(q(1, 3)).unwrap(), n, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn composite_first_stage() {
        let spec = CompositeSpec::builtin();
        let c = tab_stages(&spec, 1, DEFAULT_BUDGET).unwrap();
        let b = spec.b.half_stages(1, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            shifted_b(&b)[1].parts(),
            &[
                Interval::closed(q(1, 2), q(5, 8)),
                Interval::closed(q(7, 8), q(1, 1))
            ]
        );
        let cert = ls_certify_composite(&c[1..], &b[1..]).unwrap();
        assert!(cert.by_construction);
        assert_eq!(cert.n_checked, 1);
    }

    #[test]
    fn two_thirds_is_missing_for_ternary() {
        let spec = CentralSpec::constant(q(1, 3)).unwrap();
        let r = central_r_p(&spec, 0);
        let y = IntervalUnion::from_points(&[-&r, r]);
        let stages = ternary(6);
        let ys = vec![y; stages.len()];
        assert_eq!(ls_stage_certify(&stages, &ys).unwrap().n_checked, 6);
    }

    #[test]
    fn one_half_fails_with_witness() {
        let stages = ternary(3);
        let ys = vec![IntervalUnion::from_points(&[q(1, 2)]); stages.len()];
        match ls_stage_certify(&stages, &ys) {
            Err(DiffError::LsViolation { stage, witness }) => {
                assert_eq!(stage, 1);
                assert!(stages[1].gap_union().contains_point(&witness));
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn growing_y_is_rejected() {
        let stages = ternary(2);
        let ys = vec![
            IntervalUnion::from_points(&[q(2, 3)]),
            IntervalUnion::from_points(&[q(2, 3), q(8, 9)]),
            IntervalUnion::from_points(&[q(2, 3)]),
        ];
        assert_eq!(
            ls_stage_certify(&stages, &ys),
            Err(DiffError::NotNested { stage: 1 })
        );
    }
}
