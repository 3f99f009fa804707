//! Structural properties shared by every stage generator.

use cantor_core::cantor::*;
use cantor_core::{q, Interval, IntervalUnion, Rational};
use proptest::prelude::*;

fn check_stage_sequence(stages: &[CantorStage]) {
    for s in stages {
        let frame = s.frame();
        // Components and gaps tile the frame.
        assert_eq!(
            s.components().union(&s.gap_union()),
            IntervalUnion::from(frame.clone()),
            "stage {} does not tile its frame",
            s.n()
        );
        assert!(s.components().intersect(&s.gap_union()).is_empty());
        assert!(s.is_endpoint(frame.lo()) && s.is_endpoint(frame.hi()));
        for g in s.gaps() {
            assert!(g.interval.is_open());
            assert!(g.stage_created <= s.n() && g.stage_created >= 1);
        }
    }
    for w in stages.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        assert!(next.components().is_subset(prev.components()));
        for e in prev.endpoints() {
            assert!(next.is_endpoint(e), "endpoint {e} lost at stage {}", next.n());
        }
        for g in prev.gaps() {
            assert!(next.gaps().contains(g), "gap {} lost", g.interval);
        }
    }
}

#[test]
fn every_preset_builds_nested_stages() {
    for name in FamilySpec::preset_names() {
        let spec = FamilySpec::preset(name).unwrap();
        let n = if matches!(spec.family(), Family::Tab) { 5 } else { 6 };
        let stages = spec.stages(n, DEFAULT_BUDGET).unwrap();
        assert_eq!(stages.len(), n + 1);
        check_stage_sequence(&stages);
    }
}

#[test]
fn ternary_gap_table() {
    let s = central_stage(&CentralSpec::constant(q(1, 3)).unwrap(), 2).unwrap();
    let rows: Vec<(String, Rational, Rational, usize)> = s
        .gaps()
        .iter()
        .map(|g| {
            (
                g.address.as_ref().unwrap().to_string(),
                g.interval.lo().clone(),
                g.interval.hi().clone(),
                g.stage_created,
            )
        })
        .collect();
    assert_eq!(
        rows,
        vec![
            ("ε".to_string(), q(1, 3), q(2, 3), 1),
            ("0".to_string(), q(1, 9), q(2, 9), 2),
            ("1".to_string(), q(7, 9), q(8, 9), 2),
        ]
    );
}

#[test]
fn perturbed_key_properties() {
    let spec = PerturbedSpec::default();
    let stages = perturbed_stages(&spec, 7, DEFAULT_BUDGET).unwrap();
    let last = stages.last().unwrap();
    for k in 1..6 {
        let left = last.gap_at(&NodeAddress::uniform(false, k)).unwrap();
        let right = last.gap_at(&NodeAddress::uniform(true, k)).unwrap();
        assert_eq!(left.length(), right.length());
        let il = last.node_interval(&NodeAddress::uniform(false, k)).unwrap();
        let ir = last.node_interval(&NodeAddress::uniform(true, k)).unwrap();
        assert_eq!(il.length(), ir.length());
        // The 0^k gap starts at the centre of its interval and the 1^k gap ends there.
        assert_eq!(left.interval.lo(), &il.center());
        assert_eq!(right.interval.hi(), &ir.center());
        // It beats every recorded gap to its left.
        let before = Interval::closed(q(0, 1), left.interval.lo().clone());
        for h in last.gaps().iter().filter(|h| before.covers(&h.interval)) {
            assert!(h.length() < left.length());
        }
    }
    // Children at most half their parent.
    for w in stages.windows(2) {
        assert!(w[1].max_component_length() * q(2, 1) <= w[0].max_component_length());
    }
}

#[test]
fn greedy_stages_keep_their_promises() {
    for name in ["fat4", "fat16"] {
        let FamilySpec::Greedy(spec) = FamilySpec::preset(name).unwrap() else {
            unreachable!()
        };
        let stages = greedy_stages(&spec, 6, DEFAULT_BUDGET).unwrap();
        for g in &stages {
            assert!(g.avoidance_holds(), "{name} stage {}", g.c.n());
            assert!(g.a.components().contains_point(&q(0, 1)));
            assert!(g.a.components().contains_point(&q(1, 2)));
            assert_eq!(g.dense_points.len(), g.c.n());
        }
        for w in stages.windows(2) {
            assert!(w[1].a.components().is_subset(w[0].a.components()));
            assert!(w[1].c.max_component_length() < w[0].c.max_component_length());
        }
        let cs: Vec<CantorStage> = stages.into_iter().map(|g| g.c).collect();
        check_stage_sequence(&cs);
    }
}

#[test]
fn composite_contains_shifted_b() {
    let spec = CompositeSpec::builtin();
    let c = tab_stages(&spec, 4, DEFAULT_BUDGET).unwrap();
    let b = spec.b.half_stages(4, DEFAULT_BUDGET).unwrap();
    for (cn, yn) in c.iter().zip(shifted_b(&b)) {
        assert!(yn.is_subset(cn.components()));
    }
}

#[test]
fn budget_is_enforced() {
    let spec = CentralSpec::constant(q(1, 3)).unwrap();
    assert!(matches!(
        central_stages(&spec, 6, 32),
        Err(ConstructionError::BudgetExceeded { .. })
    ));
}

#[test]
fn spec_files_round_trip() {
    let text = r#"{
  "family": "central",
  "ratios": {"rule": "list", "values": ["1/3", "1/2"], "tail": "2/5"}
}"#;
    let spec = FamilySpec::from_json(text).unwrap();
    let again = FamilySpec::from_json(&serde_json::to_string_pretty(&spec).unwrap()).unwrap();
    assert_eq!(spec, again);
    let FamilySpec::Central(c) = spec else { unreachable!() };
    assert_eq!(c.ratio(1), q(1, 3));
    assert_eq!(c.ratio(7), q(2, 5));
}

proptest! {
    #[test]
    fn central_measure_matches_product(num in 1i64..12, n in 0usize..6) {
        let a = q(num, 12);
        let spec = CentralSpec::constant(a.clone()).unwrap();
        let s = central_stage(&spec, n).unwrap();
        let expected = (Rational::one() - a).pow(n as u32);
        prop_assert_eq!(s.components().measure(), expected);
        prop_assert_eq!(s.component_count(), 1usize << n);
        let stages = central_stages(&spec, n, DEFAULT_BUDGET).unwrap();
        check_stage_sequence(&stages);
    }

    #[test]
    fn perturbed_parameters_give_valid_stages(c in 1i64..9, rho in 1i64..4, phi in 1i64..=4) {
        // ρ < 1/2 keeps every gap shorter than half its interval.
        let spec = PerturbedSpec::new(q(c, 10), q(rho, 8), q(phi, 4)).unwrap();
        let stages = perturbed_stages(&spec, 5, DEFAULT_BUDGET).unwrap();
        check_stage_sequence(&stages);
    }

    #[test]
    fn large_shrink_factor_eventually_overflows(c in 3i64..9) {
        let spec = PerturbedSpec::new(q(c, 10), q(3, 4), q(1, 1)).unwrap();
        let over = matches!(
            perturbed_stages(&spec, 6, DEFAULT_BUDGET),
            Err(ConstructionError::GapTooLong { .. })
        );
        prop_assert!(over);
    }

    #[test]
    fn lbrick_shift_translates_left_block(num in 1i64..6, depth in 1usize..4) {
        let spec = CentralSpec::constant(q(num, 6)).unwrap();
        let s = central_stage(&spec, depth + 1).unwrap();
        let t = NodeAddress::uniform(true, depth);
        let shift = lbrick_shift(&s, &t).unwrap();
        let left = s.node_interval(&NodeAddress::uniform(false, depth)).unwrap();
        let right = s.node_interval(&t).unwrap();
        prop_assert_eq!(left.translate(&shift), right);
    }
}
