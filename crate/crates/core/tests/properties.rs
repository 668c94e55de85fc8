use blowuplab::divdiff::{divided_difference, f_log1p_over_x, mean_value_bound_check, NodeSet};
use blowuplab::ode::{analytic_blowup_time, classify_initial, BlowupDirection, CauchyProblem};
use blowuplab::partial_fractions::{decompose, KVector, Side};
use blowuplab::verify::sample_positive_distinct;
use blowuplab::weights::{
    inequality_gap, lagrange_weights, repetition_gap, repetition_weights, RepetitionSpec, XVector,
};
use proptest::prelude::*;

/// Distinct coordinates spread over several decades, so every generated
/// vector is comfortably separated.
fn positive_nodes(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(0u32..4000, 1..=max_len).prop_map(|set| {
        set.into_iter()
            .map(|m| 10f64.powf(-3.0 + m as f64 / 1000.0))
            .collect()
    })
}

fn k_vector(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(0u32..400, 1..=max_len)
        .prop_map(|set| set.into_iter().map(|m| 10f64.powf(-1.0 + m as f64 / 200.0)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weights_sum_to_one(x in positive_nodes(6)) {
        let w = lagrange_weights(&XVector::new(x).unwrap());
        let scale: f64 = w.as_slice().iter().map(|a| a.abs()).sum();
        prop_assert!((w.sum() - 1.0).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn weights_are_scale_invariant(x in positive_nodes(5), c in prop_oneof![0.01f64..100.0, -100.0f64..-0.01]) {
        let a = lagrange_weights(&XVector::new(x.clone()).unwrap());
        let b = lagrange_weights(&XVector::new(x.iter().map(|v| c * v).collect()).unwrap());
        for (ai, bi) in a.as_slice().iter().zip(b.as_slice()) {
            prop_assert!((ai - bi).abs() <= 1e-10 * ai.abs().max(1.0));
        }
    }

    #[test]
    fn gap_is_positive_and_permutation_invariant(x in positive_nodes(6), seed in any::<u64>()) {
        let g = inequality_gap(&XVector::new(x.clone()).unwrap()).unwrap();
        prop_assert!(g > 0.0);
        let mut y = x.clone();
        let len = y.len();
        y.rotate_left(seed as usize % len);
        if len > 1 {
            y.swap(0, (seed as usize / 7) % len);
        }
        let h = inequality_gap(&XVector::new(y).unwrap()).unwrap();
        prop_assert!((g - h).abs() <= 1e-9 * g.abs());
    }

    #[test]
    fn single_node_gap_is_x_minus_log1p(x in 1e-6f64..1e3) {
        let g = inequality_gap(&XVector::new(vec![x]).unwrap()).unwrap();
        let want = x - x.ln_1p();
        prop_assert!((g - want).abs() <= 1e-12 * want.max(1e-300) + 1e-300);
    }

    #[test]
    fn unit_multiplicities_reduce_to_lagrange(x in positive_nodes(4)) {
        let n = x.len();
        let spec = RepetitionSpec::new(x.clone(), vec![1; n]).unwrap();
        let a = lagrange_weights(spec.x());
        for (row, ai) in repetition_weights(&spec).iter().zip(a.as_slice()) {
            prop_assert_eq!(row.len(), 1);
            prop_assert!((row[0] - ai).abs() <= 1e-12 * ai.abs().max(1.0));
        }
        let g = repetition_gap(&spec).unwrap();
        let h = inequality_gap(&XVector::new(x).unwrap()).unwrap();
        prop_assert!((g - h).abs() <= 1e-10 * g.abs().max(1.0));
    }

    #[test]
    fn residues_on_both_sides_agree_up_to_parity(k in k_vector(8)) {
        let k = KVector::new(k).unwrap();
        let n = k.len();
        let a = decompose(&k, Side::Negative);
        let b = decompose(&k, Side::Positive);
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(b.leading, parity);
        for (ai, bi) in a.residues.iter().zip(&b.residues) {
            prop_assert!((bi - parity * ai).abs() <= 1e-14 * ai.abs().max(1.0));
        }
    }

    #[test]
    fn residues_are_scale_invariant(k in k_vector(6), c in 0.01f64..100.0) {
        let k = KVector::new(k).unwrap();
        let a = decompose(&k, Side::Negative);
        let b = decompose(&k.scaled(c).unwrap(), Side::Negative);
        for (ai, bi) in a.residues.iter().zip(&b.residues) {
            prop_assert!((ai - bi).abs() <= 1e-11 * ai.abs().max(1.0));
        }
    }

    #[test]
    fn blowup_time_is_below_bound_and_scale_invariant(
        k in k_vector(5),
        below in any::<bool>(),
        u in 0.01f64..10.0,
        c in 0.1f64..10.0,
    ) {
        let k = KVector::new(k).unwrap();
        let y0 = if below { -u * k.largest() } else { k.largest() * (1.0 + u) };
        let p = CauchyProblem::new(k.clone(), y0).unwrap();
        let r = analytic_blowup_time(&p).unwrap();
        prop_assert!(r.analytic_time > 0.0 && r.analytic_time < r.bound);
        let q = CauchyProblem::new(k.scaled(c).unwrap(), c * y0).unwrap();
        let s = analytic_blowup_time(&q).unwrap();
        prop_assert!((s.analytic_time - r.analytic_time).abs() <= 1e-10 * r.analytic_time);
    }

    #[test]
    fn negative_start_direction_alternates_with_n(k in k_vector(7), u in 0.01f64..10.0) {
        let k = KVector::new(k).unwrap();
        let n = k.len();
        let fate = classify_initial(&CauchyProblem::new(k, -u).unwrap());
        let want = if n % 2 == 1 { BlowupDirection::Future } else { BlowupDirection::Past };
        prop_assert_eq!(fate.blowup_direction, want);
    }

    #[test]
    fn mean_value_bound_is_strict(x in positive_nodes(6)) {
        let nodes = NodeSet::new(x.clone()).unwrap();
        let b = mean_value_bound_check(&nodes).unwrap();
        prop_assert!(b.holds());
        // well-separated nodes: the difference table agrees with the integral form
        if x.len() <= 3 {
            let sign = if x.len() % 2 == 1 { 1.0 } else { -1.0 };
            let dd = sign * divided_difference(&nodes, |t| f_log1p_over_x(t).unwrap());
            prop_assert!((dd - b.value).abs() <= 1e-6 * b.value);
        }
    }

    #[test]
    fn sampling_depends_only_on_its_arguments(n in 1usize..6, seed in any::<u64>()) {
        let a = sample_positive_distinct(n, 5, seed, 3.0).unwrap();
        let b = sample_positive_distinct(n, 5, seed, 3.0).unwrap();
        prop_assert_eq!(&a, &b);
        let longer = sample_positive_distinct(n, 8, seed, 3.0).unwrap();
        prop_assert_eq!(&a[..], &longer[..5]);
    }
}
