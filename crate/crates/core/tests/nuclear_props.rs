mod common;

use std::sync::Arc;

use common::*;
use lidskii_core::exponents::VariableExponent;
use lidskii_core::measure::{GridFunction, GridMeasureSpace};
use lidskii_core::nuclear::{oloff_check, rep_apply, rep_kernel, rep_quasinorm_sum, rep_trace, NuclearRepresentation};
use lidskii_core::torus::spectrum;
use lidskii_core::Complex;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_rep(r: &mut ChaCha8Rng, space: &Arc<GridMeasureSpace>, max_terms: usize) -> NuclearRepresentation {
    let terms = (0..r.random_range(1..=max_terms))
        .map(|_| (random_function(r, space), random_function(r, space)))
        .collect();
    NuclearRepresentation::new(terms).unwrap()
}

/// Same kernel, different terms: split, regroup and shuffle.
fn regrouped(r: &mut ChaCha8Rng, rep: &NuclearRepresentation) -> NuclearRepresentation {
    let mut terms = Vec::new();
    for (g, h) in rep.terms() {
        let t = random_complex(r, 1.0);
        // g ⊗ h = (t g) ⊗ h + ((1 − t) g) ⊗ h
        terms.push((g.scale(t), h.clone()));
        terms.push((g.scale(c(1.0) - t), h.clone()));
    }
    // A canceling pair contributes nothing to the kernel.
    let space = rep.out_space();
    let (u, v) = (random_function(r, space), random_function(r, space));
    terms.push((u.clone(), v.clone()));
    terms.push((u.scale(c(-1.0)), v));
    terms.shuffle(r);
    NuclearRepresentation::new(terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn trace_equals_kernel_diagonal(seed in seeds(), n in 1usize..20) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let rep = random_rep(&mut r, &space, 6);
        let t = rep_trace(&rep).unwrap();
        let d = rep_kernel(&rep).diagonal_trace().unwrap();
        prop_assert!((t - d).norm() <= 1e-12 * (1.0 + t.norm()));
    }

    #[test]
    fn trace_equals_eigenvalue_sum(seed in seeds(), n in 1usize..20) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let rep = random_rep(&mut r, &space, 6);
        let t = rep_trace(&rep).unwrap();
        let ev: Complex = spectrum(&rep_kernel(&rep).operator_matrix()).unwrap().iter().sum();
        prop_assert!((t - ev).norm() <= 1e-8 * (1.0 + t.norm()));
    }

    #[test]
    fn equal_kernels_have_equal_traces(seed in seeds(), n in 1usize..20) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let rep = random_rep(&mut r, &space, 6);
        let other = regrouped(&mut r, &rep);
        let (k1, k2) = (rep_kernel(&rep), rep_kernel(&other));
        prop_assert!((k1.matrix() - k2.matrix()).norm() <= 1e-12 * (1.0 + k1.matrix().norm()));
        let (t1, t2) = (rep_trace(&rep).unwrap(), rep_trace(&other).unwrap());
        prop_assert!((t1 - t2).norm() <= 1e-10 * (1.0 + t1.norm()));
    }

    #[test]
    fn apply_agrees_with_kernel(seed in seeds(), n in 1usize..20) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let rep = random_rep(&mut r, &space, 6);
        let f = random_function(&mut r, &space);
        let a = rep_apply(&rep, &f).unwrap();
        let b = rep_kernel(&rep).apply(&f).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn oloff_holds(seed in seeds(), n in 1usize..16) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let rep = random_rep(&mut r, &space, 8);
        for exp in [0.5, 2.0 / 3.0, 1.0] {
            let report = oloff_check(&rep, exp).unwrap();
            prop_assert!(report.holds, "r={}: {:?}", exp, report);
        }
    }

    #[test]
    fn quasinorm_sum_decreases_in_r_for_small_terms(seed in seeds(), n in 1usize..16) {
        let mut r = rng(seed);
        let space = unit(n);
        // Unit-cube values in the unit disc give ‖g‖₂, ‖h‖₂ ≤ 1.
        let rep = random_rep(&mut r, &space, 6);
        let terms = rep.terms().iter().map(|(g, h)| (g.scale(c(0.5)), h.scale(c(0.5)))).collect();
        let rep = NuclearRepresentation::new(terms).unwrap();
        let two = VariableExponent::constant(space, 2.0).unwrap();
        let sums: Vec<f64> = [0.5, 2.0 / 3.0, 1.0]
            .iter()
            .map(|&e| rep_quasinorm_sum(&rep, e, &two, &two).unwrap())
            .collect();
        prop_assert!(sums[0] >= sums[1] && sums[1] >= sums[2]);
    }

    #[test]
    fn records_round_trip(seed in seeds(), n in 1usize..10) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let rep = random_rep(&mut r, &space, 4);
        let back = NuclearRepresentation::from_record(&rep.to_record()).unwrap();
        prop_assert_eq!(back.len(), rep.len());
        let (a, b) = (rep_kernel(&back), rep_kernel(&rep));
        prop_assert_eq!(a.matrix(), b.matrix());
    }
}

#[test]
fn oloff_equality_cases() {
    let space = unit(12);
    let one = GridFunction::constant(Arc::clone(&space), c(1.0)).unwrap();
    let x = GridFunction::from_real_fn(Arc::clone(&space), |x| x[0] - 0.3).unwrap();
    let rank_one = NuclearRepresentation::new(vec![(x.clone(), one.clone())]).unwrap();
    for r in [0.5, 2.0 / 3.0, 1.0] {
        let rep = oloff_check(&rank_one, r).unwrap();
        assert!((rep.schatten - rep.rep_bound.powf(1.0 / r)).abs() <= 1e-8 * rep.schatten);
    }
}
