mod common;

use common::*;
use lidskii_core::exponents::{holder_product_exponent, VariableExponent};
use lidskii_core::norms::{holder_check, luxemburg_norm, modular, seq_norm};
use lidskii_core::Complex;
use proptest::prelude::*;
use rand::Rng;

/// Classical `(∫|f|^p dμ)^{1/p}`, summed independently of the library.
fn classical(f: &lidskii_core::measure::GridFunction, p: f64) -> f64 {
    f.values()
        .iter()
        .zip(f.space().weights())
        .map(|(v, w)| w * v.norm().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

proptest! {
    #[test]
    fn constant_exponent_matches_classical(seed in seeds(), n in 1usize..40, p0 in 1.0f64..6.0) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let f = random_simple_function(&mut r, &space);
        let p = VariableExponent::constant(space, p0).unwrap();
        let got = luxemburg_norm(&f, &p, 1e-13).unwrap().value;
        let want = classical(&f, p0);
        prop_assert!((got - want).abs() <= 1e-10 * (1.0 + want), "{} vs {}", got, want);
    }

    #[test]
    fn unit_modular_at_the_norm(seed in seeds(), n in 1usize..40) {
        let mut r = rng(seed);
        let space = unit(n);
        let f = random_simple_function(&mut r, &space);
        prop_assume!(!f.is_zero());
        let p = random_piecewise_exponent(&mut r, &space, 1.0, 10.0);
        let norm = luxemburg_norm(&f, &p, 1e-13).unwrap().value;
        let rho = modular(&f.scale(c(1.0 / norm)), &p).unwrap();
        prop_assert!((rho - 1.0).abs() <= 1e-8, "ρ = {}", rho);
    }

    #[test]
    fn homogeneity(seed in seeds(), n in 1usize..40) {
        let mut r = rng(seed);
        let space = unit(n);
        let f = random_function(&mut r, &space);
        let p = random_piecewise_exponent(&mut r, &space, 1.0, 8.0);
        let k = random_complex(&mut r, 50.0);
        let a = luxemburg_norm(&f.scale(k), &p, 1e-13).unwrap().value;
        let b = k.norm() * luxemburg_norm(&f, &p, 1e-13).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-10 * b.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn triangle_inequality(seed in seeds(), n in 1usize..40) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let f = random_function(&mut r, &space);
        let g = random_function(&mut r, &space);
        let mut values = random_piecewise_exponent(&mut r, &space, 1.0, 8.0).values().to_vec();
        values[0] = f64::INFINITY;
        let p = VariableExponent::new(space, values).unwrap();
        let norm = |h: &lidskii_core::measure::GridFunction| luxemburg_norm(h, &p, 1e-13).unwrap().value;
        prop_assert!(norm(&f.add(&g).unwrap()) <= norm(&f) + norm(&g) + 1e-10);
    }

    #[test]
    fn modular_is_monotone_in_lambda(seed in seeds(), n in 1usize..30) {
        let mut r = rng(seed);
        let space = unit(n);
        let f = random_function(&mut r, &space);
        let p = random_piecewise_exponent(&mut r, &space, 1.0, 8.0);
        let l1 = r.random_range(0.01..2.0);
        let l2 = l1 * r.random_range(1.0..3.0);
        prop_assert!(modular(&f.scale(c(1.0 / l1)), &p).unwrap() >= modular(&f.scale(c(1.0 / l2)), &p).unwrap());
    }

    #[test]
    fn holder_with_factor_two(seed in seeds(), n in 1usize..30) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let f = random_simple_function(&mut r, &space);
        let g = random_simple_function(&mut r, &space);
        let p = random_piecewise_exponent(&mut r, &space, 1.0, 10.0);
        let q = random_piecewise_exponent(&mut r, &space, 1.0, 10.0);
        prop_assume!(holder_product_exponent(&p, &q).is_ok());
        let s = holder_product_exponent(&p, &q).unwrap();
        let report = holder_check(&f, &g, &p, &q, &s, 1e-12).unwrap();
        prop_assert!(report.holds, "{:?}", report);
    }

    #[test]
    fn sequence_norm_of_a_single_entry(v in 1e-6f64..1e6, p in 1.0f64..20.0) {
        // ‖(v)‖ = |v| for any exponent: ρ(v/λ) = (|v|/λ)^p = 1 at λ = |v|.
        let got = seq_norm(&[Complex::new(0.0, v)], &[p], 1e-14).unwrap().value;
        prop_assert!((got - v).abs() <= 1e-12 * v);
    }
}
