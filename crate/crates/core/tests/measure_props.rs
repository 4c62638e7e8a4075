mod common;

use common::*;
use lidskii_core::measure::{common_refinement, integrate, partition_refines, GridFunction, Partition};
use proptest::prelude::*;

proptest! {
    #[test]
    fn integrate_is_linear(seed in seeds(), n in 1usize..40) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let f = random_function(&mut r, &space);
        let g = random_function(&mut r, &space);
        let (a, b) = (random_complex(&mut r, 3.0), random_complex(&mut r, 3.0));
        let lhs = integrate(&f.axpby(a, &g, b).unwrap());
        let rhs = a * integrate(&f) + b * integrate(&g);
        let scale = 1.0 + (a.norm() + b.norm()) * space.total_mass() * 2.0;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
    }

    #[test]
    fn refinement_is_reflexive_and_antisymmetric(seed in seeds(), n in 1usize..30) {
        let mut r = rng(seed);
        let space = unit(n);
        let p = random_partition(&mut r, &space, 6);
        prop_assert!(partition_refines(&p, &p).unwrap());
        // Same cells listed in another order compare equal after canonicalisation.
        let mut cells = p.cells().to_vec();
        cells.reverse();
        let q = Partition::new(space.clone(), cells).unwrap();
        prop_assert!(partition_refines(&p, &q).unwrap() && partition_refines(&q, &p).unwrap());
        prop_assert_eq!(&p, &q);

        let other = random_partition(&mut r, &space, 6);
        if partition_refines(&p, &other).unwrap() && partition_refines(&other, &p).unwrap() {
            prop_assert_eq!(&p, &other);
        }
    }

    #[test]
    fn refinement_is_transitive(seed in seeds(), n in 1usize..30) {
        let mut r = rng(seed);
        let space = unit(n);
        let a = random_partition(&mut r, &space, 4);
        let b = common_refinement(&a, &random_partition(&mut r, &space, 4)).unwrap();
        let c = common_refinement(&b, &random_partition(&mut r, &space, 4)).unwrap();
        prop_assert!(partition_refines(&a, &b).unwrap());
        prop_assert!(partition_refines(&b, &c).unwrap());
        prop_assert!(partition_refines(&a, &c).unwrap());
    }

    #[test]
    fn common_refinement_refines_both(seed in seeds(), n in 1usize..30) {
        let mut r = rng(seed);
        let space = unit(n);
        let p1 = random_partition(&mut r, &space, 5);
        let p2 = random_partition(&mut r, &space, 5);
        let both = common_refinement(&p1, &p2).unwrap();
        prop_assert!(partition_refines(&p1, &both).unwrap());
        prop_assert!(partition_refines(&p2, &both).unwrap());
        prop_assert_eq!(both, common_refinement(&p2, &p1).unwrap());
    }

    #[test]
    fn cell_masses_sum_to_total(seed in seeds(), n in 1usize..50) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let p = random_partition(&mut r, &space, 7);
        let sum: f64 = p.cell_masses().iter().sum();
        prop_assert!((sum - space.total_mass()).abs() <= 1e-12 * space.total_mass());
    }

    #[test]
    fn level_sets_make_functions_simple(seed in seeds(), n in 1usize..30) {
        let mut r = rng(seed);
        let space = unit(n);
        let f = random_simple_function(&mut r, &space);
        let p = Partition::level_sets(&f);
        prop_assert!(p.is_constant_on_cells(&f));
        prop_assert!(p.len() <= 5);
    }

    #[test]
    fn records_round_trip(seed in seeds(), n in 1usize..20) {
        let mut r = rng(seed);
        let space = weighted_space(&mut r, n);
        let f = random_function(&mut r, &space);
        let back = GridFunction::from_record(&f.to_record()).unwrap();
        prop_assert_eq!(back.values(), f.values());
        prop_assert_eq!(back.space().weights(), space.weights());
    }
}
