//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use lidskii_core::exponents::VariableExponent;
use lidskii_core::measure::{GridFunction, GridMeasureSpace, Partition};
use lidskii_core::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

pub fn unit(n: usize) -> Arc<GridMeasureSpace> {
    GridMeasureSpace::unit_cube(1, n).unwrap()
}

/// Space with random positive weights.
pub fn weighted_space(rng: &mut ChaCha8Rng, n: usize) -> Arc<GridMeasureSpace> {
    let points: Vec<Vec<f64>> = (0..n).map(|j| vec![(j as f64 + 0.5) / n as f64]).collect();
    let weights = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    GridMeasureSpace::new(1, &points, weights).unwrap()
}

pub fn random_complex(rng: &mut ChaCha8Rng, scale: f64) -> Complex {
    Complex::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

pub fn random_function(rng: &mut ChaCha8Rng, space: &Arc<GridMeasureSpace>) -> GridFunction {
    let values = (0..space.len()).map(|_| random_complex(rng, 1.0)).collect();
    GridFunction::new(Arc::clone(space), values).unwrap()
}

pub fn random_real_function(rng: &mut ChaCha8Rng, space: &Arc<GridMeasureSpace>) -> GridFunction {
    let values: Vec<f64> = (0..space.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    GridFunction::from_real(Arc::clone(space), &values).unwrap()
}

/// Random partition with at most `max_cells` cells.
pub fn random_partition(rng: &mut ChaCha8Rng, space: &Arc<GridMeasureSpace>, max_cells: usize) -> Partition {
    let k = rng.random_range(1..=max_cells.min(space.len()));
    let labels: Vec<usize> = (0..space.len()).map(|_| rng.random_range(0..k)).collect();
    Partition::from_labels(Arc::clone(space), &labels).unwrap()
}

/// Piecewise constant exponent on a random partition, values in `[lo, hi]`.
pub fn random_piecewise_exponent(
    rng: &mut ChaCha8Rng,
    space: &Arc<GridMeasureSpace>,
    lo: f64,
    hi: f64,
) -> VariableExponent {
    let part = random_partition(rng, space, 4);
    let values: Vec<f64> = (0..part.len()).map(|_| rng.random_range(lo..=hi)).collect();
    VariableExponent::piecewise(&part, &values).unwrap()
}

/// Random simple function: constant on the cells of a random partition.
pub fn random_simple_function(rng: &mut ChaCha8Rng, space: &Arc<GridMeasureSpace>) -> GridFunction {
    let part = random_partition(rng, space, 5);
    let cell_values: Vec<Complex> = (0..part.len()).map(|_| random_complex(rng, 2.0)).collect();
    let values = part.labels().iter().map(|&k| cell_values[k]).collect();
    GridFunction::new(Arc::clone(space), values).unwrap()
}

pub fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

/// Largest distance in a greedy nearest-neighbour matching of two
/// multisets of equal size; `∞` if the sizes differ.
pub fn multiset_distance(a: &[Complex], b: &[Complex]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}
