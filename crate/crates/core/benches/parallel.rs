//! Single-threaded vs. pooled execution of the data-parallel kernels.
//! Built without the `parallel` feature both variants run sequentially.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lidskii_core::approx::{operator_norm_estimate, partition_operator};
use lidskii_core::exec::with_threads;
use lidskii_core::exponents::VariableExponent;
use lidskii_core::measure::{GridFunction, GridMeasureSpace, Partition};
use lidskii_core::norms::holder_check;
use lidskii_core::torus::{bessel_symbol, quantize, FrequencyBox, TorusGrid};

const MODES: [(&str, usize); 2] = [("sequential", 1), ("pool", 0)];

fn norm_estimate(c: &mut Criterion) {
    let space = GridMeasureSpace::unit_cube(1, 64).unwrap();
    let op = partition_operator(&Partition::dyadic(Arc::clone(&space), 3).unwrap());
    let p = VariableExponent::from_fn(Arc::clone(&space), |x| 1.5 + 3.0 * x[0]).unwrap();
    let mut group = c.benchmark_group("operator_norm_estimate");
    for (name, threads) in MODES {
        group.bench_function(BenchmarkId::new(name, 256), |b| {
            b.iter(|| with_threads(threads, || operator_norm_estimate(&op, &p, 256, 7).unwrap().lower_bound))
        });
    }
    group.finish();
}

fn quantization(c: &mut Criterion) {
    let grid = TorusGrid::new(2, 21).unwrap();
    let freq = FrequencyBox::new(2, 10).unwrap();
    let sigma = bessel_symbol(2.0, &grid, &freq).unwrap();
    let mut group = c.benchmark_group("quantize");
    for (name, threads) in MODES {
        group.bench_function(BenchmarkId::new(name, "21x21"), |b| {
            b.iter(|| with_threads(threads, || black_box(quantize(&sigma))))
        });
    }
    group.finish();
}

fn holder_sweep(c: &mut Criterion) {
    let space = GridMeasureSpace::unit_cube(1, 128).unwrap();
    let p = VariableExponent::from_fn(Arc::clone(&space), |x| 2.0 + x[0]).unwrap();
    let q = VariableExponent::from_fn(Arc::clone(&space), |x| 3.0 - x[0]).unwrap();
    let s = lidskii_core::exponents::holder_product_exponent(&p, &q).unwrap();
    let fs: Vec<GridFunction> = (1..=64)
        .map(|k| GridFunction::from_real_fn(Arc::clone(&space), |x| (k as f64 * x[0]).sin() + 0.1).unwrap())
        .collect();
    let sweep = || {
        lidskii_core::exec::map_range(fs.len(), |i| {
            holder_check(&fs[i], &fs[fs.len() - 1 - i], &p, &q, &s, 1e-12).unwrap().lhs
        })
    };
    let mut group = c.benchmark_group("holder_sweep");
    for (name, threads) in MODES {
        group.bench_function(BenchmarkId::new(name, 64), |b| b.iter(|| with_threads(threads, || black_box(sweep()))));
    }
    group.finish();
}

criterion_group!(benches, norm_estimate, quantization, holder_sweep);
criterion_main!(benches);
