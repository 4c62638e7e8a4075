//! Partition-averaging operators and the bounded approximation property.
//!
//! For a partition `𝔓 = {Ω₁,…,Ω_l}` the operator
//! `L_𝔓 f = Σ_k μ(Ω_k)^{-1} ⟨f, 1_{Ω_k}⟩ 1_{Ω_k}` replaces `f` by its cell
//! averages. It is a finite-rank projection whose norm on `L^{p(·)}` is at
//! most 2 for bounded exponents. That bound has no closed form to compare
//! against, so [`operator_norm_estimate`] reports a sampled *lower* bound:
//! a value above 2 would falsify it.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::exponents::VariableExponent;
use crate::linalg;
use crate::measure::{ensure_same_space, partition_refines, GridFunction, GridMeasureSpace, Partition};
use crate::norms::{luxemburg_norm, DEFAULT_TOL};
use crate::Complex;

/// Dense operator on the grid functions of one space, acting on values:
/// `(Af)_i = Σ_j A_ij f_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRankOperator {
    space: Arc<GridMeasureSpace>,
    matrix: DMatrix<Complex>,
    rank_bound: usize,
}

impl FiniteRankOperator {
    pub fn new(space: Arc<GridMeasureSpace>, matrix: DMatrix<Complex>, rank_bound: usize) -> Result<Self> {
        let n = space.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "{}x{} matrix on a space with {n} atoms",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(FiniteRankOperator { space, matrix, rank_bound: rank_bound.min(n) })
    }

    pub fn identity(space: Arc<GridMeasureSpace>) -> Self {
        let n = space.len();
        FiniteRankOperator { space, matrix: DMatrix::identity(n, n), rank_bound: n }
    }

    pub fn space(&self) -> &Arc<GridMeasureSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex> {
        &self.matrix
    }

    pub fn rank_bound(&self) -> usize {
        self.rank_bound
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FiniteRankOperator) -> Result<Self> {
        ensure_same_space(&self.space, &other.space, "compose")?;
        Ok(FiniteRankOperator {
            space: Arc::clone(&self.space),
            matrix: &self.matrix * &other.matrix,
            rank_bound: self.rank_bound.min(other.rank_bound),
        })
    }

    /// Number of singular values above `threshold`.
    pub fn numerical_rank(&self, threshold: f64) -> Result<usize> {
        Ok(linalg::singular_values(&self.matrix)?.into_iter().filter(|&s| s > threshold).count())
    }
}

/// The averaging operator `L_𝔓`: entry `(i, j)` is `w_j / μ(Ω_k)` when
/// atoms `i` and `j` share cell `k`, zero otherwise.
pub fn partition_operator(partition: &Partition) -> FiniteRankOperator {
    let space = Arc::clone(partition.space());
    let n = space.len();
    let w = space.weights();
    let mut matrix = DMatrix::<Complex>::zeros(n, n);
    for (cell, mass) in partition.cells().iter().zip(partition.cell_masses()) {
        for &i in cell {
            for &j in cell {
                matrix[(i, j)] = Complex::new(w[j] / mass, 0.0);
            }
        }
    }
    FiniteRankOperator { space, matrix, rank_bound: partition.len() }
}

/// Matrix-vector product; each row is summed in ascending column order.
pub fn apply(op: &FiniteRankOperator, f: &GridFunction) -> Result<GridFunction> {
    ensure_same_space(&op.space, f.space(), "apply")?;
    let n = op.space.len();
    let x = f.values();
    let values = exec::map_range(n, |i| {
        (0..n).fold(Complex::new(0.0, 0.0), |acc, j| acc + op.matrix[(i, j)] * x[j])
    });
    GridFunction::new(Arc::clone(&op.space), values)
}

/// How random test functions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Cell values uniform on `[−1, 1]`.
    RealUniform,
    /// Cell values uniform on the complex unit disc.
    ComplexDisc,
}

/// Settings for [`NormEstimator::estimate`].
#[derive(Debug, Clone)]
pub struct NormEstimator {
    pub trials: usize,
    pub seed: u64,
    pub sampling: Sampling,
    /// Cells on which the random simple functions are constant; `None`
    /// means one value per atom.
    pub cells: Option<Partition>,
    pub tol: f64,
}

impl NormEstimator {
    pub fn new(trials: usize, seed: u64) -> Self {
        NormEstimator { trials, seed, sampling: Sampling::RealUniform, cells: None, tol: DEFAULT_TOL }
    }

    pub fn sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn cells(mut self, cells: Partition) -> Self {
        self.cells = Some(cells);
        self
    }

    /// Best ratio `‖Af‖ / ‖f‖` over the sampled functions.
    ///
    /// Trial `t` uses its own ChaCha stream `(seed, t)`, so the result is
    /// the same for any thread count.
    pub fn estimate(&self, op: &FiniteRankOperator, p: &VariableExponent) -> Result<NormEstimate> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("need at least one trial".into()));
        }
        ensure_same_space(&op.space, p.space(), "operator_norm_estimate")?;
        let cells = match &self.cells {
            Some(c) => {
                ensure_same_space(&op.space, c.space(), "sampling cells")?;
                c.clone()
            }
            None => Partition::atoms(Arc::clone(&op.space)),
        };
        let labels = cells.labels();
        let samples = exec::try_map_range(self.trials, |t| -> Result<Option<(f64, GridFunction)>> {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(t as u64);
            let cell_values: Vec<Complex> = (0..cells.len()).map(|_| self.draw(&mut rng)).collect();
            let f = GridFunction::new(
                Arc::clone(&op.space),
                labels.iter().map(|&k| cell_values[k]).collect(),
            )?;
            let norm = luxemburg_norm(&f, p, self.tol)?.value;
            if norm == 0.0 {
                return Ok(None);
            }
            let f = f.scale(Complex::new(1.0 / norm, 0.0));
            let image = luxemburg_norm(&apply(op, &f)?, p, self.tol)?.value;
            Ok(Some((image, f)))
        })?;
        let mut best: Option<(f64, GridFunction)> = None;
        for (value, f) in samples.into_iter().flatten() {
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, f));
            }
        }
        let (lower_bound, argmax) = best.unwrap_or_else(|| (0.0, GridFunction::zeros(Arc::clone(&op.space))));
        Ok(NormEstimate { lower_bound, argmax, trials: self.trials })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Complex {
        match self.sampling {
            Sampling::RealUniform => Complex::new(rng.random_range(-1.0..=1.0), 0.0),
            Sampling::ComplexDisc => {
                let r = rng.random::<f64>().sqrt();
                let theta = rng.random_range(0.0..std::f64::consts::TAU);
                Complex::from_polar(r, theta)
            }
        }
    }
}

/// Sampled lower bound on an operator norm.
#[derive(Debug, Clone)]
pub struct NormEstimate {
    pub lower_bound: f64,
    /// Unit-norm function attaining `lower_bound`.
    pub argmax: GridFunction,
    pub trials: usize,
}

/// Lower bound on `‖op‖_{L(L^{p(·)})}` from `trials` random real simple
/// functions (one value per atom), normalised to `‖f‖_{p(·)} = 1`.
pub fn operator_norm_estimate(
    op: &FiniteRankOperator,
    p: &VariableExponent,
    trials: usize,
    seed: u64,
) -> Result<NormEstimate> {
    NormEstimator::new(trials, seed).estimate(op, p)
}

/// One step of a refinement chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BapStep {
    pub partition_index: usize,
    pub cells: usize,
    /// `‖f − L_𝔓 f‖_{p(·)}`
    pub error: f64,
}

/// Approximation errors of `L_𝔓 f` along an increasing chain of partitions.
pub fn bap_demo(f: &GridFunction, p: &VariableExponent, chain: &[Partition]) -> Result<Vec<BapStep>> {
    ensure_same_space(f.space(), p.space(), "bap_demo")?;
    for (k, w) in chain.windows(2).enumerate() {
        if !partition_refines(&w[0], &w[1])? {
            return Err(Error::Precondition(format!(
                "chain is not increasing: partition {} does not refine partition {k}",
                k + 1
            )));
        }
    }
    chain
        .iter()
        .enumerate()
        .map(|(k, part)| {
            ensure_same_space(f.space(), part.space(), "bap_demo chain")?;
            let approx = apply(&partition_operator(part), f)?;
            let error = luxemburg_norm(&f.sub(&approx)?, p, DEFAULT_TOL)?.value;
            Ok(BapStep { partition_index: k, cells: part.len(), error })
        })
        .collect()
}
