//! Nuclear representations `T = Σₙ gₙ ⊗ hₙ` on grid spaces.
//!
//! A representation acts by `Tf = Σₙ ⟨f, hₙ⟩ gₙ` and has kernel
//! `k(x, y) = Σₙ gₙ(x) hₙ(y)`, so `Tf(x) = ∫ k(x, y) f(y) dμ(y)`.
//!
//! Two kinds of size are reported and must not be confused:
//! [`rep_quasinorm_sum`] is `Σ ‖gₙ‖^r ‖hₙ‖^r` for *this* representation,
//! an upper bound on `n_r(T)^r`; [`schatten_quasinorm`] is the singular
//! value quasi-norm of the operator itself. The infimum over all
//! representations is never computed.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::exponents::VariableExponent;
use crate::linalg;
use crate::measure::{duality_pairing, ensure_same_space, GridFunction, GridFunctionRecord, GridMeasureSpace};
use crate::norms::{luxemburg_norm, DEFAULT_TOL};
use crate::Complex;

/// Finite list of factor pairs `(gₙ, hₙ)`; `gₙ` live on the output space,
/// `hₙ` on the input space. Term order is preserved in every sum.
#[derive(Debug, Clone, PartialEq)]
pub struct NuclearRepresentation {
    out_space: Arc<GridMeasureSpace>,
    in_space: Arc<GridMeasureSpace>,
    terms: Vec<(GridFunction, GridFunction)>,
}

impl NuclearRepresentation {
    pub fn new(terms: Vec<(GridFunction, GridFunction)>) -> Result<Self> {
        let (g0, h0) = terms
            .first()
            .ok_or_else(|| Error::InvalidInput("a representation needs at least one term".into()))?;
        let out_space = Arc::clone(g0.space());
        let in_space = Arc::clone(h0.space());
        for (g, h) in &terms {
            ensure_same_space(&out_space, g.space(), "representation output factors")?;
            ensure_same_space(&in_space, h.space(), "representation input factors")?;
        }
        Ok(NuclearRepresentation { out_space, in_space, terms })
    }

    pub fn out_space(&self) -> &Arc<GridMeasureSpace> {
        &self.out_space
    }

    pub fn in_space(&self) -> &Arc<GridMeasureSpace> {
        &self.in_space
    }

    pub fn terms(&self) -> &[(GridFunction, GridFunction)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_record(&self) -> RepresentationRecord {
        RepresentationRecord {
            terms: self
                .terms
                .iter()
                .map(|(g, h)| TermRecord { g: g.to_record(), h: h.to_record() })
                .collect(),
        }
    }

    pub fn from_record(record: &RepresentationRecord) -> Result<Self> {
        let first = record
            .terms
            .first()
            .ok_or_else(|| Error::InvalidInput("representation record has no terms".into()))?;
        let out_space = first.g.space()?;
        let in_space = first.h.space()?;
        let in_space = if in_space == out_space { Arc::clone(&out_space) } else { in_space };
        let terms = record
            .terms
            .iter()
            .map(|t| {
                Ok((
                    GridFunction::from_record_on(&t.g, Arc::clone(&out_space))?,
                    GridFunction::from_record_on(&t.h, Arc::clone(&in_space))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }
}

/// Serialized term: a pair of grid-function records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub g: GridFunctionRecord,
    pub h: GridFunctionRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationRecord {
    pub terms: Vec<TermRecord>,
}

/// Dense kernel `k(x_i, y_j)`; rows follow the output space, columns the
/// input space.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    matrix: DMatrix<Complex>,
    row_space: Arc<GridMeasureSpace>,
    col_space: Arc<GridMeasureSpace>,
}

impl KernelMatrix {
    pub fn new(
        matrix: DMatrix<Complex>,
        row_space: Arc<GridMeasureSpace>,
        col_space: Arc<GridMeasureSpace>,
    ) -> Result<Self> {
        if matrix.nrows() != row_space.len() || matrix.ncols() != col_space.len() {
            return Err(Error::InvalidInput(format!(
                "{}x{} kernel for spaces of {} and {} atoms",
                matrix.nrows(),
                matrix.ncols(),
                row_space.len(),
                col_space.len()
            )));
        }
        Ok(KernelMatrix { matrix, row_space, col_space })
    }

    pub fn matrix(&self) -> &DMatrix<Complex> {
        &self.matrix
    }

    pub fn row_space(&self) -> &Arc<GridMeasureSpace> {
        &self.row_space
    }

    pub fn col_space(&self) -> &Arc<GridMeasureSpace> {
        &self.col_space
    }

    /// Matrix acting on grid values: `k(x_i, y_j) · w_j`.
    pub fn operator_matrix(&self) -> DMatrix<Complex> {
        let w = self.col_space.weights();
        DMatrix::from_fn(self.matrix.nrows(), self.matrix.ncols(), |i, j| self.matrix[(i, j)] * w[j])
    }

    /// `Tf(x_i) = Σ_j k(x_i, y_j) f(y_j) w_j`.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        ensure_same_space(&self.col_space, f.space(), "kernel apply")?;
        let w = self.col_space.weights();
        let x = f.values();
        let values = exec::map_range(self.matrix.nrows(), |i| {
            (0..x.len()).fold(Complex::new(0.0, 0.0), |acc, j| acc + self.matrix[(i, j)] * x[j] * w[j])
        });
        GridFunction::new(Arc::clone(&self.row_space), values)
    }

    /// `∫ k(x, x) dμ(x)` for a kernel on a single space.
    pub fn diagonal_trace(&self) -> Result<Complex> {
        ensure_same_space(&self.row_space, &self.col_space, "kernel trace")?;
        let w = self.row_space.weights();
        Ok((0..w.len()).fold(Complex::new(0.0, 0.0), |acc, j| acc + self.matrix[(j, j)] * w[j]))
    }
}

/// `Tf = Σₙ ⟨f, hₙ⟩ gₙ`.
pub fn rep_apply(rep: &NuclearRepresentation, f: &GridFunction) -> Result<GridFunction> {
    ensure_same_space(&rep.in_space, f.space(), "rep_apply")?;
    let mut out = vec![Complex::new(0.0, 0.0); rep.out_space.len()];
    for (g, h) in &rep.terms {
        let c = duality_pairing(f, h)?;
        for (o, &gv) in out.iter_mut().zip(g.values()) {
            *o += c * gv;
        }
    }
    GridFunction::new(Arc::clone(&rep.out_space), out)
}

/// `k(x_i, y_j) = Σₙ gₙ(x_i) hₙ(y_j)`, terms added in order.
pub fn rep_kernel(rep: &NuclearRepresentation) -> KernelMatrix {
    let (rows, cols) = (rep.out_space.len(), rep.in_space.len());
    let row_data = exec::map_range(rows, |i| {
        (0..cols)
            .map(|j| {
                rep.terms
                    .iter()
                    .fold(Complex::new(0.0, 0.0), |acc, (g, h)| acc + g.values()[i] * h.values()[j])
            })
            .collect::<Vec<_>>()
    });
    let matrix = DMatrix::from_fn(rows, cols, |i, j| row_data[i][j]);
    KernelMatrix { matrix, row_space: Arc::clone(&rep.out_space), col_space: Arc::clone(&rep.in_space) }
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("r must lie in (0, 1], got {r}")))
    }
}

/// `Σₙ ‖gₙ‖_{p_out}^r ‖hₙ‖_{p_in_conj}^r`: an upper bound for `n_r(T)^r`.
pub fn rep_quasinorm_sum(
    rep: &NuclearRepresentation,
    r: f64,
    p_out: &VariableExponent,
    p_in_conj: &VariableExponent,
) -> Result<f64> {
    check_r(r)?;
    ensure_same_space(&rep.out_space, p_out.space(), "rep_quasinorm_sum output exponent")?;
    ensure_same_space(&rep.in_space, p_in_conj.space(), "rep_quasinorm_sum input exponent")?;
    let products = exec::try_map_range(rep.terms.len(), |n| -> Result<f64> {
        let (g, h) = &rep.terms[n];
        let ng = luxemburg_norm(g, p_out, DEFAULT_TOL)?.value;
        let nh = luxemburg_norm(h, p_in_conj, DEFAULT_TOL)?.value;
        Ok(ng.powf(r) * nh.powf(r))
    })?;
    Ok(products.iter().sum())
}

/// `Tr(T) = Σₙ ⟨gₙ, hₙ⟩`.
pub fn rep_trace(rep: &NuclearRepresentation) -> Result<Complex> {
    ensure_same_space(&rep.out_space, &rep.in_space, "rep_trace")?;
    rep.terms
        .iter()
        .try_fold(Complex::new(0.0, 0.0), |acc, (g, h)| Ok(acc + duality_pairing(g, h)?))
}

/// Singular values of the kernel operator in the μ-weighted `L²`
/// geometry, i.e. of `diag(√w) K diag(√w)`, descending. Values below the
/// numerical-rank cutoff are dropped.
pub fn weighted_singular_values(kernel: &KernelMatrix) -> Result<Vec<f64>> {
    let (wr, wc) = (kernel.row_space.weights(), kernel.col_space.weights());
    let m = &kernel.matrix;
    let scaled = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * (wr[i] * wc[j]).sqrt());
    linalg::significant_singular_values(&scaled)
}

/// `(Σ_j s_j^r)^{1/r}` over the weighted singular values.
pub fn schatten_quasinorm(kernel: &KernelMatrix, r: f64) -> Result<f64> {
    check_r(r)?;
    if kernel.matrix.nrows() != kernel.matrix.ncols() {
        return Err(Error::InvalidInput("Schatten quasi-norm needs a square kernel".into()));
    }
    let s = weighted_singular_values(kernel)?;
    Ok(s.iter().map(|v| v.powf(r)).sum::<f64>().powf(1.0 / r))
}

/// Singular-value quasi-norm against the representation bound at `p ≡ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OloffReport {
    pub schatten: f64,
    /// `Σ ‖gₙ‖₂^r ‖hₙ‖₂^r` (an r-th power).
    pub rep_bound: f64,
    pub holds: bool,
}

/// Relative slack in the one-sided comparison.
pub const OLOFF_SLACK: f64 = 1e-8;

/// Checks `‖T‖_{S_r} ≤ (Σ ‖gₙ‖₂^r ‖hₙ‖₂^r)^{1/r}`. Equality is not
/// expected in general: the representation need not be optimal.
pub fn oloff_check(rep: &NuclearRepresentation, r: f64) -> Result<OloffReport> {
    ensure_same_space(&rep.out_space, &rep.in_space, "oloff_check")?;
    let two = VariableExponent::constant(Arc::clone(&rep.out_space), 2.0)?;
    let rep_bound = rep_quasinorm_sum(rep, r, &two, &two)?;
    let schatten = schatten_quasinorm(&rep_kernel(rep), r)?;
    Ok(OloffReport { schatten, rep_bound, holds: schatten <= rep_bound.powf(1.0 / r) * (1.0 + OLOFF_SLACK) })
}
