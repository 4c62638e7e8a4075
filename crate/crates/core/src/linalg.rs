//! Dense eigen/singular-value routines backed by nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::Complex;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 100_000;

fn check_square(m: &DMatrix<Complex>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidInput(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Complex Schur form `m = Q T Q*`; returns `(Q, T)`.
pub(crate) fn schur(m: &DMatrix<Complex>) -> Result<(DMatrix<Complex>, DMatrix<Complex>)> {
    check_square(m)?;
    if m.nrows() == 0 {
        return Ok((m.clone(), m.clone()));
    }
    let s = nalgebra::linalg::Schur::try_new(m.clone(), SCHUR_EPS, SCHUR_MAX_ITER).ok_or_else(|| {
        Error::Numerical(format!(
            "Schur iteration did not converge for a {}x{} matrix (max {} iterations)",
            m.nrows(),
            m.ncols(),
            SCHUR_MAX_ITER
        ))
    })?;
    Ok(s.unpack())
}

/// Eigenvalues with algebraic multiplicity, in Schur diagonal order.
pub(crate) fn eigenvalues(m: &DMatrix<Complex>) -> Result<Vec<Complex>> {
    let (_, t) = schur(m)?;
    Ok(t.diagonal().iter().copied().collect())
}

/// Eigenpairs from back-substitution on the triangular Schur factor.
pub(crate) fn eigenpairs(m: &DMatrix<Complex>) -> Result<Vec<(Complex, DVector<Complex>)>> {
    let (q, t) = schur(m)?;
    let n = t.nrows();
    let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tiny = scale * f64::EPSILON;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = DVector::<Complex>::zeros(n);
        y[k] = Complex::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut acc = Complex::new(0.0, 0.0);
            for l in j + 1..=k {
                acc += t[(j, l)] * y[l];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < tiny {
                // Repeated eigenvalue: perturb to keep the solve finite.
                denom = Complex::new(tiny, 0.0);
            }
            y[j] = -acc / denom;
        }
        let v = &q * y;
        let norm = v.norm();
        out.push((lambda, v / Complex::new(norm, 0.0)));
    }
    Ok(out)
}

/// Singular values, descending.
pub(crate) fn singular_values(m: &DMatrix<Complex>) -> Result<Vec<f64>> {
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    let svd = nalgebra::linalg::SVD::try_new(m.clone(), false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical(format!("SVD did not converge for a {}x{} matrix", m.nrows(), m.ncols())))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Singular values above the usual numerical-rank cutoff
/// `max(rows, cols) · ε · s_max`; the rest are treated as exact zeros.
pub(crate) fn significant_singular_values(m: &DMatrix<Complex>) -> Result<Vec<f64>> {
    let s = singular_values(m)?;
    let cutoff = s.first().copied().unwrap_or(0.0) * m.nrows().max(m.ncols()) as f64 * f64::EPSILON;
    Ok(s.into_iter().filter(|&v| v > cutoff).collect())
}

pub(crate) fn trace(m: &DMatrix<Complex>) -> Complex {
    (0..m.nrows().min(m.ncols())).fold(Complex::new(0.0, 0.0), |acc, i| acc + m[(i, i)])
}
