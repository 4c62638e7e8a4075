//! Variable exponents `p(·)` on a grid.
//!
//! `p(x) = ∞` is represented by IEEE `+∞`, which is exact and never
//! produced by finite arithmetic on valid exponents, so it doubles as the
//! sentinel. The norm module gives such atoms essential-supremum semantics.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{ensure_same_space, GridMeasureSpace, Partition};

/// Per-atom exponent values in `[1, ∞]` with cached `p⁻` and `p⁺`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableExponent {
    space: Arc<GridMeasureSpace>,
    values: Vec<f64>,
    p_minus: f64,
    p_plus: f64,
}

impl VariableExponent {
    pub fn new(space: Arc<GridMeasureSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidInput(format!(
                "{} exponent values for {} atoms",
                values.len(),
                space.len()
            )));
        }
        if let Some(j) = values.iter().position(|&p| !(p >= 1.0)) {
            return Err(Error::InvalidInput(format!(
                "exponent {} at atom {j} is not in [1, ∞]",
                values[j]
            )));
        }
        let p_minus = values.iter().copied().fold(f64::INFINITY, f64::min);
        let p_plus = values.iter().copied().fold(1.0, f64::max);
        Ok(VariableExponent { space, values, p_minus, p_plus })
    }

    pub fn constant(space: Arc<GridMeasureSpace>, p: f64) -> Result<Self> {
        let n = space.len();
        Self::new(space, vec![p; n])
    }

    /// Samples a closed-form exponent at the atom coordinates.
    pub fn from_fn(space: Arc<GridMeasureSpace>, p: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = space.points().map(p).collect();
        Self::new(space, values)
    }

    /// Simple exponent taking `values[k]` on cell `k` of `partition`.
    pub fn piecewise(partition: &Partition, values: &[f64]) -> Result<Self> {
        if values.len() != partition.len() {
            return Err(Error::InvalidInput(format!(
                "{} exponent values for {} cells",
                values.len(),
                partition.len()
            )));
        }
        let labels = partition.labels();
        Self::new(Arc::clone(partition.space()), labels.iter().map(|&k| values[k]).collect())
    }

    /// Bounded exponent: errors if any atom carries `∞`.
    pub fn bounded(space: Arc<GridMeasureSpace>, values: Vec<f64>) -> Result<Self> {
        let p = Self::new(space, values)?;
        if !p.is_bounded() {
            return Err(Error::InvalidInput("bounded exponent requires p⁺ < ∞".into()));
        }
        Ok(p)
    }

    pub fn space(&self) -> &Arc<GridMeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn is_bounded(&self) -> bool {
        self.p_plus.is_finite()
    }

    pub fn conjugate(&self) -> Self {
        conjugate(self)
    }

    pub fn to_record(&self) -> ExponentRecord {
        ExponentRecord { values: self.values.clone() }
    }

    pub fn from_record(record: &ExponentRecord, space: Arc<GridMeasureSpace>) -> Result<Self> {
        Self::new(space, record.values.clone())
    }
}

/// Serialized exponent: per-atom values, `inf` for ∞.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentRecord {
    pub values: Vec<f64>,
}

/// Conjugate of a single exponent value: `1 ↦ ∞`, `∞ ↦ 1`, else `p/(p−1)`.
pub fn conjugate_value(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p == f64::INFINITY {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `1/p` with `1/∞ = 0`.
pub fn reciprocal(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// Pointwise conjugate exponent `p'(·)`.
pub fn conjugate(p: &VariableExponent) -> VariableExponent {
    let values = p.values.iter().map(|&v| conjugate_value(v)).collect();
    VariableExponent::new(Arc::clone(&p.space), values).expect("conjugate of a valid exponent")
}

/// Checks `|1/s − 1/p − 1/q| ≤ tol` at every atom.
pub fn holder_triple_valid(
    s: &VariableExponent,
    p: &VariableExponent,
    q: &VariableExponent,
    tol: f64,
) -> Result<bool> {
    ensure_same_space(&s.space, &p.space, "holder triple (s, p)")?;
    ensure_same_space(&s.space, &q.space, "holder triple (s, q)")?;
    Ok(s.values
        .iter()
        .zip(p.values.iter().zip(&q.values))
        .all(|(&sv, (&pv, &qv))| (reciprocal(sv) - reciprocal(pv) - reciprocal(qv)).abs() <= tol))
}

/// The exponent `s` with `1/s = 1/p + 1/q`, if it stays in `[1, ∞]`.
pub fn holder_product_exponent(p: &VariableExponent, q: &VariableExponent) -> Result<VariableExponent> {
    ensure_same_space(&p.space, &q.space, "holder product exponent")?;
    let values = p
        .values
        .iter()
        .zip(&q.values)
        .map(|(&a, &b)| {
            let inv = reciprocal(a) + reciprocal(b);
            if inv == 0.0 {
                f64::INFINITY
            } else {
                1.0 / inv
            }
        })
        .collect();
    VariableExponent::new(Arc::clone(&p.space), values)
        .map_err(|_| Error::InvalidInput("1/p + 1/q exceeds 1 somewhere; no valid s".into()))
}
