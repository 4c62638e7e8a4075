//! Modulars and Luxemburg norms.
//!
//! The Luxemburg norm `‖f‖ = inf{λ > 0 : ρ(f/λ) ≤ 1}` is found by
//! bracketed bisection on the non-increasing map `λ ↦ ρ(f/λ)`. Since the
//! norm is positively homogeneous, the search runs on `f / ‖f‖_∞`; the
//! tolerance is therefore relative to `‖f‖_∞` and the reported bracket is
//! rescaled back to the units of `f`.
//!
//! Atoms with `p = ∞` contribute nothing to the modular while
//! `|f_j| ≤ λ` and `+∞` otherwise, so they act as the hard constraint
//! `λ ≥ max |f_j|` and clamp the lower end of the bracket.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{holder_triple_valid, VariableExponent};
use crate::measure::{ensure_same_space, GridFunction};
use crate::Complex;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Growth factor of the initial bracket around `‖f‖_∞`.
const BRACKET_FACTOR: f64 = 2.0;
const MAX_EXPANSIONS: usize = 4096;

/// Stopping rule for the bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    /// Bracket width at which to stop, relative to `‖f‖_∞`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for Bisection {
    fn default() -> Self {
        Bisection { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER }
    }
}

impl Bisection {
    pub fn with_tol(tol: f64) -> Self {
        Bisection { tol, ..Self::default() }
    }
}

/// Outcome of a norm computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    pub iterations: usize,
    /// Final bracket width in the units of the input function.
    pub bracket_width: f64,
    /// The infimum sits exactly on the `max |f_j|` constraint of the
    /// `p = ∞` atoms.
    pub saturated_at_infinity_atoms: bool,
}

impl NormResult {
    fn zero() -> Self {
        NormResult { value: 0.0, iterations: 0, bracket_width: 0.0, saturated_at_infinity_atoms: false }
    }
}

/// `ρ(f/λ)` for moduli `a`, exponents `p` and weights `w`.
struct Modular<'a> {
    moduli: Vec<f64>,
    exps: &'a [f64],
    weights: &'a [f64],
}

impl Modular<'_> {
    fn at(&self, lambda: f64) -> f64 {
        let mut total = 0.0;
        for ((&a, &p), &w) in self.moduli.iter().zip(self.exps).zip(self.weights) {
            if a == 0.0 {
                continue;
            }
            let t = a / lambda;
            if p.is_infinite() {
                if t > 1.0 {
                    return f64::INFINITY;
                }
            } else {
                total += w * t.powf(p);
            }
        }
        total
    }
}

/// `ρ_{p(·)}(f) = Σ_j w_j |f_j|^{p_j}`, with `p_j = ∞` atoms contributing
/// `0` if `|f_j| ≤ 1` and `∞` otherwise.
pub fn modular(f: &GridFunction, p: &VariableExponent) -> Result<f64> {
    ensure_same_space(f.space(), p.space(), "modular")?;
    let m = Modular {
        moduli: f.values().iter().map(|v| v.norm()).collect(),
        exps: p.values(),
        weights: f.space().weights(),
    };
    Ok(m.at(1.0))
}

/// Luxemburg norm with the default iteration cap.
pub fn luxemburg_norm(f: &GridFunction, p: &VariableExponent, tol: f64) -> Result<NormResult> {
    luxemburg_norm_with(f, p, &Bisection::with_tol(tol))
}

pub fn luxemburg_norm_with(
    f: &GridFunction,
    p: &VariableExponent,
    cfg: &Bisection,
) -> Result<NormResult> {
    ensure_same_space(f.space(), p.space(), "luxemburg_norm")?;
    let moduli: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
    bisect_norm(moduli, p.values(), f.space().weights(), cfg)
}

/// Norm in `ℓ^{p(·)}` (counting measure) of a finite sequence.
pub fn seq_norm(h: &[Complex], p: &[f64], tol: f64) -> Result<NormResult> {
    seq_norm_with(h, p, &Bisection::with_tol(tol))
}

pub fn seq_norm_with(h: &[Complex], p: &[f64], cfg: &Bisection) -> Result<NormResult> {
    if h.len() != p.len() {
        return Err(Error::InvalidInput(format!(
            "sequence of length {} with {} exponents",
            h.len(),
            p.len()
        )));
    }
    if let Some(k) = p.iter().position(|&e| !(e >= 1.0)) {
        return Err(Error::InvalidInput(format!("exponent {} at index {k} is below 1", p[k])));
    }
    if let Some(k) = h.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::InvalidInput(format!("entry {k} is not finite")));
    }
    let ones = vec![1.0; h.len()];
    bisect_norm(h.iter().map(|v| v.norm()).collect(), p, &ones, cfg)
}

fn bisect_norm(moduli: Vec<f64>, exps: &[f64], weights: &[f64], cfg: &Bisection) -> Result<NormResult> {
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    let scale = moduli.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(NormResult::zero());
    }
    let modular = Modular { moduli: moduli.iter().map(|a| a / scale).collect(), exps, weights };
    let sup_at_infinity = modular
        .moduli
        .iter()
        .zip(exps)
        .filter(|(_, p)| p.is_infinite())
        .map(|(a, _)| *a)
        .fold(0.0, f64::max);

    if sup_at_infinity > 0.0 && modular.at(sup_at_infinity) <= 1.0 {
        return Ok(NormResult {
            value: sup_at_infinity * scale,
            iterations: 0,
            bracket_width: 0.0,
            saturated_at_infinity_atoms: true,
        });
    }

    // Invariant: ρ(lo) > 1 ≥ ρ(hi).
    let mass: f64 = weights.iter().sum();
    let mut lo = (1.0 / BRACKET_FACTOR).max(sup_at_infinity);
    let mut hi = BRACKET_FACTOR * mass.max(1.0);
    let mut expansions = 0;
    let mut rho_lo = modular.at(lo);
    while rho_lo <= 1.0 {
        // Only reachable without binding ∞-atoms; λ → 0 drives ρ → ∞.
        hi = lo;
        lo /= BRACKET_FACTOR;
        rho_lo = modular.at(lo);
        expansions += 1;
        if expansions > MAX_EXPANSIONS || lo == 0.0 {
            return Err(Error::NonConvergence { iterations: expansions, lo: lo * scale, hi: hi * scale });
        }
    }
    let mut rho_hi = modular.at(hi);
    while rho_hi > 1.0 {
        lo = hi;
        rho_lo = rho_hi;
        hi *= BRACKET_FACTOR;
        rho_hi = modular.at(hi);
        expansions += 1;
        if expansions > MAX_EXPANSIONS || !hi.is_finite() {
            return Err(Error::NonConvergence { iterations: expansions, lo: lo * scale, hi: hi * scale });
        }
    }

    let mut iterations = 0;
    while hi - lo > cfg.tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if iterations >= cfg.max_iter {
            return Err(Error::NonConvergence { iterations, lo: lo * scale, hi: hi * scale });
        }
        let rho_mid = modular.at(mid);
        debug_assert!(
            rho_lo >= rho_mid && rho_mid >= rho_hi,
            "modular not monotone: ρ({lo})={rho_lo}, ρ({mid})={rho_mid}, ρ({hi})={rho_hi}"
        );
        if rho_mid <= 1.0 {
            hi = mid;
            rho_hi = rho_mid;
        } else {
            lo = mid;
            rho_lo = rho_mid;
        }
        iterations += 1;
    }
    Ok(NormResult {
        value: hi * scale,
        iterations,
        bracket_width: (hi - lo) * scale,
        saturated_at_infinity_atoms: false,
    })
}

/// Both sides of the factor-2 Hölder inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    /// `‖fg‖_{s(·)}`
    pub lhs: f64,
    /// `2 ‖f‖_{p(·)} ‖g‖_{q(·)}`
    pub rhs: f64,
    pub holds: bool,
}

/// Tolerance used to validate `1/s = 1/p + 1/q` before checking Hölder.
pub const TRIPLE_TOL: f64 = 1e-12;

/// Evaluates `‖fg‖_{s(·)} ≤ 2 ‖f‖_{p(·)} ‖g‖_{q(·)}`.
pub fn holder_check(
    f: &GridFunction,
    g: &GridFunction,
    p: &VariableExponent,
    q: &VariableExponent,
    s: &VariableExponent,
    tol: f64,
) -> Result<HolderReport> {
    if !holder_triple_valid(s, p, q, TRIPLE_TOL)? {
        return Err(Error::Precondition("exponents violate 1/s = 1/p + 1/q".into()));
    }
    let fg = f.mul(g)?;
    let lhs = luxemburg_norm(&fg, s, DEFAULT_TOL)?.value;
    let rhs = 2.0 * luxemburg_norm(f, p, DEFAULT_TOL)?.value * luxemburg_norm(g, q, DEFAULT_TOL)?.value;
    Ok(HolderReport { lhs, rhs, holds: lhs <= rhs + tol })
}
