//! Scenario configuration, read from and written to TOML.
//!
//! Closed-form functions, exponents and multipliers are limited to the
//! [`Expr`] whitelist and are sampled at atom coordinates.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use lidskii_core::exponents::VariableExponent;
use lidskii_core::measure::{GridFunction, GridMeasureSpace};
use lidskii_core::norms::Bisection;
use lidskii_core::Complex;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Norm,
    Modular,
    HolderCheck,
    BapDemo,
    Trace,
    Spectrum,
    Lidskii,
    Summability,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Modular => "modular",
            Command::HolderCheck => "holder-check",
            Command::BapDemo => "bap-demo",
            Command::Trace => "trace",
            Command::Spectrum => "spectrum",
            Command::Lidskii => "lidskii",
            Command::Summability => "summability",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    /// Midpoints of `[0,1]ⁿ`.
    #[default]
    Unit,
    /// `{j/N}ⁿ` on the torus.
    Torus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    #[serde(default)]
    pub kind: SpaceKind,
    #[serde(default = "one")]
    pub dim: usize,
    /// Points per dimension.
    pub points: usize,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Arc<GridMeasureSpace>, CliError> {
        let space = match self.kind {
            SpaceKind::Unit => GridMeasureSpace::unit_cube(self.dim, self.points),
            SpaceKind::Torus => GridMeasureSpace::torus(self.dim, self.points),
        };
        space.map_err(|e| CliError::Usage(format!("space: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trig {
    Sin,
    Cos,
}

/// Whitelisted closed forms, evaluated at atom coordinates `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Expr {
    /// `value + i·imag`
    Constant {
        value: f64,
        #[serde(default)]
        imag: f64,
    },
    /// `offset + amplitude · sin/cos(2πk x_axis)`
    Trig {
        func: Trig,
        #[serde(default = "one_i64")]
        k: i64,
        #[serde(default = "one_f64")]
        amplitude: f64,
        #[serde(default)]
        offset: f64,
        #[serde(default)]
        axis: usize,
    },
    /// `values[⌊2^depth x₀⌋]`: piecewise constant on dyadic intervals.
    Dyadic { depth: u32, values: Vec<f64> },
    /// `offset + scale · x_axis`
    Coordinate {
        #[serde(default)]
        axis: usize,
        #[serde(default = "one_f64")]
        scale: f64,
        #[serde(default)]
        offset: f64,
    },
    /// One real value per atom.
    Values { values: Vec<f64> },
    /// One `[re, im]` value per atom.
    ComplexValues { values: Vec<[f64; 2]> },
}

impl Expr {
    fn check(&self, path: &str, space: &GridMeasureSpace) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(format!("{path}: {msg}")));
        match self {
            Expr::Trig { axis, .. } | Expr::Coordinate { axis, .. } if *axis >= space.dim() => {
                usage(format!("axis {axis} out of range for a {}-dimensional space", space.dim()))
            }
            Expr::Dyadic { depth, values } if *depth > 20 || values.len() != 1usize << depth => {
                usage(format!("dyadic depth {depth} needs 2^{depth} values, got {}", values.len()))
            }
            Expr::Values { values } if values.len() != space.len() => {
                usage(format!("{} values for {} atoms", values.len(), space.len()))
            }
            Expr::ComplexValues { values } if values.len() != space.len() => {
                usage(format!("{} values for {} atoms", values.len(), space.len()))
            }
            _ => Ok(()),
        }
    }

    fn eval(&self, atom: usize, x: &[f64]) -> Complex {
        match self {
            Expr::Constant { value, imag } => Complex::new(*value, *imag),
            Expr::Trig { func, k, amplitude, offset, axis } => {
                let t = 2.0 * PI * *k as f64 * x[*axis];
                let v = match func {
                    Trig::Sin => t.sin(),
                    Trig::Cos => t.cos(),
                };
                Complex::new(offset + amplitude * v, 0.0)
            }
            Expr::Dyadic { depth, values } => {
                let cells = values.len();
                let k = ((x[0] * (1u64 << depth) as f64).floor().max(0.0) as usize).min(cells - 1);
                Complex::new(values[k], 0.0)
            }
            Expr::Coordinate { axis, scale, offset } => Complex::new(offset + scale * x[*axis], 0.0),
            Expr::Values { values } => Complex::new(values[atom], 0.0),
            Expr::ComplexValues { values } => Complex::new(values[atom][0], values[atom][1]),
        }
    }

    pub fn function(&self, path: &str, space: &Arc<GridMeasureSpace>) -> Result<GridFunction, CliError> {
        self.check(path, space)?;
        let values = space.points().enumerate().map(|(j, x)| self.eval(j, x)).collect();
        GridFunction::new(Arc::clone(space), values).map_err(|e| CliError::Usage(format!("{path}: {e}")))
    }

    pub fn exponent(&self, path: &str, space: &Arc<GridMeasureSpace>) -> Result<VariableExponent, CliError> {
        if matches!(self, Expr::ComplexValues { .. }) || matches!(self, Expr::Constant { imag, .. } if *imag != 0.0) {
            return Err(CliError::Usage(format!("{path}: exponents must be real")));
        }
        self.check(path, space)?;
        let values = space.points().enumerate().map(|(j, x)| self.eval(j, x).re).collect();
        VariableExponent::new(Arc::clone(space), values).map_err(|e| CliError::Usage(format!("{path}: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    /// `α(x)·(1 + 4π²|ξ|²)^{−τ/2}` on the torus grid `N = points`.
    Bessel {
        tau: f64,
        radius: usize,
        points: usize,
        #[serde(default = "one")]
        dim: usize,
        #[serde(default)]
        alpha: Option<Expr>,
    },
    /// Symbol record stored in a separate TOML file.
    Table { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub g: Expr,
    pub h: Expr,
}

/// Everything a run needs. Fields not used by the chosen command are
/// ignored; missing required fields are reported with their key path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Worker threads; 1 keeps runs single-threaded.
    #[serde(default = "one")]
    pub threads: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Bisection iteration cap for norm computations.
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Torus dimension for `summability`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Frequency radius for `summability`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Dyadic depths of the refinement chain for `bap-demo`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<u32>>,
    /// Number of eigenvalues kept in spectral reports (all if absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Representation record file for `trace`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolSpec>,
    /// Inline representation terms for `trace`, on `space`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermSpec>,
}

fn one() -> usize {
    1
}

fn one_i64() -> i64 {
    1
}

fn one_f64() -> f64 {
    1.0
}

fn default_max_iter() -> usize {
    lidskii_core::norms::DEFAULT_MAX_ITER
}

fn default_tol() -> f64 {
    lidskii_core::norms::DEFAULT_TOL
}

impl ScenarioConfig {
    pub fn new(command: Command) -> Self {
        ScenarioConfig {
            command: Some(command),
            seed: None,
            threads: 1,
            tol: default_tol(),
            max_iter: default_max_iter(),
            r: None,
            tau: None,
            n: None,
            radius: None,
            trials: None,
            chain: None,
            top_k: None,
            output: None,
            representation: None,
            space: None,
            f: None,
            g: None,
            p: None,
            q: None,
            s: None,
            symbol: None,
            terms: Vec::new(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {}", one_line(&e.to_string()))))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        // Relative file references are taken relative to the config file.
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(SymbolSpec::Table { path }) = &mut cfg.symbol {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
        if let Some(rep) = &mut cfg.representation {
            if rep.is_relative() {
                *rep = base.join(&*rep);
            }
        }
        Ok(cfg)
    }

    /// Checks fields that do not depend on the command.
    pub fn bisection(&self) -> Bisection {
        Bisection { tol: self.tol, max_iter: self.max_iter }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("tol: must be positive, got {}", self.tol)));
        }
        if self.threads == 0 {
            return Err(CliError::Usage("threads: must be at least 1".into()));
        }
        if let Some(r) = self.r {
            if !(r > 0.0 && r <= 1.0) {
                return Err(CliError::Usage(format!("r: must lie in (0, 1], got {r}")));
            }
        }
        if let Some(tau) = self.tau {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(CliError::Usage(format!("tau: must be positive, got {tau}")));
            }
        }
        Ok(())
    }
}

/// Collapses a multi-line message into one line.
pub fn one_line(msg: &str) -> String {
    msg.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(" | ")
}

pub fn required<'a, T>(value: &'a Option<T>, path: &str, command: Command) -> Result<&'a T, CliError> {
    value
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{path}: required for {}", command.name())))
}
