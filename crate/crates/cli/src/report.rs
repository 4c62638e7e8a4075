//! Report records written by `run`.

use lidskii_core::norms::{HolderReport, NormResult};
use lidskii_core::torus::{SpectralReport, Summability};
use lidskii_core::Complex;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub results: Results,
    pub provenance: Provenance,
    pub config: ScenarioConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    /// Wall time of the run; the only field that differs between reruns.
    pub elapsed_ms: u64,
    /// Total bisection iterations, where the command tracks them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    pub threads: usize,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Results {
    Norm(NormResult),
    Modular { value: f64 },
    HolderCheck(HolderOutcome),
    BapDemo { steps: Vec<BapRow> },
    Trace(TraceOutcome),
    Spectrum(SpectrumOutcome),
    Lidskii(LidskiiOutcome),
    Summability(SummabilityOutcome),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderOutcome {
    #[serde(flatten)]
    pub check: HolderReport,
    /// Whether `s` was derived from `1/s = 1/p + 1/q`.
    pub s_derived: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BapRow {
    pub partition_index: usize,
    pub cells: usize,
    pub error: f64,
    /// Sampled lower bound on `‖L_𝔓‖`.
    pub norm_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceOutcome {
    pub terms: usize,
    pub rep_trace: Complex,
    pub kernel_trace: Complex,
    pub eigen_sum: Complex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oloff: Option<OloffOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OloffOutcome {
    pub r: f64,
    pub schatten: f64,
    /// `(Σ ‖gₙ‖₂^r ‖hₙ‖₂^r)^{1/r}`
    pub rep_bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutcome {
    pub size: usize,
    pub eigen_sum: Complex,
    pub matrix_trace: Complex,
    /// Leading eigenvalues, descending modulus.
    pub eigenvalues: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LidskiiOutcome {
    pub eigenvalues_total: usize,
    /// Eigenvalue list truncated to `top_k`; sums use all of them.
    pub report: SpectralReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummabilityOutcome {
    pub r: f64,
    pub tau: f64,
    pub n: usize,
    /// `rτ > n`
    pub predicate: bool,
    pub radius: usize,
    /// `Σ_{|ξ|_∞ ≤ Ξ} (1 + 4π²|ξ|²)^{−rτ/2}`
    pub partial_sum: f64,
    /// Same sum at `2Ξ`.
    pub doubled_partial_sum: f64,
    /// Estimated shell decay exponent, tends to `n − rτ`.
    pub tail_exponent: f64,
    /// `Σ_ξ ‖σ(·,ξ)‖_{p'}^r` for the configured symbol, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<Summability>,
}

fn fmt_c(z: Complex) -> String {
    if z.im == 0.0 {
        format!("{:.12}", z.re)
    } else {
        format!("{:.12}{:+.3e}i", z.re, z.im)
    }
}

impl Results {
    /// One human-readable line per result.
    pub fn summary(&self) -> Vec<String> {
        match self {
            Results::Norm(n) => vec![format!(
                "norm = {:.12} ({} iterations, bracket width {:.1e})",
                n.value, n.iterations, n.bracket_width
            )],
            Results::Modular { value } => vec![format!("modular = {value:.12}")],
            Results::HolderCheck(h) => vec![format!(
                "holder: ‖fg‖_s = {:.12} ≤ 2‖f‖_p‖g‖_q = {:.12}: {}",
                h.check.lhs,
                h.check.rhs,
                if h.check.holds { "holds" } else { "VIOLATED" }
            )],
            Results::BapDemo { steps } => steps
                .iter()
                .map(|s| {
                    format!(
                        "partition {}: {} cells, error {:.6e}, norm estimate {:.6}",
                        s.partition_index, s.cells, s.error, s.norm_estimate
                    )
                })
                .collect(),
            Results::Trace(t) => {
                let mut lines = vec![format!(
                    "trace = {} (kernel diagonal {}, eigenvalue sum {}; {} terms)",
                    fmt_c(t.rep_trace),
                    fmt_c(t.kernel_trace),
                    fmt_c(t.eigen_sum),
                    t.terms
                )];
                if let Some(o) = &t.oloff {
                    lines.push(format!(
                        "schatten_{} = {:.12} ≤ {:.12}: {}",
                        o.r,
                        o.schatten,
                        o.rep_bound,
                        if o.holds { "holds" } else { "VIOLATED" }
                    ));
                }
                lines
            }
            Results::Spectrum(s) => vec![format!(
                "{} eigenvalues, sum {}, matrix trace {}, leading {}",
                s.size,
                fmt_c(s.eigen_sum),
                fmt_c(s.matrix_trace),
                s.eigenvalues.first().map(|z| fmt_c(*z)).unwrap_or_else(|| "-".into())
            )],
            Results::Lidskii(l) => {
                let r = &l.report;
                let mut lines = vec![
                    format!(
                        "eigen_sum = {}, matrix_trace = {}, symbol_trace = {}",
                        fmt_c(r.eigen_sum),
                        fmt_c(r.matrix_trace),
                        fmt_c(r.symbol_trace)
                    ),
                    format!(
                        "max discrepancy {:.2e}; r = {}, grothendieck regime: {}",
                        r.discrepancies.max(),
                        r.r,
                        r.grothendieck_regime
                    ),
                ];
                if let Some(w) = &r.warning {
                    lines.push(format!("warning: {w}"));
                }
                lines
            }
            Results::Summability(s) => {
                let mut lines = vec![format!(
                    "r·τ = {} vs n = {}: summable = {}; partial sums {:.10} (Ξ={}) and {:.10} (Ξ={}), tail exponent {:.3}",
                    s.r * s.tau,
                    s.n,
                    s.predicate,
                    s.partial_sum,
                    s.radius,
                    s.doubled_partial_sum,
                    2 * s.radius,
                    s.tail_exponent
                )];
                if let Some(sym) = &s.symbol {
                    lines.push(format!("symbol sum {:.12}, outer shell {:.3e}", sym.sum, sym.last_shell));
                }
                lines
            }
        }
    }
}
