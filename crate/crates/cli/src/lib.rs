//! Scenario runner behind the `lidskii` binary.
//!
//! A run reads a [`ScenarioConfig`], dispatches to the numerical core and
//! produces a [`RunReport`]. Reports are written atomically: the TOML is
//! rendered in full, written to a sibling temporary file and renamed into
//! place, so a failed run never leaves a partial report behind.

pub mod config;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use lidskii_core::approx::{apply, partition_operator, NormEstimator};
use lidskii_core::exec;
use lidskii_core::exponents::holder_product_exponent;
use lidskii_core::measure::{GridFunction, GridMeasureSpace, Partition};
use lidskii_core::norms::{holder_check, luxemburg_norm_with, modular};
use lidskii_core::nuclear::{oloff_check, rep_kernel, rep_trace, NuclearRepresentation, RepresentationRecord};
use lidskii_core::torus::{
    bessel_partial_sum, bessel_symbol, bessel_tail_exponent, lidskii_report, multiplier_compose, quantize,
    spectrum, summability_predicate, symbol_summability, FrequencyBox, SymbolRecord, ToroidalSymbol, TorusGrid,
};
use lidskii_core::Complex;

pub use config::{Command, ScenarioConfig};
pub use report::{Results, RunReport};

use config::{one_line, required, Expr, SymbolSpec};
use report::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] lidskii_core::Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for usage errors, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) => 1,
        }
    }

    pub fn diagnostic(&self) -> String {
        one_line(&self.to_string())
    }
}

const DEFAULT_TRIALS: usize = 200;
const DEFAULT_CHAIN: [u32; 5] = [0, 1, 2, 3, 4];

/// Runs a scenario; `cfg.threads` sets the worker count.
pub fn run(cfg: &ScenarioConfig) -> Result<RunReport, CliError> {
    cfg.validate()?;
    let command = cfg.command.ok_or_else(|| CliError::Usage("command: not set".into()))?;
    let start = Instant::now();
    let (results, iterations) = exec::with_threads(cfg.threads, || dispatch(command, cfg))?;
    Ok(RunReport {
        results,
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: start.elapsed().as_millis() as u64,
            iterations,
            threads: cfg.threads,
            parallel: exec::parallel_enabled(),
        },
        config: ScenarioConfig { output: None, ..cfg.clone() },
    })
}

fn space_of(cfg: &ScenarioConfig, command: Command) -> Result<Arc<GridMeasureSpace>, CliError> {
    required(&cfg.space, "space", command)?.build()
}

fn expr<'a>(value: &'a Option<Expr>, path: &str, command: Command) -> Result<&'a Expr, CliError> {
    required(value, path, command)
}

fn dispatch(command: Command, cfg: &ScenarioConfig) -> Result<(Results, Option<usize>), CliError> {
    match command {
        Command::Norm => {
            let space = space_of(cfg, command)?;
            let f = expr(&cfg.f, "f", command)?.function("f", &space)?;
            let p = expr(&cfg.p, "p", command)?.exponent("p", &space)?;
            let n = luxemburg_norm_with(&f, &p, &cfg.bisection())?;
            Ok((Results::Norm(n), Some(n.iterations)))
        }
        Command::Modular => {
            let space = space_of(cfg, command)?;
            let f = expr(&cfg.f, "f", command)?.function("f", &space)?;
            let p = expr(&cfg.p, "p", command)?.exponent("p", &space)?;
            Ok((Results::Modular { value: modular(&f, &p)? }, None))
        }
        Command::HolderCheck => {
            let space = space_of(cfg, command)?;
            let f = expr(&cfg.f, "f", command)?.function("f", &space)?;
            let g = expr(&cfg.g, "g", command)?.function("g", &space)?;
            let p = expr(&cfg.p, "p", command)?.exponent("p", &space)?;
            let q = expr(&cfg.q, "q", command)?.exponent("q", &space)?;
            let (s, s_derived) = match &cfg.s {
                Some(e) => (e.exponent("s", &space)?, false),
                None => (
                    holder_product_exponent(&p, &q).map_err(|e| CliError::Usage(format!("s: {e}")))?,
                    true,
                ),
            };
            let check = holder_check(&f, &g, &p, &q, &s, cfg.tol).map_err(|e| match e {
                lidskii_core::Error::Precondition(m) => CliError::Usage(format!("s: {m}")),
                other => other.into(),
            })?;
            Ok((Results::HolderCheck(HolderOutcome { check, s_derived }), None))
        }
        Command::BapDemo => bap_demo(cfg, command),
        Command::Trace => trace(cfg, command),
        Command::Spectrum => {
            let sigma = symbol(required(&cfg.symbol, "symbol", command)?)?;
            let m = quantize(&sigma);
            let eigenvalues = spectrum(&m)?;
            let eigen_sum = eigenvalues.iter().fold(Complex::new(0.0, 0.0), |acc, &v| acc + v);
            let matrix_trace = (0..m.nrows()).fold(Complex::new(0.0, 0.0), |acc, i| acc + m[(i, i)]);
            let keep = cfg.top_k.unwrap_or(eigenvalues.len());
            Ok((
                Results::Spectrum(SpectrumOutcome {
                    size: eigenvalues.len(),
                    eigen_sum,
                    matrix_trace,
                    eigenvalues: eigenvalues.into_iter().take(keep).collect(),
                }),
                None,
            ))
        }
        Command::Lidskii => {
            let sigma = symbol(required(&cfg.symbol, "symbol", command)?)?;
            let r = *required(&cfg.r, "r", command)?;
            let mut report = lidskii_report(&sigma, r)?;
            let eigenvalues_total = report.eigenvalues.len();
            report.eigenvalues.truncate(cfg.top_k.unwrap_or(eigenvalues_total));
            Ok((Results::Lidskii(LidskiiOutcome { eigenvalues_total, report }), None))
        }
        Command::Summability => summability(cfg, command),
    }
}

fn bap_demo(cfg: &ScenarioConfig, command: Command) -> Result<(Results, Option<usize>), CliError> {
    let seed = *required(&cfg.seed, "seed", command)?;
    let space = space_of(cfg, command)?;
    let f = expr(&cfg.f, "f", command)?.function("f", &space)?;
    let p = expr(&cfg.p, "p", command)?.exponent("p", &space)?;
    let depths = cfg.chain.clone().unwrap_or_else(|| DEFAULT_CHAIN.to_vec());
    if depths.is_empty() || depths.windows(2).any(|w| w[0] > w[1]) || depths.iter().any(|&d| d > 20) {
        return Err(CliError::Usage("chain: needs nondecreasing dyadic depths ≤ 20".into()));
    }
    let trials = cfg.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(CliError::Usage("trials: must be positive".into()));
    }
    let mut steps = Vec::with_capacity(depths.len());
    for (k, &depth) in depths.iter().enumerate() {
        let part = Partition::dyadic(Arc::clone(&space), depth)?;
        let op = partition_operator(&part);
        let approx = apply(&op, &f)?;
        let error = luxemburg_norm_with(&f.sub(&approx)?, &p, &cfg.bisection())?.value;
        let mut estimator = NormEstimator::new(trials, seed.wrapping_add(k as u64));
        estimator.tol = cfg.tol;
        let norm_estimate = estimator.estimate(&op, &p)?.lower_bound;
        steps.push(BapRow { partition_index: k, cells: part.len(), error, norm_estimate });
    }
    Ok((Results::BapDemo { steps }, None))
}

fn trace(cfg: &ScenarioConfig, command: Command) -> Result<(Results, Option<usize>), CliError> {
    let rep = match (&cfg.representation, cfg.terms.is_empty()) {
        (Some(path), true) => {
            let record: RepresentationRecord = read_toml(path, "representation")?;
            NuclearRepresentation::from_record(&record)
                .map_err(|e| CliError::Usage(format!("representation: {e}")))?
        }
        (None, false) => {
            let space = space_of(cfg, command)?;
            let terms = cfg
                .terms
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    Ok((t.g.function(&format!("terms[{k}].g"), &space)?, t.h.function(&format!("terms[{k}].h"), &space)?))
                })
                .collect::<Result<Vec<(GridFunction, GridFunction)>, CliError>>()?;
            NuclearRepresentation::new(terms)?
        }
        (Some(_), false) => return Err(CliError::Usage("terms: give either terms or representation, not both".into())),
        (None, true) => return Err(CliError::Usage("terms: required for trace (or set representation)".into())),
    };
    let kernel = rep_kernel(&rep);
    let eigen_sum = spectrum(&kernel.operator_matrix())?.iter().fold(Complex::new(0.0, 0.0), |acc, &v| acc + v);
    let oloff = match cfg.r {
        Some(r) => {
            let o = oloff_check(&rep, r)?;
            Some(OloffOutcome { r, schatten: o.schatten, rep_bound: o.rep_bound.powf(1.0 / r), holds: o.holds })
        }
        None => None,
    };
    Ok((
        Results::Trace(TraceOutcome {
            terms: rep.len(),
            rep_trace: rep_trace(&rep)?,
            kernel_trace: kernel.diagonal_trace()?,
            eigen_sum,
            oloff,
        }),
        None,
    ))
}

fn summability(cfg: &ScenarioConfig, command: Command) -> Result<(Results, Option<usize>), CliError> {
    let r = *required(&cfg.r, "r", command)?;
    let tau = *required(&cfg.tau, "tau", command)?;
    let n = cfg.n.unwrap_or(1);
    if n == 0 || n > 3 {
        return Err(CliError::Usage(format!("n: supported dimensions are 1 to 3, got {n}")));
    }
    let radius = cfg.radius.unwrap_or(match n {
        1 => 1000,
        2 => 100,
        _ => 20,
    });
    if radius == 0 {
        return Err(CliError::Usage("radius: must be positive".into()));
    }
    let symbol_sum = match &cfg.symbol {
        Some(spec) => {
            let sigma = symbol(spec)?;
            let space = sigma.grid().space();
            let p = match &cfg.p {
                Some(e) => e.exponent("p", space)?,
                None => lidskii_core::exponents::VariableExponent::constant(Arc::clone(space), 2.0)?,
            };
            Some(symbol_summability(&sigma, r, &p.conjugate())?)
        }
        None => None,
    };
    Ok((
        Results::Summability(SummabilityOutcome {
            r,
            tau,
            n,
            predicate: summability_predicate(r, tau, n),
            radius,
            partial_sum: bessel_partial_sum(tau, r, n, radius)?,
            doubled_partial_sum: bessel_partial_sum(tau, r, n, 2 * radius)?,
            tail_exponent: bessel_tail_exponent(tau, r, n, radius)?,
            symbol: symbol_sum,
        }),
        None,
    ))
}

fn symbol(spec: &SymbolSpec) -> Result<ToroidalSymbol, CliError> {
    match spec {
        SymbolSpec::Bessel { tau, radius, points, dim, alpha } => {
            let usage = |e: lidskii_core::Error| CliError::Usage(format!("symbol: {e}"));
            let grid = TorusGrid::new(*dim, *points).map_err(usage)?;
            let freq = FrequencyBox::new(*dim, *radius).map_err(usage)?;
            let base = bessel_symbol(*tau, &grid, &freq).map_err(usage)?;
            match alpha {
                Some(a) => {
                    let alpha = a.function("symbol.alpha", grid.space())?;
                    Ok(multiplier_compose(&alpha, &base).map_err(usage)?)
                }
                None => Ok(base),
            }
        }
        SymbolSpec::Table { path } => {
            let record: SymbolRecord = read_toml(path, "symbol.path")?;
            ToroidalSymbol::from_record(&record).map_err(|e| CliError::Usage(format!("symbol.path: {e}")))
        }
    }
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path, key: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{key}: cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{key}: {}: {}", path.display(), one_line(&e.to_string()))))
}

/// Renders a report as TOML.
pub fn render(report: &RunReport) -> Result<String, CliError> {
    toml::to_string(report).map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))
}

/// Writes `contents` to `path` via a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::Usage(format!("--out: not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::Io(format!("cannot write {}: {e}", path.display()))
    })
}

/// Runs a scenario and, if an output path is set, writes the report.
/// Returns the report and its summary lines.
pub fn execute(cfg: &ScenarioConfig) -> Result<(RunReport, Vec<String>), CliError> {
    let report = run(cfg)?;
    if let Some(out) = &cfg.output {
        write_atomic(out, &render(&report)?)?;
    }
    let summary = report.results.summary();
    Ok((report, summary))
}
