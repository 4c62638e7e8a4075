use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lidskii_cli::config::one_line;
use lidskii_cli::{execute, CliError, Command, ScenarioConfig};

/// Variable-exponent norms, approximation operators, nuclear traces and
/// toroidal spectral reports.
#[derive(Parser, Debug)]
#[command(name = "lidskii", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Report file (TOML); overrides `output` in the config.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// RNG seed; overrides `seed` in the config.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Worker threads; overrides `threads` in the config.
    #[arg(long, value_name = "K")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Luxemburg norm of f in L^{p(·)}.
    Norm(Common),
    /// Modular ρ_p(f).
    Modular(Common),
    /// ‖fg‖_s ≤ 2‖f‖_p‖g‖_q.
    HolderCheck(Common),
    /// Partition-averaging errors and sampled operator norms along a dyadic chain.
    BapDemo(Common),
    /// Trace of a nuclear representation.
    Trace(Common),
    /// Eigenvalues of a quantized symbol.
    Spectrum(Common),
    /// Eigenvalue sum, matrix trace and symbol trace of a quantized symbol.
    Lidskii(Common),
    /// Bessel-potential summability check.
    Summability(Common),
}

impl Sub {
    fn split(self) -> (Command, Common) {
        match self {
            Sub::Norm(c) => (Command::Norm, c),
            Sub::Modular(c) => (Command::Modular, c),
            Sub::HolderCheck(c) => (Command::HolderCheck, c),
            Sub::BapDemo(c) => (Command::BapDemo, c),
            Sub::Trace(c) => (Command::Trace, c),
            Sub::Spectrum(c) => (Command::Spectrum, c),
            Sub::Lidskii(c) => (Command::Lidskii, c),
            Sub::Summability(c) => (Command::Summability, c),
        }
    }
}

fn configure(command: Command, common: Common) -> Result<ScenarioConfig, CliError> {
    let mut cfg = ScenarioConfig::load(&common.config)?;
    match cfg.command {
        Some(c) if c != command => {
            return Err(CliError::Usage(format!(
                "command: config is for `{}` but `{}` was requested",
                c.name(),
                command.name()
            )))
        }
        _ => cfg.command = Some(command),
    }
    if let Some(out) = common.out {
        cfg.output = Some(out);
    }
    if let Some(seed) = common.seed {
        cfg.seed = Some(seed);
    }
    if let Some(threads) = common.threads {
        cfg.threads = threads;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("lidskii: {}", one_line(first.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    let (command, common) = cli.command.split();
    let outcome = configure(command, common).and_then(|cfg| execute(&cfg));
    match outcome {
        Ok((_, summary)) => {
            for line in summary {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("lidskii: {}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
