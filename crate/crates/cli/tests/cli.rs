use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command as Proc, Output};

use lidskii_cli::report::Results;
use lidskii_cli::{run, RunReport, ScenarioConfig};
use tempfile::TempDir;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn lidskii(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_lidskii")).args(args).output().unwrap()
}

fn stderr_line(out: &Output) -> String {
    let text = String::from_utf8_lossy(&out.stderr).to_string();
    assert_eq!(text.trim_end().lines().count(), 1, "diagnostic is not a single line: {text:?}");
    text
}

fn read_report(path: &Path) -> RunReport {
    toml::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Report with the wall-clock field blanked.
fn timeless(mut report: RunReport) -> RunReport {
    report.provenance.elapsed_ms = 0;
    report
}

fn run_file(tmp: &TempDir, command: &str, config: &Path, extra: &[&str]) -> (Output, PathBuf) {
    let out = tmp.path().join(format!("{command}-{}.toml", extra.join("_").replace(['-', '/'], "")));
    let mut args = vec![command, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    (lidskii(&args), out)
}

fn write(tmp: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = tmp.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn norm_of_three_is_three() {
    let tmp = TempDir::new().unwrap();
    let (out, report) = run_file(&tmp, "norm", &scenario("norm.toml"), &[]);
    assert!(out.status.success());
    match read_report(&report).results {
        Results::Norm(n) => assert!((n.value - 3.0).abs() <= 3e-12),
        other => panic!("{other:?}"),
    }
}

#[test]
fn lidskii_traces_match() {
    let tmp = TempDir::new().unwrap();
    let (out, report) = run_file(&tmp, "lidskii", &scenario("lidskii.toml"), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let Results::Lidskii(l) = read_report(&report).results else { panic!() };
    assert!(l.report.discrepancies.max() <= 1e-8);
    assert!(l.report.grothendieck_regime);
    assert_eq!(l.eigenvalues_total, 129);
    assert_eq!(l.report.eigenvalues.len(), 10);
    assert!((l.report.symbol_trace.re - 1.081_191_288_66).abs() < 1e-9);
}

#[test]
fn summability_predicate_holds_for_two_thirds() {
    let tmp = TempDir::new().unwrap();
    let (out, report) = run_file(&tmp, "summability", &scenario("summability.toml"), &[]);
    assert!(out.status.success());
    let Results::Summability(s) = read_report(&report).results else { panic!() };
    assert!(s.predicate);
    assert!(s.tail_exponent < 0.0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("summable = true"));
}

#[test]
fn every_scenario_runs_and_reports_parse() {
    let tmp = TempDir::new().unwrap();
    for (command, file) in [
        ("norm", "norm.toml"),
        ("modular", "modular.toml"),
        ("holder-check", "holder.toml"),
        ("bap-demo", "bap.toml"),
        ("trace", "trace.toml"),
        ("spectrum", "spectrum.toml"),
        ("lidskii", "lidskii.toml"),
        ("summability", "summability.toml"),
    ] {
        let (out, report) = run_file(&tmp, command, &scenario(file), &[]);
        assert!(out.status.success(), "{command}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty());
        let parsed = read_report(&report);
        assert_eq!(parsed.config.command.unwrap().name(), command);
    }
}

#[test]
fn modular_with_infinite_exponent() {
    let cfg = ScenarioConfig::load(&scenario("modular.toml")).unwrap();
    let Results::Modular { value } = run(&cfg).unwrap().results else { panic!() };
    // p = 1 on [0, ½), ∞ on [½, 1): only the first half contributes.
    assert!((value - 0.125).abs() < 1e-15);
}

#[test]
fn trace_agrees_three_ways() {
    let cfg = ScenarioConfig::load(&scenario("trace.toml")).unwrap();
    let Results::Trace(t) = run(&cfg).unwrap().results else { panic!() };
    assert!((t.rep_trace - t.kernel_trace).norm() < 1e-12);
    assert!((t.rep_trace - t.eigen_sum).norm() < 1e-8);
    assert!(t.oloff.unwrap().holds);
}

#[test]
fn reruns_are_identical() {
    let tmp = TempDir::new().unwrap();
    for (command, file) in [("bap-demo", "bap.toml"), ("lidskii", "lidskii.toml"), ("norm", "norm.toml")] {
        let (a, ra) = run_file(&tmp, command, &scenario(file), &["--seed", "11"]);
        let (b, rb) = run_file(&tmp, command, &scenario(file), &["--seed", "11", "--threads", "1"]);
        assert!(a.status.success() && b.status.success());
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(timeless(read_report(&ra)), timeless(read_report(&rb)));
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let mut cfg = ScenarioConfig::load(&scenario("bap.toml")).unwrap();
    let one = run(&cfg).unwrap();
    cfg.threads = 4;
    let four = run(&cfg).unwrap();
    assert_eq!(one.results, four.results);
}

#[test]
fn seed_changes_bap_estimates_only() {
    let mut cfg = ScenarioConfig::load(&scenario("bap.toml")).unwrap();
    let a = run(&cfg).unwrap();
    cfg.seed = Some(8);
    let b = run(&cfg).unwrap();
    let (Results::BapDemo { steps: sa }, Results::BapDemo { steps: sb }) = (a.results, b.results) else { panic!() };
    assert!(sa.iter().zip(&sb).all(|(x, y)| x.error == y.error && x.cells == y.cells));
    assert!(sa.iter().zip(&sb).any(|(x, y)| x.norm_estimate != y.norm_estimate));
    assert!(sa.iter().chain(&sb).all(|s| s.norm_estimate <= 2.0 + 1e-8));
}

#[test]
fn scenario_configs_round_trip() {
    for file in ["norm.toml", "modular.toml", "holder.toml", "bap.toml", "trace.toml", "spectrum.toml", "lidskii.toml", "summability.toml"] {
        let cfg = ScenarioConfig::load(&scenario(file)).unwrap();
        let back = ScenarioConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg, "{file}");
    }
}

#[test]
fn symbol_and_representation_files() {
    use lidskii_core::torus::{bessel_symbol, FrequencyBox, TorusGrid};
    let tmp = TempDir::new().unwrap();
    let grid = TorusGrid::new(1, 9).unwrap();
    let freq = FrequencyBox::new(1, 4).unwrap();
    let record = bessel_symbol(2.0, &grid, &freq).unwrap().to_record();
    write(&tmp, "sym.toml", &toml::to_string(&record).unwrap());
    let cfg = write(&tmp, "spec.toml", "command = \"spectrum\"\n[symbol]\nkind = \"table\"\npath = \"sym.toml\"\n");
    let (out, report) = run_file(&tmp, "spectrum", &cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let Results::Spectrum(s) = read_report(&report).results else { panic!() };
    assert_eq!(s.size, 9);
    assert!((s.eigenvalues[0].re - 1.0).abs() < 1e-12);

    let inline = ScenarioConfig::load(&scenario("trace.toml")).unwrap();
    let Results::Trace(expected) = run(&inline).unwrap().results else { panic!() };
    let space = inline.space.as_ref().unwrap().build().unwrap();
    let terms = inline
        .terms
        .iter()
        .map(|t| (t.g.function("g", &space).unwrap(), t.h.function("h", &space).unwrap()))
        .collect();
    let rep = lidskii_core::nuclear::NuclearRepresentation::new(terms).unwrap();
    write(&tmp, "rep.toml", &toml::to_string(&rep.to_record()).unwrap());
    let cfg = write(&tmp, "trace.toml", "command = \"trace\"\nrepresentation = \"rep.toml\"\n");
    let (out, report) = run_file(&tmp, "trace", &cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let Results::Trace(t) = read_report(&report).results else { panic!() };
    assert_eq!(t.rep_trace, expected.rep_trace);
}

fn assert_failure(out: &Output, code: i32, needle: &str, report: &Path) {
    assert_eq!(out.status.code(), Some(code), "{}", String::from_utf8_lossy(&out.stderr));
    let line = stderr_line(out);
    assert!(line.contains(needle), "{line:?} lacks {needle:?}");
    assert!(!report.exists(), "partial report left at {}", report.display());
    let dir = report.parent().unwrap();
    if dir.exists() {
        assert!(fs::read_dir(dir).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().ends_with(".tmp")));
    }
}

#[test]
fn usage_failures_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    let cases: [(&str, &str, &str); 8] = [
        ("norm", "command = \"norm\"\n[space]\npoints = 4\n[f]\nkind = \"constant\"\nvalue = 1.0\n", "p: required for norm"),
        ("norm", "command = \"norm\"\nbogus = 1\n", "bogus"),
        ("norm", "command = \"norm\"\n[space\n", "config"),
        ("norm", "tol = -1.0\n", "tol"),
        ("lidskii", "command = \"norm\"\n", "command"),
        ("bap-demo", "[space]\npoints = 8\n[f]\nkind = \"constant\"\nvalue = 1.0\n[p]\nkind = \"constant\"\nvalue = 2.0\n", "seed"),
        ("spectrum", "[symbol]\nkind = \"bessel\"\ntau = 2.0\nradius = 5\npoints = 10\n", "aliasing"),
        ("norm", "[space]\npoints = 4\n[f]\nkind = \"values\"\nvalues = [1.0]\n[p]\nkind = \"constant\"\nvalue = 2.0\n", "f: 1 values for 4 atoms"),
    ];
    for (k, (command, text, needle)) in cases.iter().enumerate() {
        let cfg = write(&tmp, &format!("bad{k}.toml"), text);
        let (out, report) = run_file(&tmp, command, &cfg, &[]);
        assert_failure(&out, 2, needle, &report);
    }
    let missing = tmp.path().join("nope.toml");
    let (out, report) = run_file(&tmp, "norm", &missing, &[]);
    assert_failure(&out, 2, "cannot read config", &report);

    let out = lidskii(&["norm", "--config"]);
    assert_eq!(out.status.code(), Some(2));
    stderr_line(&out);
    let out = lidskii(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    stderr_line(&out);
}

#[test]
fn numerical_failure_exits_with_three() {
    let tmp = TempDir::new().unwrap();
    // Three halvings cannot reach the default tolerance.
    let cfg = write(
        &tmp,
        "tight.toml",
        "max_iter = 3\n[space]\npoints = 4\n[f]\nkind = \"coordinate\"\n[p]\nkind = \"constant\"\nvalue = 3.0\n",
    );
    let (out, report) = run_file(&tmp, "norm", &cfg, &[]);
    assert_failure(&out, 3, "did not converge", &report);
}

#[test]
fn unwritable_output_leaves_nothing() {
    let tmp = TempDir::new().unwrap();
    let report = tmp.path().join("missing-dir").join("r.toml");
    let out = lidskii(&["norm", "--config", scenario("norm.toml").to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_failure(&out, 1, "cannot write", &report);
}

#[test]
fn help_exits_cleanly() {
    let out = lidskii(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["norm", "modular", "holder-check", "bap-demo", "trace", "spectrum", "lidskii", "summability"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
}
