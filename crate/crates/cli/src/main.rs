use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use speclab_cli::config::{ExperimentConfig, ExperimentKind};
use speclab_cli::experiments::{run, suite};
use speclab_cli::report::{write_atomic, write_run, Report, Summary};
use speclab_cli::{CliError, EXIT_CLAIM_FAILURE, EXIT_PASS};

const DEFAULT_OUT: &str = "speclab-out";

/// Numerical experiments on Laplace eigenfunctions of flat domains.
#[derive(Debug, Parser)]
#[command(name = "speclab", version)]
struct Cli {
    /// Experiment name, or `all` for the full suite.
    #[arg(value_parser = experiment_names())]
    experiment: Option<String>,

    /// JSON configuration for a single experiment.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory (overrides the configuration).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for the data-parallel loops.
    #[arg(long)]
    threads: Option<usize>,

    /// Print the k-th positive zero of J_m as CSV and exit.
    #[arg(long, num_args = 2, value_names = ["M", "K"])]
    dump_bessel: Option<Vec<u32>>,
}

fn experiment_names() -> Vec<&'static str> {
    let mut v: Vec<&'static str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
    v.push("all");
    v
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("speclab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure threads: {e}")))?;
    }
    if let Some(mk) = cli.dump_bessel {
        if cli.experiment.is_some() {
            return Err(CliError::Usage("--dump-bessel cannot be combined with an experiment".into()));
        }
        let z = speclab::special::bessel_zero(mk[0], mk[1])?;
        println!("m,k,location");
        println!("{},{},{}", z.order, z.index, speclab::fmt_sig(z.location));
        return Ok(EXIT_PASS);
    }
    let Some(name) = cli.experiment else {
        return Err(CliError::Usage("missing experiment name (or `all`)".into()));
    };
    if name == "all" {
        if cli.config.is_some() {
            return Err(CliError::Usage("`all` runs built-in configurations and takes no --config".into()));
        }
        return run_all(&cli.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)));
    }
    let kind = ExperimentKind::parse(&name).ok_or_else(|| CliError::Usage(format!("unknown experiment {name}")))?;
    let config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::defaults(kind),
    };
    if config.experiment != kind {
        return Err(CliError::Usage(format!(
            "configuration is for `{}`, not `{name}`",
            config.experiment.name()
        )));
    }
    let out = cli.out.or(config.out.clone()).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let start = Instant::now();
    let output = run(kind.name(), &config)?;
    write_run(&out, &output)?;
    write_timings(&out, &[(output.report.run.clone(), start.elapsed().as_secs_f64())])?;
    print_claims(&output.report);
    Ok(if output.report.passed { EXIT_PASS } else { EXIT_CLAIM_FAILURE })
}

fn run_all(out: &Path) -> Result<i32, CliError> {
    let mut reports = Vec::new();
    let mut timings = Vec::new();
    for (name, config) in suite() {
        let start = Instant::now();
        let output = run(name, &config)?;
        timings.push((name.to_string(), start.elapsed().as_secs_f64()));
        write_run(out, &output)?;
        print_claims(&output.report);
        reports.push(output.report);
    }
    let summary = Summary::new(&reports.iter().collect::<Vec<_>>());
    write_atomic(out, "summary.json", &summary.to_json())?;
    write_timings(out, &timings)?;
    Ok(if summary.passed { EXIT_PASS } else { EXIT_CLAIM_FAILURE })
}

fn print_claims(report: &Report) {
    for c in &report.claims {
        println!("{}", c.line(&report.run));
    }
}

/// Wall-clock times go to their own file so the reports stay reproducible.
fn write_timings(out: &Path, timings: &[(String, f64)]) -> Result<(), CliError> {
    let runs: Vec<serde_json::Value> = timings
        .iter()
        .map(|(run, secs)| serde_json::json!({ "run": run, "seconds": secs }))
        .collect();
    let mut text = serde_json::to_string_pretty(&serde_json::json!({ "runs": runs })).expect("timings serialize");
    text.push('\n');
    write_atomic(out, "timings.json", &text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("speclab").chain(args.iter().copied())).unwrap()
    }

    fn code(args: &[&str]) -> i32 {
        dispatch(parse(args)).unwrap_or_else(|e| e.exit_code())
    }

    #[test]
    fn clap_usage_errors_exit_two() {
        let e = Cli::try_parse_from(["speclab", "nonsense"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = Cli::try_parse_from(["speclab", "weyl", "--bogus"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(code(&[]), 2);
    }

    #[test]
    fn passing_and_failing_claims() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        let out_s = out.to_str().unwrap();
        assert_eq!(code(&["weyl", "--out", out_s]), 0);
        let report = Report::from_json(&fs::read_to_string(out.join("weyl.json")).unwrap()).unwrap();
        assert!(report.passed);
        assert!(out.join("weyl_counts.csv").exists() && out.join("timings.json").exists());

        let cfg = dir.path().join("strict.json");
        fs::write(&cfg, r#"{"experiment": "weyl", "params": {"ratio_max": 0.5}}"#).unwrap();
        assert_eq!(code(&["weyl", "--config", cfg.to_str().unwrap(), "--out", out_s]), 1);
    }

    #[test]
    fn configuration_errors() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        let out_s = out.to_str().unwrap();
        let write = |name: &str, text: &str| {
            let p = dir.path().join(name);
            fs::write(&p, text).unwrap();
            p.to_str().unwrap().to_string()
        };
        let mismatch = write("m.json", r#"{"experiment": "growth"}"#);
        assert_eq!(code(&["weyl", "--config", &mismatch, "--out", out_s]), 2);
        let unknown = write("u.json", r#"{"experiment": "weyl", "colour": "red"}"#);
        assert_eq!(code(&["weyl", "--config", &unknown, "--out", out_s]), 2);
        let empty = write("e.json", r#"{"experiment": "weyl", "params": {"lambdas": []}}"#);
        assert_eq!(code(&["weyl", "--config", &empty, "--out", out_s]), 2);
        let missing = dir.path().join("absent.json");
        assert_eq!(code(&["weyl", "--config", missing.to_str().unwrap()]), 3);
        assert_eq!(code(&["all", "--config", &empty]), 2);
    }

    #[test]
    fn config_out_is_used_and_flag_wins() {
        let dir = tempfile::tempdir().unwrap();
        let from_cfg = dir.path().join("cfg_out");
        let cfg = dir.path().join("c.json");
        fs::write(&cfg, format!(r#"{{"experiment": "weyl", "out": {:?}}}"#, from_cfg.to_str().unwrap())).unwrap();
        assert_eq!(code(&["weyl", "--config", cfg.to_str().unwrap()]), 0);
        assert!(from_cfg.join("weyl.json").exists());
        let flag = dir.path().join("flag_out");
        assert_eq!(code(&["weyl", "--config", cfg.to_str().unwrap(), "--out", flag.to_str().unwrap()]), 0);
        assert!(flag.join("weyl.json").exists());
    }

    #[test]
    fn unwritable_output_exits_three() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        fs::write(&file, "x").unwrap();
        assert_eq!(code(&["weyl", "--out", file.join("sub").to_str().unwrap()]), 3);
    }

    #[test]
    fn dump_bessel() {
        assert_eq!(code(&["--dump-bessel", "0", "1"]), 0);
        assert_eq!(code(&["--dump-bessel", "0", "0"]), 2);
        assert_eq!(code(&["weyl", "--dump-bessel", "0", "1"]), 2);
        let c = parse(&["--dump-bessel", "3", "2"]);
        assert_eq!(c.dump_bessel, Some(vec![3, 2]));
    }
}
