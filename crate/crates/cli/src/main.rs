use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use monotone_markov_cli::battery::run_battery;
use monotone_markov_cli::config::Output;
use monotone_markov_cli::output::{render, Header};
use monotone_markov_cli::{run, Analysis, ConfigError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "mmk", version, about = "Checks and exact curves for monotone Markov kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stochastic monotonicity and Condition 1 (plus supermodularity of a custom h).
    Check(Flags),
    /// Exact curve with a shape certificate.
    Curve(Flags),
    /// Monte Carlo estimates compared with the exact curve.
    Simulate(Flags),
    /// Transient variance of the capped Poisson process, which is not monotone.
    Counterexample(Flags),
    /// Every config in a directory; `--config` names the directory.
    Battery(Flags),
}

#[derive(clap::Args)]
struct Flags {
    /// Run config (.toml or .json); a directory for `battery`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Artifact path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Slack for checks and shape certificates (default 1e-10).
    #[arg(long)]
    tol: Option<f64>,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(f) => single(Analysis::Check, f),
        Command::Curve(f) => single(Analysis::Curve, f),
        Command::Simulate(f) => single(Analysis::Simulate, f),
        Command::Counterexample(f) => single(Analysis::Counterexample, f),
        Command::Battery(f) => battery(f),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn pick_format(flag: Option<Format>, cfg: Option<Format>, out: Option<&Path>, default: Format) -> Format {
    flag.or(cfg)
        .or_else(|| match out?.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        })
        .unwrap_or(default)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), ConfigError> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| ConfigError(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(p, text).map_err(|e| ConfigError(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn single(analysis: Analysis, flags: Flags) -> Result<bool, ConfigError> {
    let mut cfg = match &flags.config {
        Some(p) => RunConfig::load(p)?,
        None if analysis == Analysis::Counterexample => {
            RunConfig::parse("", Path::new("default.toml"))?
        }
        None => return Err(ConfigError("--config is required".into())),
    };
    cfg.seed = Some(flags.seed.or(cfg.seed).unwrap_or(0));
    cfg.tol = flags.tol.or(cfg.tol);
    cfg.analysis = Some(analysis);
    let out_path = flags.out.clone().or_else(|| {
        let rel = cfg.output.path.as_ref()?;
        let base = flags.config.as_ref().and_then(|c| c.parent()).unwrap_or(Path::new(""));
        Some(base.join(rel))
    });
    let default = if analysis == Analysis::Check { Format::Json } else { Format::Csv };
    let format = pick_format(flags.format, cfg.output.format, out_path.as_deref(), default);

    let outcome = run(&cfg, analysis)?;

    let mut hashed = cfg.clone();
    hashed.output = Output::default();
    let bytes = serde_json::to_vec(&hashed).expect("config serializes");
    let header = Header::new(&bytes, cfg.seed());
    let text = render(format, &header, &outcome.csv, outcome.json.clone());
    emit(&text, out_path.as_deref())?;

    if out_path.is_some() {
        print!("{}: {}", outcome.model, outcome.summary);
        for r in &outcome.rows {
            println!("{:<28} {}", r.property, r.verdict);
        }
    }
    Ok(outcome.passed())
}

fn battery(flags: Flags) -> Result<bool, ConfigError> {
    let dir = flags
        .config
        .ok_or_else(|| ConfigError("battery needs --config <directory>".into()))?;
    let summary = run_battery(&dir, flags.seed, flags.tol)?;
    let format = pick_format(flags.format, None, flags.out.as_deref(), Format::Csv);
    emit(&summary.render(format, flags.seed.unwrap_or(0)), flags.out.as_deref())?;
    if flags.out.is_some() {
        let failed = summary.rows.iter().filter(|r| r.verdict != monotone_markov_cli::Verdict::Pass).count();
        println!("{} rows, {failed} not passing", summary.rows.len());
    }
    Ok(summary.passed())
}
