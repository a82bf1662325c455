mod commands;
mod config;
mod error;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::CliError;
use report::Summary;

#[derive(Parser)]
#[command(name = "isocone", version, about = "Isoperimetric profiles of convex bodies of revolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Upper bounds for the isoperimetric profile over a volume ladder.
    Profile(RunArgs),
    /// The spherical-cap foliation beyond its threshold.
    Foliation(RunArgs),
    /// Neumann eigenvalues of spherical caps and the Jacobi kernel.
    Eigen(RunArgs),
    /// All of the above into one output directory.
    VerifyAll(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML config, or a summary.json from an earlier run.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override, `key=value`; may be repeated.
    #[arg(long = "tol-override", value_name = "KEY=VALUE")]
    tol_override: Vec<String>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, args) = match &cli.command {
        Command::Profile(a) => ("profile", a),
        Command::Foliation(a) => ("foliation", a),
        Command::Eigen(a) => ("eigen", a),
        Command::VerifyAll(a) => ("verify-all", a),
    };
    let mut cfg = RunConfig::load(&args.config)?;
    cfg.tolerances.apply_overrides(&args.tol_override)?;
    if let Some(out) = &args.out {
        cfg.output.dir = out.clone();
    }
    let out = cfg.output.dir.clone();

    let mut sections = BTreeMap::new();
    if matches!(cli.command, Command::Profile(_) | Command::VerifyAll(_)) {
        sections.insert("profile", commands::profile(&cfg, &out)?);
    }
    if matches!(cli.command, Command::Foliation(_) | Command::VerifyAll(_)) {
        sections.insert("foliation", commands::foliation(&cfg, &out)?);
    }
    if matches!(cli.command, Command::Eigen(_) | Command::VerifyAll(_)) {
        sections.insert("eigen", commands::eigen(&cfg, &out)?);
    }

    let failures: Vec<String> =
        sections.iter().flat_map(|(name, s)| s.failures().into_iter().map(move |f| format!("{name}/{f}"))).collect();
    let summary = Summary { command: name, passed: failures.is_empty(), sections, tolerances: &cfg.tolerances, config: &cfg };
    summary.write(&out.join("summary.json"))?;
    for (section, s) in &summary.sections {
        for c in &s.checks {
            println!("{section}/{}: {:?}", c.name, c.status);
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failures))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
