use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lkdv_cli::commands::{self, CommandOutput, ExitStatus};
use lkdv_cli::config::{OracleConfig, OracleKind, RunConfig};
use lkdv_core::{Error, Result};

/// Unified transform solver for q_t = sigma(x)^3 q_xxx with one interface.
#[derive(Parser)]
#[command(name = "lkdv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sign case, condition counts, decoupling and rank criteria.
    Classify(Common),
    /// Evaluate on the configured grid and write a CSV plus manifest.
    Solve(Common),
    /// Compare against the whole-line or finite-difference oracle.
    Compare(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    oracle: Option<OracleKind>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let text = std::fs::read_to_string(&self.config)
            .map_err(|e| Error::Config { key: "--config".into(), message: e.to_string() })?;
        let mut cfg = RunConfig::from_json(&text)?;
        cfg.tol = self.tol.or(cfg.tol);
        cfg.delta = self.delta.or(cfg.delta);
        cfg.out = self.out.clone().or(cfg.out);
        if let Some(kind) = self.oracle {
            cfg.oracle = Some(match cfg.oracle {
                Some(o) => OracleConfig { kind, ..o },
                None => OracleConfig::of_kind(kind),
            });
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<CommandOutput> {
    match &cli.command {
        Command::Classify(c) => commands::classify(&c.load()?),
        Command::Solve(c) => {
            let cfg = c.load()?;
            let out = cfg.out.clone().ok_or_else(|| Error::Config {
                key: "out".into(),
                message: "solve needs an output path (--out or \"out\")".into(),
            })?;
            commands::solve(&cfg, &out)
        }
        Command::Compare(c) => {
            let cfg = c.load()?;
            let oracle = cfg.oracle.ok_or_else(|| Error::Config {
                key: "oracle".into(),
                message: "compare needs an oracle (--oracle or \"oracle\")".into(),
            })?;
            commands::compare(&cfg, &oracle)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::SingularSystem { .. }) {
                eprintln!("rank-deficient; det \u{2261} 0");
            }
            ExitCode::from(ExitStatus::from(&e).code() as u8)
        }
    }
}
