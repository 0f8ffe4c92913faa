use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rpq_core::scalar;
use rpq_core::suite::{self, FamilyChoice, Format, RunConfig, SuiteSelector};
use rpq_core::{CoefficientTable, Error, Result};

#[derive(Parser)]
#[command(name = "rpqw", version, about = "Exact verification of R(p,q)-deformed W-algebra identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the check suites and write a report.
    Verify(VerifyArgs),
    /// Print every check id with the identity it exercises.
    ListChecks,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// forced | conformance | all
    #[arg(long, default_value = "all")]
    suite: String,
    /// pq | q | custom:FILE
    #[arg(long, default_value = "pq")]
    family: String,
    #[arg(long, default_value = "2/3")]
    p: String,
    #[arg(long, default_value = "1/5")]
    q: String,
    #[arg(long, default_value_t = 12)]
    window: i64,
    /// Inclusive mode range, e.g. -4..4
    #[arg(long, default_value = "-4..4", allow_hyphen_values = true)]
    modes: String,
    #[arg(long = "max-rank", default_value_t = 4)]
    max_rank: i64,
    #[arg(long = "max-arity", default_value_t = 6)]
    max_arity: usize,
    /// Number of times K, also the weight cap W
    #[arg(long = "t-order", default_value_t = 6)]
    t_order: usize,
    /// Toy-model points as a:gamma, comma separated
    #[arg(long, default_value = "1:0,1:1,2:0,2:1")]
    toy: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Record per-check milliseconds (reports are then no longer byte-stable)
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json | markdown
    #[arg(long, default_value = "json")]
    format: String,
}

fn parse_family(text: &str) -> Result<FamilyChoice> {
    match text {
        "pq" => Ok(FamilyChoice::TwoParameter),
        "q" => Ok(FamilyChoice::OneParameterQ),
        other => {
            let path = other
                .strip_prefix("custom:")
                .ok_or_else(|| Error::ConfigInvalid(format!("family: expected pq|q|custom:FILE, got {other:?}")))?;
            let body = std::fs::read_to_string(path)
                .map_err(|e| Error::ConfigInvalid(format!("family: cannot read {path}: {e}")))?;
            Ok(FamilyChoice::Custom {
                source: path.to_string(),
                table: CoefficientTable::from_json(&body)?,
            })
        }
    }
}

fn parse_toy(text: &str) -> Result<Vec<suite::ToyPoint>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let bad = || Error::ConfigInvalid(format!("toy: expected a:gamma, got {item:?}"));
            let (a, g) = item.trim().split_once(':').ok_or_else(bad)?;
            Ok(suite::ToyPoint {
                a: a.parse().map_err(|_| bad())?,
                gamma: g.parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

fn config(args: &VerifyArgs) -> Result<(RunConfig, Format)> {
    let parse_scalar = |field: &str, text: &str| {
        scalar::parse(text).map_err(|e| Error::ConfigInvalid(format!("{field}: {e}")))
    };
    let cfg = RunConfig {
        family: parse_family(&args.family)?,
        p: parse_scalar("p", &args.p)?,
        q: parse_scalar("q", &args.q)?,
        window: args.window,
        modes: suite::parse_mode_range(&args.modes)?,
        max_rank: args.max_rank,
        max_arity: args.max_arity,
        t_order: args.t_order,
        toy: parse_toy(&args.toy)?,
        suite: args.suite.parse::<SuiteSelector>()?,
        seed: args.seed,
        timings: args.timings,
    };
    cfg.validate()?;
    Ok((cfg, args.format.parse()?))
}

fn verify(args: &VerifyArgs) -> Result<i32> {
    let (cfg, format) = config(args)?;
    let report = suite::run(&cfg)?;
    let bytes = suite::emit(&report, format);
    match &args.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| Error::ConfigInvalid(format!("out: cannot write {}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| Error::ConfigInvalid(format!("stdout: {e}")))?;
        }
    }
    let s = report.summary;
    eprintln!("pass {} fail {} skipped {}", s.pass, s.fail, s.skipped);
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListChecks => {
            for entry in suite::list_checks() {
                println!("{:<34} {:<12} {}", entry.id, format!("{:?}", entry.suite()).to_lowercase(), entry.anchor);
            }
            ExitCode::SUCCESS
        }
        Command::Verify(args) => match verify(&args) {
            Ok(code) => ExitCode::from(code as u8),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
