use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wonka_core::harness::{self, report, Check, Config, Experiment, SummaryRow};
use wonka_core::verifier::{VerifyOptions, DEFAULT_WITNESS_CAP};
use wonka_core::Result;

/// Exhaustive checks and benchmarks for golden-ticket auctions.
#[derive(Parser)]
#[command(name = "wonka", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV reports; overrides output.path in the config
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Maximum number of witnesses kept in reports
    #[arg(long, default_value_t = DEFAULT_WITNESS_CAP)]
    witness_cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run the mechanism on one bid profile
    Run {
        #[command(flatten)]
        common: Common,
        /// Bids, e.g. `0.5,0.75,1` or `1,0.5;0.5,0` for multi-parameter agents
        #[arg(long)]
        profile: String,
    },
    /// Exhaustive not-obvious-manipulability check
    VerifyNom(Common),
    /// Golden ticket / wooden spoon report for every agent and bid
    Structure(Common),
    /// Competitive ratio against the optimal revenue
    Ratio(Common),
    /// Frugality ratio against the second-best cost
    Frugality(Common),
    /// Every check listed in the config (all applicable checks when none are listed)
    Sweep(Common),
}

fn setup(common: &Common) -> Result<(Experiment, Option<PathBuf>, VerifyOptions)> {
    if let Some(jobs) = common.jobs {
        // only fails if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    let config = Config::load(&common.config)?;
    let out = common.out.clone().or_else(|| config.output.path.clone());
    let exp = Experiment::from_config(config)?;
    let opts = VerifyOptions { witness_cap: common.witness_cap, ..VerifyOptions::default() };
    Ok((exp, out, opts))
}

fn print_rows(rows: &[SummaryRow]) -> bool {
    for r in rows {
        println!("{} {}: {}", r.check, if r.passed { "pass" } else { "fail" }, r.detail);
    }
    rows.iter().all(|r| r.passed)
}

fn checks(common: &Common, checks: &[Check]) -> Result<bool> {
    let (exp, out, opts) = setup(common)?;
    let rows = harness::run_checks(&exp, checks, opts, out.as_deref())?;
    Ok(print_rows(&rows))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { common, profile } => {
            let (exp, out, _) = setup(&common)?;
            let bids = exp.parse_profile(&profile)?;
            let outcome = exp.run(&bids)?;
            report::write_outcome(io::stdout().lock(), &exp, &bids, &outcome)?;
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                report::write_outcome(std::fs::File::create(dir.join("outcome.csv"))?, &exp, &bids, &outcome)?;
            }
            Ok(true)
        }
        Command::VerifyNom(c) => checks(&c, &[Check::Nom]),
        Command::Structure(c) => checks(&c, &[Check::Structure]),
        Command::Ratio(c) => checks(&c, &[Check::Ratio]),
        Command::Frugality(c) => checks(&c, &[Check::Frugality]),
        Command::Sweep(c) => {
            let config = Config::load(&c.config)?;
            checks(&c, &config.effective_checks())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
