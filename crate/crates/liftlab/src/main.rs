use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use liftlab::presets::PRESETS;
use liftlab::{run_scenario, CheckId, RunOptions, Scenario};

#[derive(Parser)]
#[command(
    name = "liftlab",
    version,
    about = "Verify lifts to the (0,q)-tensor bundle on concrete scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file
    Run {
        scenario: PathBuf,
        /// Also write the JSON report here
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
        /// Sampling seed (beats the scenario and LIFTLAB_SEED)
        #[arg(long)]
        seed: Option<u64>,
        /// Number of sample points
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        points: Option<u64>,
        /// Pass tolerance for every check
        #[arg(long)]
        tol: Option<f64>,
    },
    /// List built-in presets
    Presets,
    /// Print the formula behind a check
    Explain {
        #[arg(value_parser = parse_check)]
        check: CheckId,
    },
}

fn parse_check(s: &str) -> Result<CheckId, String> {
    s.parse()
}

const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Presets => {
            for p in &PRESETS {
                let fields: Vec<&str> = p.fields.iter().map(|f| f.name()).collect();
                println!("{:<20} [{}]  {}", p.name, fields.join(", "), p.summary);
            }
            ExitCode::SUCCESS
        }
        Command::Explain { check } => {
            println!("{}", liftlab::explain::explain(check));
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            json,
            seed,
            points,
            tol,
        } => run(scenario, json, seed, points, tol),
    }
}

fn run(
    path: PathBuf,
    json: Option<PathBuf>,
    seed: Option<u64>,
    points: Option<u64>,
    tol: Option<f64>,
) -> ExitCode {
    let env_seed = match std::env::var("LIFTLAB_SEED") {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(s) => Some(s),
            Err(_) => {
                eprintln!("error: LIFTLAB_SEED={v:?} is not an unsigned integer");
                return ExitCode::from(USAGE);
            }
        },
        Err(_) => None,
    };
    let scenario = match Scenario::from_path(&path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(USAGE);
        }
    };
    let options = RunOptions {
        seed,
        points: points.map(|p| p as usize),
        tol,
        env_seed,
    };
    let report = match run_scenario(&scenario, &options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    };
    print!("{}", report.to_text());
    if let Some(out) = json {
        if let Err(e) = std::fs::write(&out, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return ExitCode::from(USAGE);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
