use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracdyn::harness::{self, ExperimentConfig, RunReport};

#[derive(Parser)]
#[command(name = "fracdyn", version, about = "Fractional IVP experiments: solve, study, pin")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a config and evaluate its checks.
    Solve(RunArgs),
    /// Refinement study: max errors and empirical orders.
    Study(RunArgs),
    /// List the built-in right-hand sides and configs.
    Catalog,
    /// Run a config and write its measurements as pinned expectations.
    Pin(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file, or the name of a builtin config.
    config: String,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    n_steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the CSV and report (file names kept from the config).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl RunArgs {
    fn load(&self) -> fracdyn::Result<ExperimentConfig> {
        harness::load_config(&self.config)?.with_overrides(self.t_end, self.n_steps, self.seed, self.out_dir.as_deref())
    }
}

fn summarize(report: &RunReport) {
    for c in &report.checks {
        println!(
            "CHECK {}: {} measured={} expected={} tol={}",
            c.name, c.status, c.measured, c.expected, c.tol
        );
    }
    println!("OVERALL: {}", if report.passed() { "PASS" } else { "FAIL" });
    println!("csv: {}", report.config.output.csv_path.display());
    println!("report: {}", report.config.output.report_path.display());
}

fn execute(cmd: Command) -> fracdyn::Result<u8> {
    match cmd {
        Command::Catalog => {
            print!("{}", harness::list_catalog());
            println!();
            println!("builtin configs:");
            for (name, _) in harness::BUILTIN {
                println!("    {name}");
            }
            Ok(0)
        }
        Command::Solve(args) => {
            let report = harness::run(&args.load()?)?;
            summarize(&report);
            Ok(report.exit_code() as u8)
        }
        Command::Study(args) => {
            let report = harness::convergence_study(&args.load()?)?;
            for (k, l) in report.levels.iter().enumerate() {
                let order = match l.order {
                    Some(o) => format!("{o:.4}"),
                    None if k == 0 => "-".to_string(),
                    None => "exact".to_string(),
                };
                println!("n_steps={} max_error={:.6e} order={order}", l.n_steps, l.error);
            }
            summarize(&report);
            Ok(report.exit_code() as u8)
        }
        Command::Pin(args) => {
            let (report, path) = harness::pin(&args.load()?)?;
            println!("pinned {} values to {}", report.measurements.len(), path.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_hypothesis_violation() { 2 } else { 1 })
        }
    }
}
