use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hartree::harness::{
    load_config, run_equivalence_sweep, run_growth_experiment, run_nsweep, run_verification_suite,
    ExperimentConfig, RunStatus,
};

#[derive(Parser)]
#[command(
    name = "hartree",
    version,
    about = "Periodic Hartree solver and modified-energy audits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve and write growth.csv and status.txt.
    Simulate(Common),
    /// Relative E² increment over delta_meas for each N in N_sweep.
    Nsweep(Common),
    /// |E² − E¹|/E¹ at t = 0 for each N in N_sweep.
    Equivalence(Common),
    /// Run the verification suite and write audit.txt.
    Audit(Common),
}

#[derive(Args)]
struct Common {
    config: PathBuf,
    /// Output directory (overrides output_dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random data (overrides initial.seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Simulate(c) | Command::Nsweep(c) | Command::Equivalence(c) | Command::Audit(c) => {
            c
        }
    };
    if let Some(n) = common.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_CONFIG);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    }
    let mut cfg: ExperimentConfig = match load_config(&common.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(seed) = common.seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }

    let passed = match &cli.command {
        Command::Simulate(_) => run_growth_experiment(&cfg).map(|run| {
            println!("wrote {} ({} rows)", run.csv.display(), run.reports.len());
            match run.status {
                RunStatus::Completed => true,
                RunStatus::BlowUp { t, last_good_t } => {
                    eprintln!("blow-up at t = {t} (last good t = {last_good_t})");
                    false
                }
                RunStatus::Failed(msg) => {
                    eprintln!("run failed: {msg}");
                    false
                }
            }
        }),
        Command::Nsweep(_) => run_nsweep(&cfg).map(|sweep| {
            println!("wrote {}", sweep.csv.display());
            if let Some(slope) = sweep.slope {
                println!("log-log slope: {slope}");
            }
            for (n, msg) in &sweep.failures {
                eprintln!("N = {n} failed: {msg}");
            }
            sweep.failures.is_empty()
        }),
        Command::Equivalence(_) => run_equivalence_sweep(&cfg).map(|sweep| {
            println!("wrote {}", sweep.csv.display());
            for (n, msg) in &sweep.failures {
                eprintln!("N = {n} failed: {msg}");
            }
            sweep.failures.is_empty()
        }),
        Command::Audit(_) => run_verification_suite(&cfg).map(|report| {
            print!("{}", report.render());
            report.overall()
        }),
    };
    match passed {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() {
                EXIT_CONFIG
            } else {
                EXIT_FAIL
            })
        }
    }
}
