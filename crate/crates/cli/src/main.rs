use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mintime_qm::config::{defaults_toml, ExperimentConfig, DEFAULT_SEED};
use mintime_qm::{CliError, Experiment};

#[derive(Parser)]
#[command(
    name = "mintime-qm",
    version,
    about = "Quantum evolution with a minimal time scale"
)]
struct Cli {
    /// Print the default parameters of every experiment as TOML and exit.
    #[arg(long)]
    print_defaults: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its tables and manifest.
    Run {
        experiment: String,
        /// Parameter override, `key=value`; may be repeated.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Flat TOML table of parameters, applied before `--param`.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// List the available experiments.
    List,
    /// Run every experiment at its defaults and print the check table.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    if cli.print_defaults {
        print!("{}", defaults_toml());
        return Ok(0);
    }
    let Some(command) = cli.command else {
        return Err(CliError::Usage("no command given (try --help)".into()));
    };
    match command {
        Command::List => {
            for e in Experiment::ALL {
                println!("{:<18} {}", e.name(), e.description());
            }
            Ok(0)
        }
        Command::Run {
            experiment,
            params,
            config,
            out,
            seed,
        } => {
            let mut c = ExperimentConfig::new(experiment.parse()?);
            if let Some(path) = config {
                c.apply_toml_file(&path)?;
            }
            for p in &params {
                c.apply_override(p)?;
            }
            c.output_dir = out;
            c.seed = seed;
            let manifest = mintime_qm::thread_pool()?.install(|| mintime_qm::run(&c))?;
            for check in &manifest.checks {
                println!(
                    "{:<4} {:<42} {:>12.3e} <= {:.1e}",
                    if check.passed { "ok" } else { "FAIL" },
                    check.name,
                    check.residual,
                    check.tolerance
                );
            }
            println!(
                "wrote {} files to {}",
                manifest.outputs.len() + 1,
                c.output_dir.display()
            );
            Ok(if manifest.passed { 0 } else { 2 })
        }
        Command::Verify { seed } => {
            let results = mintime_qm::thread_pool()?.install(|| mintime_qm::verify(seed))?;
            println!(
                "{:<18} {:<42} {:>12} {:>10}  status",
                "experiment", "check", "residual", "tolerance"
            );
            let mut all = true;
            for (e, checks) in results {
                for c in checks {
                    all &= c.passed;
                    println!(
                        "{:<18} {:<42} {:>12.3e} {:>10.1e}  {}",
                        e.name(),
                        c.name,
                        c.residual,
                        c.tolerance,
                        if c.passed { "PASS" } else { "FAIL" }
                    );
                }
            }
            Ok(if all { 0 } else { 2 })
        }
    }
}
