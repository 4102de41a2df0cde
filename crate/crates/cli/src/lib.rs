//! Command-line experiments for quantum evolution with a minimal time
//! scale.
//!
//! Each experiment reads a flat set of numeric parameters, writes CSV
//! tables and a `manifest.json` listing the numerical checks it ran.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use config::ExperimentConfig;
pub use config::{Experiment, Params};
pub use error::CliError;
pub use output::{Check, ExperimentOutput, RunManifest, Table};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "MINTIME_QM_THREADS";

/// Worker pool sized by [`THREADS_ENV`] when set.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}

/// Computes an experiment without writing anything.
pub fn compute(config: &ExperimentConfig) -> Result<ExperimentOutput, CliError> {
    experiments::compute(config.experiment, &config.params, config.seed)
}

/// Computes an experiment and writes its tables and manifest to
/// `config.output_dir`.
pub fn run(config: &ExperimentConfig) -> Result<RunManifest, CliError> {
    let out = compute(config)?;
    let mut manifest = RunManifest {
        experiment: config.experiment.name().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        parameters: config.params.as_map().clone(),
        checks: out.checks,
        outputs: Vec::new(),
        passed: false,
    };
    output::write_run(&config.output_dir, &mut manifest, &out.tables)?;
    Ok(manifest)
}

/// Checks of every experiment at its defaults.
pub fn verify(seed: u64) -> Result<Vec<(Experiment, Vec<Check>)>, CliError> {
    Experiment::ALL
        .into_iter()
        .map(|e| {
            let mut c = ExperimentConfig::new(e);
            c.seed = seed;
            Ok((e, compute(&c)?.checks))
        })
        .collect()
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
