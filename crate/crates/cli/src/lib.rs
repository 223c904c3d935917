//! Command-line front end for `reservoir-topo`.
//!
//! Every subcommand is a plain function taking its parsed arguments and a
//! writer for standard output, so the commands can be driven from tests.

pub mod args;
mod commands;
pub mod manifest;

use std::io::Write;

pub use args::{Cli, Command};
pub use commands::{cmd_betti, cmd_bottleneck, cmd_persist, cmd_report, cmd_simulate};
pub use manifest::RunManifest;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "RESERVOIR_TOPO_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Anything that fails while running; exit code 1.
    #[error(transparent)]
    Runtime(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<reservoir_topo::Error> for CliError {
    fn from(e: reservoir_topo::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Betti(a) => cmd_betti(&a, out),
        Command::Persist(a) => cmd_persist(&a, out),
        Command::Bottleneck(a) => cmd_bottleneck(&a, out),
        Command::Report(a) => cmd_report(&a, out),
    }
}

/// Size the global thread pool from `RESERVOIR_TOPO_THREADS`, if set.
pub fn configure_threads(value: Option<&str>) -> CliResult<()> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Runtime(e.into()))
}

/// Parse `start..end:step` (inclusive) or `a,b,c`.
pub fn parse_alphas(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Usage(format!("invalid --alphas {spec:?}: {why}"));
    let num = |s: &str| -> CliResult<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad(&format!("{s:?} is not a number")))
    };
    let values = if let Some((range, step)) = spec.split_once(':') {
        let (start, end) = range
            .split_once("..")
            .ok_or_else(|| bad("expected start..end:step"))?;
        let (start, end, step) = (num(start)?, num(end)?, num(step)?);
        if step <= 0.0 || end < start {
            return Err(bad("need step > 0 and end >= start"));
        }
        let n = ((end - start) / step + 1e-9).floor() as usize;
        // Round away the binary noise of `start + k * step`.
        (0..=n)
            .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
            .collect()
    } else {
        spec.split(',').map(num).collect::<CliResult<Vec<f64>>>()?
    };
    if values.is_empty() {
        return Err(bad("no thresholds"));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_ranges() {
        let a = parse_alphas("0.1..0.9:0.1").unwrap();
        assert_eq!(a, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]);
        assert_eq!(parse_alphas("0.2, 0.5").unwrap(), vec![0.2, 0.5]);
        assert_eq!(parse_alphas("0..1:0.25").unwrap().len(), 5);
        for bad in ["0.9..0.1:0.1", "0.1..0.9:0", "x", "0.1..0.9", ""] {
            assert_eq!(parse_alphas(bad).unwrap_err().exit_code(), 2, "{bad}");
        }
    }
}
