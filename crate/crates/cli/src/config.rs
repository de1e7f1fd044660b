use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::CliError;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "FERMISWAP_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Generic Trotter step from a Hamiltonian file
    SynthTrotter,
    /// Slater determinant or basis rotation from a matrix file
    SynthSlater,
    /// 2D Hubbard Trotter step from a lattice file
    SynthHubbard,
    /// Check a circuit against the oracle matching its metadata
    Verify,
    /// Gate counts and depths of a circuit
    Stats,
}

#[derive(Debug, Parser)]
#[command(
    name = "fermiswap",
    version,
    about = "Fermionic swap network and Givens circuit compiler"
)]
struct Args {
    command: Command,
    /// Input file
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Trotter time step
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    t: f64,
    /// Trotter order (1 or 2)
    #[arg(long, default_value_t = 1)]
    order: u32,
    /// Seed for random test states
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Verification tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Worker threads for statevector simulation
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: PathBuf,
    pub output_path: Option<PathBuf>,
    pub t: f64,
    pub order: u32,
    pub seed: u64,
    pub tolerance: f64,
    pub threads: usize,
}

/// Parses the command line, applies the seed override from the environment,
/// and validates the result.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(CliError::from_clap)?;
    let seed = match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| {
            CliError::usage(format!("{SEED_ENV} must be an unsigned integer, got {s:?}"))
        })?,
        Err(_) => args.seed,
    };
    let cfg = RunConfig {
        command: args.command,
        input_path: args.input,
        output_path: args.out,
        t: args.t,
        order: args.order,
        seed,
        tolerance: args.tol,
        threads: args.threads,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.t.is_finite() {
            return Err(CliError::usage(format!(
                "--t must be finite, got {}",
                self.t
            )));
        }
        if !matches!(self.order, 1 | 2) {
            return Err(CliError::usage(format!(
                "unsupported Trotter order {} (expected 1 or 2)",
                self.order
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::usage(format!(
                "--tol must be positive, got {}",
                self.tolerance
            )));
        }
        if self.threads == 0 {
            return Err(CliError::usage("--threads must be at least 1".to_string()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = parse_args([
            "fermiswap",
            "synth-slater",
            "--in",
            "u.json",
            "--out",
            "c.json",
        ])
        .unwrap();
        assert_eq!(cfg.command, Command::SynthSlater);
        assert_eq!(cfg.input_path, PathBuf::from("u.json"));
        assert_eq!(cfg.output_path, Some(PathBuf::from("c.json")));
        assert_eq!(cfg.order, 1);
        assert_eq!(cfg.tolerance, 1e-10);
        assert_eq!(cfg.threads, 1);
    }

    #[test]
    fn tolerance_override() {
        let cfg = parse_args(["fermiswap", "verify", "--tol", "1e-9", "--in", "c.json"]).unwrap();
        assert_eq!(cfg.tolerance, 1e-9);
    }

    #[test]
    fn rejects_bad_values() {
        for argv in [
            vec![
                "fermiswap",
                "synth-trotter",
                "--order",
                "3",
                "--in",
                "h.json",
            ],
            vec!["fermiswap", "verify", "--tol", "0", "--in", "c.json"],
            vec!["fermiswap", "verify", "--tol", "-1e-3", "--in", "c.json"],
            vec!["fermiswap", "verify", "--threads", "0", "--in", "c.json"],
            vec!["fermiswap", "synth-trotter", "--t", "inf", "--in", "h.json"],
            vec!["fermiswap", "synth-trotter", "--bogus", "--in", "h.json"],
            vec!["fermiswap", "transmogrify", "--in", "h.json"],
            vec!["fermiswap", "stats"],
        ] {
            let err = parse_args(argv.clone()).unwrap_err();
            assert_eq!(err.code, 2, "{argv:?}");
        }
    }

    #[test]
    fn negative_time_is_allowed() {
        assert_eq!(
            parse_args([
                "fermiswap",
                "synth-trotter",
                "--t",
                "-0.5",
                "--in",
                "h.json"
            ])
            .unwrap()
            .t,
            -0.5
        );
    }
}
