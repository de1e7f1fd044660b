//! Command-line front end for the `fermiswap` compiler.
//!
//! ```text
//! fermiswap <COMMAND> --in <PATH> [--out <PATH>] [--t <T>] [--order <1|2>]
//!           [--seed <SEED>] [--tol <TOL>] [--threads <N>]
//! ```
//!
//! Exit status is 0 on success, 1 when a verification check fails and 2 on
//! any parse or validation error. Errors are written to stderr as one JSON
//! object.

mod config;
mod verify;

use std::fs;
use std::path::Path;

use fermiswap::io::{
    circuit_from_json, circuit_to_json, from_json_str, to_json_string, HamiltonianFile,
    HubbardFile, MatrixFile,
};
use fermiswap::slaterprep::{slater_prep_circuit, synthesize_basis_rotation, SlaterDeterminant};
use fermiswap::swapnet::{synthesize_hubbard_trotter, synthesize_trotter_step};
use fermiswap::Circuit;
use serde_json::json;

pub use config::{parse_args, Command, RunConfig, SEED_ENV};
pub use verify::{verify, CheckResult};

/// Failure carrying its exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    pub failed_checks: Vec<String>,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        Self {
            code: 2,
            kind: "usage",
            message,
            failed_checks: Vec::new(),
        }
    }

    pub fn invalid_input(message: String) -> Self {
        Self {
            code: 2,
            kind: "invalid_input",
            message,
            failed_checks: Vec::new(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self {
            code: 2,
            kind: "io",
            message: format!("{}: {e}", path.display()),
            failed_checks: Vec::new(),
        }
    }

    fn from_clap(e: clap::Error) -> Self {
        use clap::error::ErrorKind;
        let code = match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
            _ => 2,
        };
        Self {
            code,
            kind: "usage",
            message: e.render().to_string(),
            failed_checks: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut v = json!({ "error": self.kind, "message": self.message });
        if !self.failed_checks.is_empty() {
            v["failed_checks"] = json!(self.failed_checks);
        }
        v.to_string()
    }

    /// Prints the error and returns the exit status. Help and version
    /// requests go to stdout as plain text.
    pub fn report(&self) -> i32 {
        if self.code == 0 {
            print!("{}", self.message);
        } else {
            eprintln!("{}", self.to_json());
        }
        self.code
    }
}

impl From<fermiswap::Error> for CliError {
    fn from(e: fermiswap::Error) -> Self {
        Self::invalid_input(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, format!("{}\n", text.trim_end())).map_err(|e| CliError::io(p, e)),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    from_json_str(text).map_err(|e| CliError::invalid_input(format!("{}: {e}", path.display())))
}

/// Synthesizes the circuit for a synth command.
pub fn synthesize(cfg: &RunConfig) -> Result<Circuit, CliError> {
    let text = read_input(&cfg.input_path)?;
    let path = cfg.input_path.as_path();
    let c = match cfg.command {
        Command::SynthTrotter => {
            let h = parse::<HamiltonianFile>(path, &text)?.to_hamiltonian()?;
            synthesize_trotter_step(&h, cfg.t, cfg.order)?
        }
        Command::SynthHubbard => {
            let inst = parse::<HubbardFile>(path, &text)?.to_instance()?;
            synthesize_hubbard_trotter(&inst, cfg.t)?
        }
        Command::SynthSlater => {
            let file: MatrixFile = parse(path, &text)?;
            let m = file.to_matrix()?;
            match file.eta {
                Some(_) => slater_prep_circuit(&SlaterDeterminant::new(m)?)?,
                None => synthesize_basis_rotation(&m)?,
            }
        }
        Command::Verify | Command::Stats => {
            return Err(CliError::usage(format!(
                "{:?} does not synthesize a circuit",
                cfg.command
            )))
        }
    };
    Ok(c)
}

/// Recomputed circuit statistics, plus the swap-layer count and its target
/// when the circuit carries them.
pub fn stats_report(c: &Circuit) -> Result<serde_json::Value, CliError> {
    let mut v =
        serde_json::to_value(c.stats()).map_err(|e| CliError::invalid_input(e.to_string()))?;
    for key in ["kind", "swap_layers", "swap_layer_bound"] {
        if let Some(x) = c.metadata.get(key) {
            v[key] = x.clone();
        }
    }
    Ok(v)
}

fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = read_input(path)?;
    circuit_from_json(&text)
        .map_err(|e| CliError::invalid_input(format!("{}: {e}", path.display())))
}

/// Executes one command and returns the exit status.
pub fn run(cfg: &RunConfig) -> Result<i32, CliError> {
    cfg.validate()?;
    let out = cfg.output_path.as_deref();
    match cfg.command {
        Command::SynthTrotter | Command::SynthHubbard | Command::SynthSlater => {
            let c = synthesize(cfg)?;
            write_output(out, &circuit_to_json(&c)?)?;
            Ok(0)
        }
        Command::Stats => {
            let c = load_circuit(&cfg.input_path)?;
            write_output(out, &to_json_string(&stats_report(&c)?)?)?;
            Ok(0)
        }
        Command::Verify => {
            let c = load_circuit(&cfg.input_path)?;
            let report = verify(&c, cfg)?;
            write_output(out, &to_json_string(&report)?)?;
            let failed: Vec<String> = report
                .iter()
                .filter(|r| !r.pass)
                .map(|r| r.check.clone())
                .collect();
            if failed.is_empty() {
                Ok(0)
            } else {
                Err(CliError {
                    code: 1,
                    kind: "verification_failed",
                    message: format!("{} of {} checks failed", failed.len(), report.len()),
                    failed_checks: failed,
                })
            }
        }
    }
}
