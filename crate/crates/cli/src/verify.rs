use std::collections::BTreeSet;
use std::time::Instant;

use fermiswap::io::{HamiltonianFile, HubbardFile, MatrixFile};
use fermiswap::simcheck::{
    apply_circuit_threaded, circuit_to_dense, number_commutator_norm, operator_distance,
    slater_amplitudes, thouless_unitary, trotter_reference, Statevector,
};
use fermiswap::slaterprep::{slater_prep_circuit, synthesize_basis_rotation, SlaterDeterminant};
use fermiswap::swapnet::{
    hubbard_swap_schedule, swap_network_schedule, synthesize_hubbard_trotter,
    synthesize_trotter_step,
};
use fermiswap::{Circuit, GateKind, C64};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::{CliError, RunConfig};

/// Largest register checked against a dense operator.
const DENSE_LIMIT: usize = 10;
/// Largest register for dense particle-number checks.
const NUMBER_DENSE_LIMIT: usize = 8;
/// Largest register simulated as a statevector.
const STATE_LIMIT: usize = 22;
/// Largest register for the Slater amplitude oracle.
const SLATER_LIMIT: usize = 16;

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub n: usize,
    pub metric: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
}

struct Report {
    n: usize,
    results: Vec<CheckResult>,
}

impl Report {
    /// Runs `f`, which returns a metric, and records `metric <= tolerance`.
    fn check<F>(&mut self, name: &str, tolerance: f64, f: F) -> Result<(), CliError>
    where
        F: FnOnce() -> Result<f64, CliError>,
    {
        let start = Instant::now();
        let metric = f()?;
        self.results.push(CheckResult {
            check: name.to_string(),
            n: self.n,
            metric,
            tolerance,
            pass: metric <= tolerance,
            seconds: start.elapsed().as_secs_f64(),
        });
        Ok(())
    }
}

fn field<T: DeserializeOwned>(c: &Circuit, key: &str) -> Result<T, CliError> {
    let v = c
        .metadata
        .get(key)
        .ok_or_else(|| CliError::invalid_input(format!("circuit metadata has no {key:?}")))?;
    serde_json::from_value(v.clone())
        .map_err(|e| CliError::invalid_input(format!("metadata {key:?}: {e}")))
}

/// Largest parameter gap between two circuits of identical shape, or
/// infinity if their gates differ in kind or placement.
fn parameter_gap(a: &Circuit, b: &Circuit) -> f64 {
    if a.n_qubits() != b.n_qubits() || a.layers().len() != b.layers().len() {
        return f64::INFINITY;
    }
    let mut gap: f64 = 0.0;
    for (la, lb) in a.layers().iter().zip(b.layers()) {
        if la.len() != lb.len() {
            return f64::INFINITY;
        }
        for (ga, gb) in la.iter().zip(lb) {
            if ga.qubit != gb.qubit || ga.kind.name() != gb.kind.name() {
                return f64::INFINITY;
            }
            for (pa, pb) in ga.kind.params().iter().zip(gb.kind.params()) {
                gap = gap.max((pa - pb).abs());
            }
        }
    }
    gap
}

fn indicator(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// Random state supported on the half-filling sector.
fn sector_state(n: usize, seed: u64) -> Result<(Statevector, u32), CliError> {
    let eta = (n / 2) as u32;
    let psi = Statevector::random(n, seed);
    let amps: Vec<C64> = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            if i.count_ones() == eta {
                z
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let amps = amps.into_iter().map(|z| z / norm).collect();
    Ok((Statevector::from_amplitudes(n, amps)?, eta))
}

fn generic_checks(c: &Circuit, cfg: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let n = c.n_qubits();
    let tol = cfg.tolerance;
    if c.metadata.contains_key("stats") {
        r.check("stats_consistency", 0.0, || {
            Ok(indicator(
                c.metadata["stats"] == serde_json::to_value(c.stats()).unwrap_or(Value::Null),
            ))
        })?;
    }
    if n <= STATE_LIMIT {
        r.check("norm_preservation", tol, || {
            let psi = Statevector::random(n, cfg.seed);
            let out = apply_circuit_threaded(&psi, c, cfg.threads)?;
            Ok((out.norm() - 1.0).abs())
        })?;
    }
    if n <= NUMBER_DENSE_LIMIT {
        r.check("number_conservation", tol, || {
            Ok(number_commutator_norm(&circuit_to_dense(c)?))
        })?;
    } else if n <= STATE_LIMIT {
        r.check("number_conservation", tol, || {
            let (psi, eta) = sector_state(n, cfg.seed)?;
            let out = apply_circuit_threaded(&psi, c, cfg.threads)?;
            let leak: f64 = out
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(i, _)| i.count_ones() != eta)
                .map(|(_, z)| z.norm_sqr())
                .sum();
            Ok(leak.sqrt())
        })?;
    }
    Ok(())
}

fn trotter_checks(c: &Circuit, cfg: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let h = field::<HamiltonianFile>(c, "hamiltonian")?.to_hamiltonian()?;
    let t: f64 = field(c, "t")?;
    let order: u32 = field(c, "order")?;
    let tol = cfg.tolerance;
    r.check("resynthesis", tol, || {
        Ok(parameter_gap(c, &synthesize_trotter_step(&h, t, order)?))
    })?;
    if h.n_modes() <= DENSE_LIMIT {
        r.check("trotter_reference", tol, || {
            let reference = trotter_reference(&h, &swap_network_schedule(h.n_modes())?, t, order)?;
            Ok(operator_distance(&circuit_to_dense(c)?, &reference, true)?)
        })?;
    }
    Ok(())
}

fn hubbard_checks(c: &Circuit, cfg: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let inst = field::<HubbardFile>(c, "hubbard")?.to_instance()?;
    let t: f64 = field(c, "t")?;
    let tol = cfg.tolerance;
    let sched = hubbard_swap_schedule(&inst);
    r.check("resynthesis", tol, || {
        Ok(parameter_gap(c, &synthesize_hubbard_trotter(&inst, t)?))
    })?;
    r.check("term_coverage", 0.0, || {
        let mut expected: BTreeSet<(usize, usize)> = inst.hop_positions().into_iter().collect();
        expected.extend(inst.onsite_positions());
        let serviced: Vec<(usize, usize)> = sched.services().iter().map(|s| s.orbitals).collect();
        let unique: BTreeSet<(usize, usize)> = serviced.iter().copied().collect();
        let adjacent = sched.services().iter().all(|s| {
            let order = sched.order_at(s.stage);
            let (a, b) = (order[s.position], order[s.position + 1]);
            (a.min(b), a.max(b)) == s.orbitals
        });
        Ok(indicator(
            adjacent && serviced.len() == unique.len() && unique == expected,
        ))
    })?;
    if inst.n_modes() <= DENSE_LIMIT {
        r.check("trotter_reference", tol, || {
            let reference = trotter_reference(&inst.to_hamiltonian(), &sched, t, 1)?;
            Ok(operator_distance(&circuit_to_dense(c)?, &reference, true)?)
        })?;
    }
    Ok(())
}

fn slater_checks(c: &Circuit, cfg: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let d = SlaterDeterminant::new(field::<MatrixFile>(c, "slater")?.to_matrix()?)?;
    let tol = cfg.tolerance;
    r.check("resynthesis", tol, || {
        Ok(parameter_gap(c, &slater_prep_circuit(&d)?))
    })?;
    let bound = d.eta() * (d.n() - d.eta());
    r.check("rotation_bound", bound as f64, || {
        Ok(c.gates()
            .filter(|g| matches!(g.kind, GateKind::Givens { .. }))
            .count() as f64)
    })?;
    if d.n() <= SLATER_LIMIT {
        r.check("slater_fidelity", tol, || {
            let out = apply_circuit_threaded(
                &Statevector::hartree_fock(d.n(), d.eta())?,
                c,
                cfg.threads,
            )?;
            Ok(1.0 - slater_amplitudes(&d)?.inner(&out)?.norm())
        })?;
    }
    Ok(())
}

fn spin_slater_checks(c: &Circuit, cfg: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let up = SlaterDeterminant::new(field::<MatrixFile>(c, "slater_up")?.to_matrix()?)?;
    let down = SlaterDeterminant::new(field::<MatrixFile>(c, "slater_down")?.to_matrix()?)?;
    let n = c.n_qubits();
    if n > SLATER_LIMIT {
        return Ok(());
    }
    r.check("slater_fidelity", cfg.tolerance, || {
        let half = up.n();
        let hf = ((1usize << down.eta()) - 1) << half | ((1usize << up.eta()) - 1);
        let out = apply_circuit_threaded(&Statevector::basis(n, hf)?, c, cfg.threads)?;
        let (a, b) = (slater_amplitudes(&up)?, slater_amplitudes(&down)?);
        let amps: Vec<C64> = b
            .amplitudes()
            .iter()
            .flat_map(|&y| a.amplitudes().iter().map(move |&x| x * y))
            .collect();
        let expected = Statevector::from_amplitudes(n, amps)?;
        Ok(1.0 - expected.inner(&out)?.norm())
    })
}

fn basis_rotation_checks(c: &Circuit, cfg: &RunConfig, r: &mut Report) -> Result<(), CliError> {
    let u = field::<MatrixFile>(c, "unitary")?.to_matrix()?;
    let tol = cfg.tolerance;
    r.check("resynthesis", tol, || {
        Ok(parameter_gap(c, &synthesize_basis_rotation(&u)?))
    })?;
    if u.ncols() <= DENSE_LIMIT {
        r.check("thouless_distance", tol, || {
            Ok(operator_distance(
                &circuit_to_dense(c)?,
                &thouless_unitary(&u)?,
                false,
            )?)
        })?;
    }
    Ok(())
}

/// Runs the checks that apply to `c`, chosen by its `kind` metadata.
///
/// Every circuit gets the stats, norm and particle-number checks its size
/// allows. Trotter, Hubbard, Slater and basis-rotation circuits are also
/// re-synthesized from the problem embedded in their metadata and compared
/// with the matching dense oracle.
pub fn verify(c: &Circuit, cfg: &RunConfig) -> Result<Vec<CheckResult>, CliError> {
    let mut r = Report {
        n: c.n_qubits(),
        results: Vec::new(),
    };
    let kind: String = field(c, "kind")?;
    match kind.as_str() {
        "trotter" => trotter_checks(c, cfg, &mut r)?,
        "hubbard" => hubbard_checks(c, cfg, &mut r)?,
        "slater" => slater_checks(c, cfg, &mut r)?,
        "slater_spin" => spin_slater_checks(c, cfg, &mut r)?,
        "basis_rotation" => basis_rotation_checks(c, cfg, &mut r)?,
        other => {
            return Err(CliError::invalid_input(format!(
                "unknown circuit kind {other:?}"
            )))
        }
    }
    generic_checks(c, cfg, &mut r)?;
    Ok(r.results)
}
