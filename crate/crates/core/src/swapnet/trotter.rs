use serde_json::{json, Map};

use super::schedule::swap_network_schedule;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::hamiltonian::FermionHamiltonian;
use crate::io::{content_hash, HamiltonianFile};

/// One Trotter step of `h` on a linear chain.
///
/// Order 1 approximates `exp(-iHt)`: a potential layer, then the swap network
/// with one fermionic simulation gate per orbital pair. The chain ends in the
/// reversed ordering.
///
/// Order 2 approximates `exp(-2iHt)` symmetrically: half the potential, the
/// first `L - 1` network layers at time `t`, the last layer at `2t` with its
/// swaps undone, the first `L - 1` layers mirrored, and the other half of
/// the potential. The ordering is restored.
pub fn synthesize_trotter_step(h: &FermionHamiltonian, t: f64, order: u32) -> Result<Circuit> {
    let n = h.n_modes();
    if !t.is_finite() {
        return Err(Error::NonFinite("time step".into()));
    }
    if !matches!(order, 1 | 2) {
        return Err(Error::UnsupportedOrder(order));
    }
    let sched = swap_network_schedule(n)?;
    let potential: Vec<Gate> = (0..n)
        .map(|p| Gate::phase(p, -h.onsite_energy(p) * t))
        .collect();
    let network_layer = |k: usize, scale: f64| -> Vec<Gate> {
        sched.layers()[k]
            .iter()
            .zip(&sched.orbital_trace()[k])
            .map(|(&i, &(p, q))| {
                Gate::fsim(
                    i,
                    h.hopping(p, q) * t * scale,
                    h.pair_interaction(p, q) * t * scale,
                )
            })
            .collect()
    };

    let depth = sched.layers().len();
    let mut c = Circuit::new(n);
    c.push_layer(potential.clone())?;
    let final_order: Vec<usize> = if order == 1 {
        for k in 0..depth {
            c.push_layer(network_layer(k, 1.0))?;
        }
        sched.final_order().to_vec()
    } else {
        for k in 0..depth - 1 {
            c.push_layer(network_layer(k, 1.0))?;
        }
        c.push_layer(network_layer(depth - 1, 2.0))?;
        c.push_layer(
            sched.layers()[depth - 1]
                .iter()
                .map(|&i| Gate::fswap(i))
                .collect(),
        )?;
        for k in (0..depth - 1).rev() {
            c.push_layer(network_layer(k, 1.0))?;
        }
        c.push_layer(potential)?;
        (0..n).collect()
    };

    let total_time = if order == 1 { t } else { 2.0 * t };
    let file = HamiltonianFile::from(h);
    let mut meta = Map::new();
    meta.insert("kind".into(), json!("trotter"));
    meta.insert("order".into(), json!(order));
    meta.insert("t".into(), json!(t));
    meta.insert("total_time".into(), json!(total_time));
    meta.insert("n_modes".into(), json!(n));
    meta.insert("swap_layers".into(), json!(depth));
    meta.insert("final_order".into(), json!(final_order));
    meta.insert(
        "global_phase".into(),
        json!(-h.identity_component() * total_time),
    );
    meta.insert("problem_sha256".into(), json!(content_hash(&file)?));
    meta.insert("hamiltonian".into(), serde_json::to_value(&file)?);
    c.metadata = meta;
    let stats = serde_json::to_value(c.stats())?;
    c.metadata.insert("stats".into(), stats);
    Ok(c)
}
