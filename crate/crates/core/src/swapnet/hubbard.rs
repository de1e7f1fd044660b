use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use serde_json::{json, Map};

use super::schedule::{parity_layer, SwapSchedule, TermService};
use crate::circuit::{Circuit, Gate};
use crate::error::Result;
use crate::hamiltonian::HubbardInstance;
use crate::io::{content_hash, HubbardFile};

const LEFT: usize = 0;
const RIGHT: usize = 1;

fn stagger(m: usize) -> Vec<usize> {
    let mut forward = vec![LEFT];
    for _ in 0..m {
        forward.extend([RIGHT, LEFT]);
    }
    let mut seq = forward.clone();
    seq.extend(forward.iter().rev());
    for _ in 0..m {
        seq.extend([RIGHT, LEFT]);
    }
    seq
}

/// Stage at which each term first sits on adjacent positions, replaying the
/// parity sequence from the identity ordering. `None` if some term never does.
fn first_adjacent(
    n: usize,
    terms: &[(usize, usize)],
    parities: &[usize],
) -> Option<Vec<(usize, usize)>> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    let mut found: Vec<Option<(usize, usize)>> = vec![None; terms.len()];
    let mut remaining = terms.len();
    for stage in 0..=parities.len() {
        for (k, &(p, q)) in terms.iter().enumerate() {
            if found[k].is_none() && pos[p].abs_diff(pos[q]) == 1 {
                found[k] = Some((stage, pos[p].min(pos[q])));
                remaining -= 1;
            }
        }
        if remaining == 0 || stage == parities.len() {
            break;
        }
        for i in parity_layer(n, parities[stage]) {
            order.swap(i, i + 1);
            pos[order[i]] = i;
            pos[order[i + 1]] = i + 1;
        }
    }
    found.into_iter().collect()
}

type Meeting = (usize, (usize, usize));

/// Stagger schedule for the snake-ordered Hubbard chain.
///
/// Runs `U_L (U_R U_L)^m`, its exact reverse, then `(U_R U_L)^m` in the other
/// direction. `m` starts at `ceil(max(rows, cols) / 2) - 1` and grows until
/// every hopping and onsite term has been chain-adjacent at least once. The
/// layers after the last first-meeting are dropped. Each term is serviced
/// once, at its first meeting.
pub fn hubbard_swap_schedule(inst: &HubbardInstance) -> SwapSchedule {
    let n = inst.n_modes();
    let mut terms = inst.onsite_positions();
    terms.extend(inst.hop_positions());

    let mut m = inst.rows().max(inst.cols()).div_ceil(2) - 1;
    let (parities, meetings) = loop {
        let parities = stagger(m);
        if let Some(meetings) = first_adjacent(n, &terms, &parities) {
            break (parities, meetings);
        }
        m += 1;
    };
    let depth = meetings.iter().map(|&(stage, _)| stage).max().unwrap_or(0);
    let layers: Vec<Vec<usize>> = parities[..depth]
        .iter()
        .map(|&par| parity_layer(n, par))
        .collect();

    // stage -> (position, orbital pair)
    let mut by_stage: BTreeMap<usize, Vec<Meeting>> = BTreeMap::new();
    for (&(p, q), &(stage, position)) in terms.iter().zip(&meetings) {
        by_stage.entry(stage).or_default().push((position, (p, q)));
    }
    let mut services = Vec::with_capacity(terms.len());
    for (stage, mut group) in by_stage {
        group.sort_unstable();
        let swaps: &[usize] = layers.get(stage).map_or(&[], Vec::as_slice);
        let (fused, loose): (Vec<_>, Vec<_>) = group
            .into_iter()
            .partition(|(position, _)| swaps.contains(position));
        let mut sublayer_ends: Vec<usize> = Vec::new();
        let mut in_place = Vec::with_capacity(loose.len());
        for (position, orbitals) in loose {
            // first sub-layer whose last gate ends below this one
            let sublayer = match sublayer_ends.iter().position(|&end| end < position) {
                Some(k) => k,
                None => {
                    sublayer_ends.push(0);
                    sublayer_ends.len() - 1
                }
            };
            sublayer_ends[sublayer] = position + 1;
            in_place.push(TermService {
                stage,
                position,
                orbitals,
                fused: false,
                sublayer,
            });
        }
        in_place.sort_by_key(|s| (s.sublayer, s.position));
        services.extend(in_place);
        services.extend(fused.into_iter().map(|(position, orbitals)| TermService {
            stage,
            position,
            orbitals,
            fused: true,
            sublayer: 0,
        }));
    }
    SwapSchedule::replay(n, layers).with_services(services)
}

/// First-order Trotter step for a Hubbard instance.
///
/// Terms are applied at their first meeting. A term whose pair is swapped by
/// the next layer is fused into that swap as a fermionic simulation gate.
/// Otherwise it is applied in place before the layer: pure hopping as
/// `Givens(θ, π/2)`, anything with an interaction part as a fermionic
/// simulation gate followed by a fermionic swap.
pub fn synthesize_hubbard_trotter(inst: &HubbardInstance, t: f64) -> Result<Circuit> {
    if !t.is_finite() {
        return Err(crate::Error::NonFinite("time step".into()));
    }
    let h = inst.to_hamiltonian();
    let sched = hubbard_swap_schedule(inst);
    let angles = |(p, q): (usize, usize)| (h.hopping(p, q) * t, h.pair_interaction(p, q) * t);

    let mut c = Circuit::new(inst.n_modes());
    let depth = sched.layers().len();
    for stage in 0..=depth {
        let services: Vec<&TermService> = sched
            .services()
            .iter()
            .filter(|s| s.stage == stage)
            .collect();
        let sublayers = services
            .iter()
            .filter(|s| !s.fused)
            .map(|s| s.sublayer + 1)
            .max()
            .unwrap_or(0);
        for sub in 0..sublayers {
            let mut gates = Vec::new();
            let mut undo = Vec::new();
            for s in services.iter().filter(|s| !s.fused && s.sublayer == sub) {
                let (theta, phi) = angles(s.orbitals);
                if phi == 0.0 {
                    gates.push(Gate::givens(s.position, theta, FRAC_PI_2));
                } else {
                    gates.push(Gate::fsim(s.position, theta, phi));
                    undo.push(Gate::fswap(s.position));
                }
            }
            c.push_layer(gates)?;
            c.push_nonempty(undo)?;
        }
        if stage < depth {
            let layer = sched.layers()[stage]
                .iter()
                .map(
                    |&i| match services.iter().find(|s| s.fused && s.position == i) {
                        Some(s) => {
                            let (theta, phi) = angles(s.orbitals);
                            Gate::fsim(i, theta, phi)
                        }
                        None => Gate::fswap(i),
                    },
                )
                .collect();
            c.push_layer(layer)?;
        }
    }

    let file = HubbardFile::from(inst);
    let mut meta = Map::new();
    meta.insert("kind".into(), json!("hubbard"));
    meta.insert("order".into(), json!(1));
    meta.insert("t".into(), json!(t));
    meta.insert("total_time".into(), json!(t));
    meta.insert("n_modes".into(), json!(inst.n_modes()));
    meta.insert("swap_layers".into(), json!(depth));
    meta.insert(
        "swap_layer_bound".into(),
        json!(layer_bound(inst.n_modes())),
    );
    meta.insert("serviced_terms".into(), json!(sched.services().len()));
    meta.insert("final_order".into(), json!(sched.final_order()));
    meta.insert(
        "snake_order".into(),
        json!(inst
            .snake_order()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()),
    );
    meta.insert("global_phase".into(), json!(0.0));
    meta.insert("problem_sha256".into(), json!(content_hash(&file)?));
    meta.insert("hubbard".into(), serde_json::to_value(&file)?);
    c.metadata = meta;
    let stats = serde_json::to_value(c.stats())?;
    c.metadata.insert("stats".into(), stats);
    Ok(c)
}

/// `ceil(sqrt(9 n / 2))`, the layer count targeted for square even-sided lattices.
pub(crate) fn layer_bound(n_modes: usize) -> usize {
    (4.5 * n_modes as f64).sqrt().ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::hubbard_2d;
    use std::collections::BTreeSet;

    #[test]
    fn single_site_has_empty_schedule() {
        let inst = hubbard_2d(1, 1, 1.0, 4.0).unwrap();
        let s = hubbard_swap_schedule(&inst);
        assert!(s.layers().is_empty());
        assert_eq!(s.services().len(), 1);
        assert!(!s.services()[0].fused);
        let c = synthesize_hubbard_trotter(&inst, 0.1).unwrap();
        assert_eq!(c.stats().per_kind_counts["fsim"], 1);
    }

    #[test]
    fn every_term_serviced_once_while_adjacent() {
        for rows in 1..=4 {
            for cols in 1..=4 {
                let inst = hubbard_2d(rows, cols, 1.0, 2.0).unwrap();
                let s = hubbard_swap_schedule(&inst);
                let mut expected: BTreeSet<(usize, usize)> =
                    inst.hop_positions().into_iter().collect();
                expected.extend(inst.onsite_positions());
                let got: Vec<(usize, usize)> = s.services().iter().map(|sv| sv.orbitals).collect();
                let unique: BTreeSet<_> = got.iter().copied().collect();
                assert_eq!(got.len(), unique.len(), "{rows}x{cols}");
                assert_eq!(unique, expected, "{rows}x{cols}");
                for sv in s.services() {
                    let order = s.order_at(sv.stage);
                    let pair = (order[sv.position], order[sv.position + 1]);
                    assert_eq!((pair.0.min(pair.1), pair.0.max(pair.1)), sv.orbitals);
                }
            }
        }
    }

    #[test]
    fn two_by_two_term_count() {
        let inst = hubbard_2d(2, 2, 1.0, 2.0).unwrap();
        assert_eq!(hubbard_swap_schedule(&inst).services().len(), 4 + 8);
    }

    #[test]
    fn stagger_shape() {
        assert_eq!(stagger(0), vec![LEFT, LEFT]);
        assert_eq!(
            stagger(1),
            vec![LEFT, RIGHT, LEFT, LEFT, RIGHT, LEFT, RIGHT, LEFT]
        );
        assert_eq!(layer_bound(32), 12);
    }
}
