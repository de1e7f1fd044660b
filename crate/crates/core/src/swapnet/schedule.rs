use crate::error::{Error, Result};

/// One Hamiltonian pair term and the point of the schedule where it is applied.
///
/// `stage` is the configuration index: stage `s` is the ordering before swap
/// layer `s`. A fused term rides on the fermionic swap of layer `stage`; an
/// unfused term is applied without a swap just before that layer, in
/// sub-layer `sublayer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermService {
    pub stage: usize,
    pub position: usize,
    pub orbitals: (usize, usize),
    pub fused: bool,
    pub sublayer: usize,
}

/// Layers of disjoint adjacent transpositions on a chain of `n` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapSchedule {
    n: usize,
    layers: Vec<Vec<usize>>,
    orbital_trace: Vec<Vec<(usize, usize)>>,
    final_order: Vec<usize>,
    services: Vec<TermService>,
}

impl SwapSchedule {
    /// Replays `layers` (each entry `i` swaps positions `i` and `i + 1`)
    /// from the identity ordering.
    pub(crate) fn replay(n: usize, layers: Vec<Vec<usize>>) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        let mut orbital_trace = Vec::with_capacity(layers.len());
        for layer in &layers {
            orbital_trace.push(layer.iter().map(|&i| (order[i], order[i + 1])).collect());
            for &i in layer {
                order.swap(i, i + 1);
            }
        }
        Self {
            n,
            layers,
            orbital_trace,
            final_order: order,
            services: Vec::new(),
        }
    }

    pub(crate) fn with_services(mut self, services: Vec<TermService>) -> Self {
        self.services = services;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Lower positions of the transpositions in each layer.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Orbitals resident at `(i, i + 1)` when each transposition executes.
    pub fn orbital_trace(&self) -> &[Vec<(usize, usize)>] {
        &self.orbital_trace
    }

    /// Orbital at each position after every layer has run.
    pub fn final_order(&self) -> &[usize] {
        &self.final_order
    }

    /// Serviced terms in application order.
    pub fn services(&self) -> &[TermService] {
        &self.services
    }

    pub fn transposition_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Orbital at each position at the given stage.
    pub fn order_at(&self, stage: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        for layer in &self.layers[..stage] {
            for &i in layer {
                order.swap(i, i + 1);
            }
        }
        order
    }
}

pub(crate) fn parity_layer(n: usize, parity: usize) -> Vec<usize> {
    (parity..n.saturating_sub(1)).step_by(2).collect()
}

/// Odd-even transposition network that reverses `n` orbitals.
///
/// Layer `k` swaps the pairs starting at position `k mod 2`. Every pair of
/// orbitals meets exactly once, each meeting is a fused service.
pub fn swap_network_schedule(n: usize) -> Result<SwapSchedule> {
    if n < 2 {
        return Err(Error::ChainTooShort(n));
    }
    let depth = if n == 2 { 1 } else { n };
    let sched = SwapSchedule::replay(n, (0..depth).map(|k| parity_layer(n, k % 2)).collect());
    let services = sched
        .layers
        .iter()
        .zip(&sched.orbital_trace)
        .enumerate()
        .flat_map(|(stage, (layer, trace))| {
            layer
                .iter()
                .zip(trace)
                .map(move |(&position, &(a, b))| TermService {
                    stage,
                    position,
                    orbitals: (a.min(b), a.max(b)),
                    fused: true,
                    sublayer: 0,
                })
        })
        .collect();
    Ok(sched.with_services(services))
}
