//! Layered circuit representation on a linear chain of qubits.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Gate kinds. Two-qubit kinds act on the adjacent positions `(q, q + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    /// Fermionic simulation gate: hopping by `theta`, interaction by `phi`,
    /// then a fermionic swap.
    FSim { theta: f64, phi: f64 },
    /// Number-conserving rotation in the single-excitation subspace.
    Givens { theta: f64, phase: f64 },
    /// `diag(1, e^{i angle})` on one qubit.
    PhaseShift { angle: f64 },
    /// Fermionic swap.
    FSwap,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::FSim { .. } => "fsim",
            GateKind::Givens { .. } => "givens",
            GateKind::PhaseShift { .. } => "phase",
            GateKind::FSwap => "fswap",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::PhaseShift { .. } => 1,
            _ => 2,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::FSim { theta, phi } => vec![theta, phi],
            GateKind::Givens { theta, phase } => vec![theta, phase],
            GateKind::PhaseShift { angle } => vec![angle],
            GateKind::FSwap => Vec::new(),
        }
    }

    pub fn from_parts(name: &str, params: &[f64]) -> Result<Self> {
        let expect = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidCircuit(format!(
                    "gate kind {name:?} takes {k} params, got {}",
                    params.len()
                )))
            }
        };
        match name {
            "fsim" => expect(2).map(|_| GateKind::FSim {
                theta: params[0],
                phi: params[1],
            }),
            "givens" => expect(2).map(|_| GateKind::Givens {
                theta: params[0],
                phase: params[1],
            }),
            "phase" => expect(1).map(|_| GateKind::PhaseShift { angle: params[0] }),
            "fswap" => expect(0).map(|_| GateKind::FSwap),
            other => Err(Error::InvalidCircuit(format!(
                "unknown gate kind {other:?}"
            ))),
        }
    }
}

/// A gate anchored at its lowest chain position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubit: usize,
}

impl Gate {
    pub fn fsim(qubit: usize, theta: f64, phi: f64) -> Self {
        Self {
            kind: GateKind::FSim { theta, phi },
            qubit,
        }
    }

    pub fn givens(qubit: usize, theta: f64, phase: f64) -> Self {
        Self {
            kind: GateKind::Givens { theta, phase },
            qubit,
        }
    }

    pub fn phase(qubit: usize, angle: f64) -> Self {
        Self {
            kind: GateKind::PhaseShift { angle },
            qubit,
        }
    }

    pub fn fswap(qubit: usize) -> Self {
        Self {
            kind: GateKind::FSwap,
            qubit,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        (self.qubit..self.qubit + self.kind.arity()).collect()
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    /// Same gate moved `offset` positions up the chain.
    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            kind: self.kind,
            qubit: self.qubit + offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitStats {
    pub n_qubits: usize,
    pub depth: usize,
    pub two_qubit_depth: usize,
    pub two_qubit_count: usize,
    pub gate_count: usize,
    pub per_kind_counts: BTreeMap<String, usize>,
}

/// Ordered layers of gates with disjoint support, plus free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    layers: Vec<Vec<Gate>>,
    pub metadata: Map<String, Value>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            layers: Vec::new(),
            metadata: Map::new(),
        }
    }

    pub fn from_layers(n_qubits: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for layer in layers {
            c.push_layer(layer)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    /// Appends a layer after checking range, finiteness and disjointness.
    pub fn push_layer(&mut self, layer: Vec<Gate>) -> Result<()> {
        let mut used = vec![false; self.n_qubits];
        for gate in &layer {
            if gate.kind.params().iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidCircuit(format!(
                    "non-finite parameter on {} at qubit {}",
                    gate.kind.name(),
                    gate.qubit
                )));
            }
            for q in gate.qubits() {
                if q >= self.n_qubits {
                    return Err(Error::InvalidCircuit(format!(
                        "qubit {q} out of range for {} qubits",
                        self.n_qubits
                    )));
                }
                if std::mem::replace(&mut used[q], true) {
                    return Err(Error::InvalidCircuit(format!(
                        "qubit {q} used twice in layer {}",
                        self.layers.len()
                    )));
                }
            }
        }
        self.layers.push(layer);
        Ok(())
    }

    /// Appends `layer` unless it is empty.
    pub fn push_nonempty(&mut self, layer: Vec<Gate>) -> Result<()> {
        if layer.is_empty() {
            Ok(())
        } else {
            self.push_layer(layer)
        }
    }

    pub fn stats(&self) -> CircuitStats {
        let mut per_kind_counts = BTreeMap::new();
        let mut two_qubit_count = 0;
        for g in self.gates() {
            *per_kind_counts
                .entry(g.kind.name().to_string())
                .or_insert(0) += 1;
            if g.is_two_qubit() {
                two_qubit_count += 1;
            }
        }
        CircuitStats {
            n_qubits: self.n_qubits,
            depth: self.layers.len(),
            two_qubit_depth: self
                .layers
                .iter()
                .filter(|l| l.iter().any(Gate::is_two_qubit))
                .count(),
            two_qubit_count,
            gate_count: self.gates().count(),
            per_kind_counts,
        }
    }

    /// Layer-wise union of two circuits on the same chain.
    pub fn merge_parallel(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "cannot merge circuits on {} and {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        let depth = self.layers.len().max(other.layers.len());
        let mut merged = Circuit::new(self.n_qubits);
        for k in 0..depth {
            let mut layer = self.layers.get(k).cloned().unwrap_or_default();
            layer.extend(other.layers.get(k).into_iter().flatten().copied());
            merged.push_layer(layer)?;
        }
        Ok(merged)
    }
}

pub fn circuit_stats(c: &Circuit) -> CircuitStats {
    c.stats()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_stats_are_zero() {
        let s = Circuit::new(3).stats();
        assert_eq!((s.depth, s.two_qubit_count, s.gate_count), (0, 0, 0));
        assert!(s.per_kind_counts.is_empty());
    }

    #[test]
    fn overlapping_gates_are_rejected() {
        let mut c = Circuit::new(3);
        let err = c.push_layer(vec![Gate::fswap(0), Gate::phase(1, 0.1)]);
        assert!(matches!(err, Err(Error::InvalidCircuit(_))));
        assert!(c.push_layer(vec![Gate::fswap(2)]).is_err());
        assert!(c.push_layer(vec![Gate::phase(0, f64::NAN)]).is_err());
        c.push_layer(vec![Gate::fswap(0), Gate::phase(2, 0.1)])
            .unwrap();
        assert_eq!(c.stats().per_kind_counts["fswap"], 1);
    }

    #[test]
    fn merge_zips_layers() {
        let a =
            Circuit::from_layers(4, vec![vec![Gate::phase(0, 1.0)], vec![Gate::fswap(0)]]).unwrap();
        let b = Circuit::from_layers(4, vec![vec![Gate::givens(2, 0.3, 0.0)]]).unwrap();
        let m = a.merge_parallel(&b).unwrap();
        assert_eq!(m.layers().len(), 2);
        assert_eq!(m.layers()[0].len(), 2);
        assert!(a
            .merge_parallel(&Circuit::from_layers(4, vec![vec![Gate::fswap(0)]]).unwrap())
            .is_err());
    }

    #[test]
    fn kind_round_trip() {
        for kind in [
            GateKind::FSim {
                theta: 0.1,
                phi: -0.2,
            },
            GateKind::Givens {
                theta: 1.0,
                phase: 2.0,
            },
            GateKind::PhaseShift { angle: 3.0 },
            GateKind::FSwap,
        ] {
            assert_eq!(
                GateKind::from_parts(kind.name(), &kind.params()).unwrap(),
                kind
            );
        }
        assert!(GateKind::from_parts("fsim", &[1.0]).is_err());
        assert!(GateKind::from_parts("cz", &[]).is_err());
    }
}
