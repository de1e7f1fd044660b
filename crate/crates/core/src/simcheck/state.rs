use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::swapnet::{gate_matrix, LocalMatrix};
use crate::C64;

/// Largest register the statevector simulator accepts.
pub const STATE_QUBIT_LIMIT: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl Statevector {
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > STATE_QUBIT_LIMIT {
            return Err(Error::SizeLimit {
                what: "statevector",
                limit: STATE_QUBIT_LIMIT,
                n: n_qubits,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Modes `0..eta` occupied.
    pub fn hartree_fock(n_qubits: usize, eta: usize) -> Result<Self> {
        if eta > n_qubits {
            return Err(Error::InvalidParticleCount { eta, n: n_qubits });
        }
        Self::basis(n_qubits, (1usize << eta) - 1)
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1usize << n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {n_qubits} qubits",
                amps.len()
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Normalized Gaussian random state.
    pub fn random(n_qubits: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps: Vec<C64> = (0..1usize << n_qubits)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Self {
            n_qubits,
            amps: amps.into_iter().map(|z| z / norm).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "states on {} and {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise gap to `other`.
    pub fn max_abs_diff(&self, other: &Statevector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn apply_gate_chunk(chunk: &mut [C64], gate: &Gate, m: &LocalMatrix) {
    let stride = 1usize << gate.qubit;
    match m {
        LocalMatrix::One(m) => {
            for lo in 0..stride {
                let (i0, i1) = (lo, lo + stride);
                let (a0, a1) = (chunk[i0], chunk[i1]);
                chunk[i0] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
                chunk[i1] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
            }
        }
        LocalMatrix::Two(m) => {
            for lo in 0..stride {
                let idx = [lo, lo + stride, lo + 2 * stride, lo + 3 * stride];
                let v = idx.map(|i| chunk[i]);
                for (r, &i) in idx.iter().enumerate() {
                    chunk[i] =
                        m[(r, 0)] * v[0] + m[(r, 1)] * v[1] + m[(r, 2)] * v[2] + m[(r, 3)] * v[3];
                }
            }
        }
    }
}

/// Applies every gate in order. Each gate updates independent blocks of
/// `2^(q + arity)` amplitudes, so the result does not depend on whether the
/// blocks are processed in parallel.
pub(crate) fn apply_gates(amps: &mut [C64], c: &Circuit, pool: Option<&ThreadPool>) {
    for gate in c.gates() {
        let m = gate_matrix(&gate.kind);
        let block = 1usize << (gate.qubit + gate.kind.arity());
        match pool {
            Some(pool) => pool.install(|| {
                amps.par_chunks_mut(block)
                    .for_each(|chunk| apply_gate_chunk(chunk, gate, &m))
            }),
            None => amps
                .chunks_mut(block)
                .for_each(|chunk| apply_gate_chunk(chunk, gate, &m)),
        }
    }
}

fn check_width(psi: &Statevector, c: &Circuit) -> Result<()> {
    if psi.n_qubits != c.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "state has {} qubits, circuit has {}",
            psi.n_qubits,
            c.n_qubits()
        )));
    }
    Ok(())
}

pub fn apply_circuit(psi: &Statevector, c: &Circuit) -> Result<Statevector> {
    check_width(psi, c)?;
    let mut out = psi.clone();
    apply_gates(&mut out.amps, c, None);
    Ok(out)
}

/// [`apply_circuit`] on a pool of `threads` workers; bit-identical output.
pub fn apply_circuit_threaded(
    psi: &Statevector,
    c: &Circuit,
    threads: usize,
) -> Result<Statevector> {
    check_width(psi, c)?;
    if threads <= 1 {
        return apply_circuit(psi, c);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let mut out = psi.clone();
    apply_gates(&mut out.amps, c, Some(&pool));
    Ok(out)
}
