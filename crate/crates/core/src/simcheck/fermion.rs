//! Fermionic operators on occupation-number basis states.
//!
//! `a_j` carries the sign `(−1)^{number of occupied modes below j}`, matching
//! the Jordan-Wigner strings on lower-indexed qubits.

use nalgebra::DMatrix;

use super::dense::{check_dense, DenseOperator, DENSE_QUBIT_LIMIT};
use crate::error::Result;
use crate::hamiltonian::{FermionHamiltonian, Pauli, PauliHamiltonian};
use crate::C64;

fn sign_below(x: usize, mode: usize) -> f64 {
    if (x & ((1usize << mode) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn occupied(x: usize, mode: usize) -> bool {
    x >> mode & 1 == 1
}

fn annihilate(x: usize, mode: usize) -> Option<(usize, f64)> {
    occupied(x, mode).then(|| (x ^ (1 << mode), sign_below(x, mode)))
}

fn create(x: usize, mode: usize) -> Option<(usize, f64)> {
    (!occupied(x, mode)).then(|| (x | (1 << mode), sign_below(x, mode)))
}

/// `a†_p a_q |x⟩`.
pub(crate) fn hop(x: usize, p: usize, q: usize) -> Option<(usize, f64)> {
    let (y, s1) = annihilate(x, q)?;
    let (z, s2) = create(y, p)?;
    Some((z, s1 * s2))
}

/// Sparse operator as `(column, row, value)` triples.
pub(crate) type Triples = Vec<(usize, usize, C64)>;

/// `O · W` for the sparse `O`.
pub(crate) fn left_apply(ops: &Triples, w: &DMatrix<C64>) -> DMatrix<C64> {
    let dim = w.nrows();
    let mut out = DMatrix::<C64>::zeros(dim, w.ncols());
    for (src, dst) in w
        .as_slice()
        .chunks(dim)
        .zip(out.as_mut_slice().chunks_mut(dim))
    {
        for &(x, y, v) in ops {
            dst[y] += v * src[x];
        }
    }
    out
}

pub(crate) fn triples_to_dense(n: usize, ops: &Triples) -> Result<DenseOperator> {
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for &(x, y, v) in ops {
        m[(y, x)] += v;
    }
    DenseOperator::from_matrix(n, m)
}

/// `exp(−iθ(a†_p a_q + a†_q a_p) − iφ n_p n_q)`.
pub(crate) fn pair_exponential(n: usize, p: usize, q: usize, theta: f64, phi: f64) -> Triples {
    let (s, c) = theta.sin_cos();
    let mut ops = Vec::with_capacity(2 << n);
    for x in 0..1usize << n {
        match (occupied(x, p), occupied(x, q)) {
            (true, true) => ops.push((x, x, C64::from_polar(1.0, -phi))),
            (false, false) => ops.push((x, x, C64::new(1.0, 0.0))),
            (false, true) => {
                let (y, sign) = hop(x, p, q).expect("q occupied, p empty");
                ops.push((x, x, C64::new(c, 0.0)));
                ops.push((x, y, C64::new(0.0, -s * sign)));
            }
            (true, false) => {
                let (y, sign) = hop(x, q, p).expect("p occupied, q empty");
                ops.push((x, x, C64::new(c, 0.0)));
                ops.push((x, y, C64::new(0.0, -s * sign)));
            }
        }
    }
    ops
}

/// `exp(−i Σ_p angle_p n_p)`.
pub(crate) fn number_phases(n: usize, angles: &[f64]) -> Triples {
    (0..1usize << n)
        .map(|x| {
            let total: f64 = (0..n).filter(|&p| occupied(x, p)).map(|p| angles[p]).sum();
            (x, x, C64::from_polar(1.0, -total))
        })
        .collect()
}

/// Fermionic swap `1 + a†_i a_{i+1} + a†_{i+1} a_i − n_i − n_{i+1}`.
pub(crate) fn fermionic_swap(n: usize, i: usize) -> Triples {
    let mut ops = Vec::with_capacity(1 << n);
    for x in 0..1usize << n {
        let diag =
            1.0 - f64::from(u8::from(occupied(x, i))) - f64::from(u8::from(occupied(x, i + 1)));
        if diag != 0.0 {
            ops.push((x, x, C64::new(diag, 0.0)));
        }
        for (p, q) in [(i, i + 1), (i + 1, i)] {
            if let Some((y, sign)) = hop(x, p, q) {
                ops.push((x, y, C64::new(sign, 0.0)));
            }
        }
    }
    ops
}

/// Product of fermionic swaps, layers applied in order; each entry `i` of a
/// layer swaps modes `i` and `i + 1`.
pub fn fermionic_swap_network_operator(n: usize, layers: &[Vec<usize>]) -> Result<DenseOperator> {
    let mut w = DenseOperator::identity(n)?.into_matrix();
    for layer in layers {
        for &i in layer {
            w = left_apply(&fermionic_swap(n, i), &w);
        }
    }
    DenseOperator::from_matrix(n, w)
}

/// `H` assembled from creation and annihilation operators.
pub fn fermion_hamiltonian_dense(h: &FermionHamiltonian) -> Result<DenseOperator> {
    let n = h.n_modes();
    check_dense("fermion_hamiltonian_dense", n, DENSE_QUBIT_LIMIT)?;
    let mut ops = Vec::new();
    for x in 0..1usize << n {
        for p in 0..n {
            for q in 0..n {
                let t = h.one_body()[(p, q)];
                if t != 0.0 {
                    if let Some((y, sign)) = hop(x, p, q) {
                        ops.push((x, y, C64::new(t * sign, 0.0)));
                    }
                }
                let v = h.interaction()[(p, q)];
                if p != q && v != 0.0 && occupied(x, p) && occupied(x, q) {
                    ops.push((x, x, C64::new(v, 0.0)));
                }
            }
            if occupied(x, p) {
                ops.push((x, x, C64::new(h.potential()[p], 0.0)));
            }
        }
    }
    triples_to_dense(n, &ops)
}

/// Dense matrix of a Pauli sum, constant included.
pub fn pauli_hamiltonian_dense(ph: &PauliHamiltonian) -> Result<DenseOperator> {
    let n = ph.n_qubits();
    check_dense("pauli_hamiltonian_dense", n, DENSE_QUBIT_LIMIT)?;
    let i = C64::new(0.0, 1.0);
    let mut ops = Vec::new();
    for x in 0..1usize << n {
        ops.push((x, x, C64::new(ph.constant_offset(), 0.0)));
        for (string, coeff) in ph.terms() {
            let mut y = x;
            let mut amp = C64::new(*coeff, 0.0);
            for (q, label) in string.labels().iter().enumerate() {
                let bit = occupied(x, q);
                match label {
                    Pauli::I => {}
                    Pauli::X => y ^= 1 << q,
                    Pauli::Y => {
                        y ^= 1 << q;
                        amp *= if bit { -i } else { i };
                    }
                    Pauli::Z => {
                        if bit {
                            amp = -amp;
                        }
                    }
                }
            }
            ops.push((x, y, amp));
        }
    }
    triples_to_dense(n, &ops)
}
