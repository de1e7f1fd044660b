use std::collections::BTreeMap;
use std::fmt;

use super::FermionHamiltonian;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// One Pauli label per qubit, qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    pub fn from_sparse(n: usize, ops: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(q, p) in ops {
            s.0[q] = p;
        }
        s
    }

    pub fn labels(&self) -> &[Pauli] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    /// Qubits carrying a non-identity label.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&q| self.0[q] != Pauli::I)
            .collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Real linear combination of Pauli strings plus a constant.
///
/// Terms are canonical: sorted, no duplicates, no identity string, no zero
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliHamiltonian {
    n_qubits: usize,
    terms: Vec<(PauliString, f64)>,
    constant_offset: f64,
}

impl PauliHamiltonian {
    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (PauliString, f64)>,
        constant_offset: f64,
    ) -> Self {
        let mut acc = Accumulator::new(n_qubits);
        acc.constant = constant_offset;
        for (s, c) in terms {
            acc.add(s, c);
        }
        acc.finish()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    pub fn constant_offset(&self) -> f64 {
        self.constant_offset
    }

    pub fn coefficient(&self, s: &PauliString) -> Option<f64> {
        self.terms
            .binary_search_by(|(t, _)| t.cmp(s))
            .ok()
            .map(|i| self.terms[i].1)
    }
}

struct Accumulator {
    n: usize,
    terms: BTreeMap<PauliString, f64>,
    constant: f64,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
            constant: 0.0,
        }
    }

    fn add(&mut self, s: PauliString, c: f64) {
        if s.is_identity() {
            self.constant += c;
        } else {
            *self.terms.entry(s).or_insert(0.0) += c;
        }
    }

    fn finish(self) -> PauliHamiltonian {
        PauliHamiltonian {
            n_qubits: self.n,
            terms: self.terms.into_iter().filter(|&(_, c)| c != 0.0).collect(),
            constant_offset: self.constant,
        }
    }
}

/// Jordan-Wigner image of `h` with `n_p = (1 - Z_p)/2` on qubit `p`.
///
/// Per unordered pair `p < q` the hopping contributes
/// `T_pq/2 (X_p Z⋯Z X_q + Y_p Z⋯Z Y_q)` and the interaction contributes
/// `W/4 (1 - Z_p - Z_q + Z_p Z_q)` with `W = V_pq + V_qp`.
pub fn jordan_wigner(h: &FermionHamiltonian) -> PauliHamiltonian {
    let n = h.n_modes();
    let mut acc = Accumulator::new(n);
    let z = |q: usize| PauliString::from_sparse(n, &[(q, Pauli::Z)]);

    for p in 0..n {
        let e = h.onsite_energy(p);
        acc.constant += e / 2.0;
        acc.add(z(p), -e / 2.0);
    }
    for p in 0..n {
        for q in (p + 1)..n {
            let w = h.pair_interaction(p, q);
            if w != 0.0 {
                acc.constant += w / 4.0;
                acc.add(z(p), -w / 4.0);
                acc.add(z(q), -w / 4.0);
                acc.add(
                    PauliString::from_sparse(n, &[(p, Pauli::Z), (q, Pauli::Z)]),
                    w / 4.0,
                );
            }
            let t = h.hopping(p, q);
            if t != 0.0 {
                for end in [Pauli::X, Pauli::Y] {
                    let mut ops = vec![(p, end), (q, end)];
                    ops.extend(((p + 1)..q).map(|k| (k, Pauli::Z)));
                    acc.add(PauliString::from_sparse(n, &ops), t / 2.0);
                }
            }
        }
    }
    acc.finish()
}
