//! Second-quantized Hamiltonians with one-body hopping `T`, external
//! potential `U` and density-density interaction `V`.

mod hubbard;
mod pauli;

pub use hubbard::{hubbard_2d, HubbardInstance, Spin, SpinOrbital};
pub use pauli::{jordan_wigner, Pauli, PauliHamiltonian, PauliString};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Tolerance for the symmetry checks in [`FermionHamiltonian::new`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// `H = Σ_pq T_pq a†_p a_q + Σ_p U_p n_p + Σ_{p≠q} V_pq n_p n_q` with real
/// symmetric `T` and real symmetric zero-diagonal `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionHamiltonian {
    one_body: DMatrix<f64>,
    potential: DVector<f64>,
    interaction: DMatrix<f64>,
}

impl FermionHamiltonian {
    /// Validates and symmetrizes the coefficient tables.
    ///
    /// Off-diagonal asymmetry up to [`SYMMETRY_TOL`] is averaged away; anything
    /// larger is rejected, as is a nonzero `V` diagonal or a non-finite entry.
    pub fn new(t: DMatrix<f64>, u: DVector<f64>, v: DMatrix<f64>) -> Result<Self> {
        let n = u.len();
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "Hamiltonian needs at least one mode".into(),
            ));
        }
        if t.shape() != (n, n) || v.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "U has {n} entries but T is {:?} and V is {:?}",
                t.shape(),
                v.shape()
            )));
        }
        for (name, values) in [
            ("T", t.as_slice()),
            ("U", u.as_slice()),
            ("V", v.as_slice()),
        ] {
            if values.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(name.into()));
            }
        }
        check_symmetric("T", &t)?;
        check_symmetric("V", &v)?;
        for p in 0..n {
            if v[(p, p)] != 0.0 {
                return Err(Error::NonzeroDiagonal {
                    index: p,
                    value: v[(p, p)],
                });
            }
        }
        Ok(Self {
            one_body: symmetrize(&t),
            potential: u,
            interaction: symmetrize(&v),
        })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(
            DMatrix::zeros(n, n),
            DVector::zeros(n),
            DMatrix::zeros(n, n),
        )
    }

    pub fn n_modes(&self) -> usize {
        self.potential.len()
    }

    pub fn one_body(&self) -> &DMatrix<f64> {
        &self.one_body
    }

    pub fn potential(&self) -> &DVector<f64> {
        &self.potential
    }

    pub fn interaction(&self) -> &DMatrix<f64> {
        &self.interaction
    }

    /// Hopping amplitude `T_pq` of the unordered pair.
    pub fn hopping(&self, p: usize, q: usize) -> f64 {
        self.one_body[(p, q)]
    }

    /// Unordered-pair interaction `V_pq + V_qp`.
    pub fn pair_interaction(&self, p: usize, q: usize) -> f64 {
        self.interaction[(p, q)] + self.interaction[(q, p)]
    }

    /// Single-mode energy `U_p + T_pp` carried by the potential layer.
    pub fn onsite_energy(&self, p: usize) -> f64 {
        self.potential[p] + self.one_body[(p, p)]
    }

    /// Coefficient of the identity in the qubit form, `tr H / 2^n`.
    pub fn identity_component(&self) -> f64 {
        let n = self.n_modes();
        let onsite: f64 = (0..n).map(|p| self.onsite_energy(p)).sum();
        let pairs: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| self.pair_interaction(p, q))
            .sum();
        onsite / 2.0 + pairs / 4.0
    }

    /// All coefficients multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            &self.one_body * factor,
            &self.potential * factor,
            &self.interaction * factor,
        )
    }
}

fn check_symmetric(name: &'static str, m: &DMatrix<f64>) -> Result<()> {
    let n = m.nrows();
    for r in 0..n {
        for c in (r + 1)..n {
            let gap = (m[(r, c)] - m[(c, r)]).abs();
            if gap > SYMMETRY_TOL {
                return Err(Error::NotSymmetric {
                    matrix: name,
                    row: r,
                    col: c,
                    gap,
                });
            }
        }
    }
    Ok(())
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Deterministic random instance with every entry drawn from `[-1, 1]`.
pub fn random_hamiltonian(n: usize, seed: u64) -> Result<FermionHamiltonian> {
    if n == 0 {
        return Err(Error::DimensionMismatch(
            "random Hamiltonian needs n >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows: usize, cols: usize| {
        DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
    };
    let t = symmetrize(&draw(n, n));
    let u = DVector::from_column_slice(draw(n, 1).as_slice());
    let mut v = symmetrize(&draw(n, n));
    v.fill_diagonal(0.0);
    FermionHamiltonian::new(t, u, v)
}
