use nalgebra::DMatrix;

use super::state::apply_gates;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::C64;

use super::Statevector;

/// Largest register for which dense `2^n × 2^n` operators are built.
pub const DENSE_QUBIT_LIMIT: usize = 12;

pub(crate) fn check_dense(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::SizeLimit { what, limit, n })
    } else {
        Ok(())
    }
}

/// Operator on `n` qubits stored as a `2^n × 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n_qubits: usize,
    matrix: DMatrix<C64>,
}

impl DenseOperator {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_dense("dense operator", n_qubits, DENSE_QUBIT_LIMIT)?;
        let dim = 1usize << n_qubits;
        Ok(Self {
            n_qubits,
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn from_matrix(n_qubits: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if matrix.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch(format!(
                "{:?} matrix for {n_qubits} qubits",
                matrix.shape()
            )));
        }
        Ok(Self { n_qubits, matrix })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// `self · other`.
    pub fn compose(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch("operator widths differ".into()));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn adjoint(&self) -> DenseOperator {
        Self {
            n_qubits: self.n_qubits,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Largest entry of `U†U − I`.
    pub fn unitarity_gap(&self) -> f64 {
        let dim = self.dim();
        (self.matrix.adjoint() * &self.matrix - DMatrix::<C64>::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, psi: &Statevector) -> Result<Statevector> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch(
                "state and operator widths differ".into(),
            ));
        }
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Statevector::from_amplitudes(self.n_qubits, (&self.matrix * v).as_slice().to_vec())
    }
}

/// Ordered product of the embedded gate matrices, built column by column.
pub fn circuit_to_dense(c: &Circuit) -> Result<DenseOperator> {
    let n = c.n_qubits();
    check_dense("circuit_to_dense", n, DENSE_QUBIT_LIMIT)?;
    let dim = 1usize << n;
    let mut matrix = DMatrix::<C64>::identity(dim, dim);
    for column in matrix.as_mut_slice().chunks_mut(dim) {
        apply_gates(column, c, None);
    }
    DenseOperator::from_matrix(n, matrix)
}

/// `‖A − e^{iγ} B‖_F`, with `γ = arg tr(B†A)` when `phase_aligned` and
/// `γ = 0` otherwise.
pub fn operator_distance(a: &DenseOperator, b: &DenseOperator, phase_aligned: bool) -> Result<f64> {
    if a.matrix.shape() != b.matrix.shape() {
        return Err(Error::DimensionMismatch(format!(
            "operators of shape {:?} and {:?}",
            a.matrix.shape(),
            b.matrix.shape()
        )));
    }
    let phase = if phase_aligned {
        let overlap = b.matrix.dotc(&a.matrix);
        if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            C64::new(1.0, 0.0)
        }
    } else {
        C64::new(1.0, 0.0)
    };
    Ok((&a.matrix - &b.matrix * phase).norm())
}

/// `‖[W, N]‖_F` for the total particle number `N`.
pub fn number_commutator_norm(w: &DenseOperator) -> f64 {
    let m = &w.matrix;
    let mut acc = 0.0;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let delta = r.count_ones() as f64 - c.count_ones() as f64;
            acc += m[(r, c)].norm_sqr() * delta * delta;
        }
    }
    acc.sqrt()
}
