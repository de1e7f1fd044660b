use nalgebra::{DMatrix, SymmetricEigen};

use super::dense::{check_dense, DenseOperator, DENSE_QUBIT_LIMIT};
use super::fermion::{
    fermionic_swap, hop, left_apply, number_phases, pair_exponential, triples_to_dense,
};
use super::{pauli_hamiltonian_dense, Statevector};
use crate::error::{Error, Result};
use crate::hamiltonian::{jordan_wigner, FermionHamiltonian};
use crate::slaterprep::SlaterDeterminant;
use crate::swapnet::SwapSchedule;
use crate::C64;

const HERMITIAN_TOL: f64 = 1e-10;
const BRANCH_TOL: f64 = 1e-8;
const TROTTER_REFERENCE_LIMIT: usize = 10;
const THOULESS_LIMIT: usize = 10;
const SLATER_LIMIT: usize = 16;

/// `exp(−iHt)` for Hermitian `H` on `n` qubits, diagonalized one particle
/// number sector at a time when `H` conserves particle number.
fn exp_hermitian(n: usize, h: &DMatrix<C64>, t: f64) -> Result<DMatrix<C64>> {
    let gap = (h - h.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if gap > HERMITIAN_TOL {
        return Err(Error::NotHermitian(gap));
    }
    let dim = 1usize << n;
    let conserves = (0..dim)
        .all(|c| (0..dim).all(|r| r.count_ones() == c.count_ones() || h[(r, c)].norm() == 0.0));
    let sectors: Vec<Vec<usize>> = if conserves {
        (0..=n as u32)
            .map(|k| (0..dim).filter(|x| x.count_ones() == k).collect())
            .collect()
    } else {
        vec![(0..dim).collect()]
    };
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    for idx in sectors {
        let block = DMatrix::from_fn(idx.len(), idx.len(), |r, c| h[(idx[r], idx[c])]);
        let block = (&block + block.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(block);
        let phases = eig
            .eigenvalues
            .map(|lambda| C64::from_polar(1.0, -lambda * t));
        let v = &eig.eigenvectors;
        let e = v * DMatrix::from_diagonal(&phases) * v.adjoint();
        for (r, &ir) in idx.iter().enumerate() {
            for (c, &ic) in idx.iter().enumerate() {
                out[(ir, ic)] = e[(r, c)];
            }
        }
    }
    Ok(out)
}

/// `exp(−iHt)` with `H` the Jordan-Wigner matrix of `h`, constant included.
pub fn exact_evolution(h: &FermionHamiltonian, t: f64) -> Result<DenseOperator> {
    let n = h.n_modes();
    check_dense("exact_evolution", n, DENSE_QUBIT_LIMIT)?;
    let dense = pauli_hamiltonian_dense(&jordan_wigner(h))?;
    DenseOperator::from_matrix(n, exp_hermitian(n, dense.matrix(), t)?)
}

/// Product of exact term exponentials in the order the schedule services
/// them, followed by the fermionic swaps the circuit performs.
///
/// Pair terms are indexed by orbital and exponentiated in the original
/// Jordan-Wigner ordering. The swaps relabel modes, so the circuit equals the
/// swap product times the orbital-frame product. Order 1 applies the
/// potential first and every service once. Order 2 (total time `2t`) applies
/// half the potential, the services before the last layer, the last layer's
/// services at double time, the earlier services mirrored, and the other
/// half of the potential; the swaps cancel.
pub fn trotter_reference(
    h: &FermionHamiltonian,
    sched: &SwapSchedule,
    t: f64,
    order: u32,
) -> Result<DenseOperator> {
    let n = h.n_modes();
    check_dense("trotter_reference", n, TROTTER_REFERENCE_LIMIT)?;
    if sched.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "schedule on {} positions for {n} modes",
            sched.n()
        )));
    }
    let services = sched.services();
    let depth = sched.layers().len();
    let potential: Vec<f64> = (0..n).map(|p| h.onsite_energy(p) * t).collect();
    let pair = |&(p, q): &(usize, usize), scale: f64| {
        pair_exponential(
            n,
            p,
            q,
            h.hopping(p, q) * t * scale,
            h.pair_interaction(p, q) * t * scale,
        )
    };

    let mut steps = vec![number_phases(n, &potential)];
    let swaps: Vec<usize> = match order {
        1 => {
            steps.extend(services.iter().map(|s| pair(&s.orbitals, 1.0)));
            sched.layers().iter().flatten().copied().collect()
        }
        2 => {
            if depth == 0 || services.iter().any(|s| !s.fused) {
                return Err(Error::InvalidInput(
                    "second-order reference needs a fully fused swap schedule".into(),
                ));
            }
            let early: Vec<_> = services.iter().filter(|s| s.stage + 1 < depth).collect();
            steps.extend(early.iter().map(|s| pair(&s.orbitals, 1.0)));
            steps.extend(
                services
                    .iter()
                    .filter(|s| s.stage + 1 == depth)
                    .map(|s| pair(&s.orbitals, 2.0)),
            );
            steps.extend(early.iter().rev().map(|s| pair(&s.orbitals, 1.0)));
            steps.push(number_phases(n, &potential));
            let forward: Vec<usize> = sched.layers()[..depth - 1]
                .iter()
                .flatten()
                .copied()
                .collect();
            forward
                .iter()
                .chain(forward.iter().rev())
                .copied()
                .collect()
        }
        other => return Err(Error::UnsupportedOrder(other)),
    };
    steps.extend(swaps.into_iter().map(|i| fermionic_swap(n, i)));

    let mut w = DenseOperator::identity(n)?.into_matrix();
    for step in &steps {
        w = left_apply(step, &w);
    }
    DenseOperator::from_matrix(n, w)
}

/// `log u` on the principal branch via the complex Schur form.
fn unitary_log(u: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let schur = nalgebra::Schur::try_new(u.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::InvalidInput("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let mut logs = Vec::with_capacity(u.nrows());
    for k in 0..u.nrows() {
        let lambda = t[(k, k)];
        let distance = (lambda + C64::new(1.0, 0.0)).norm();
        if distance < BRANCH_TOL {
            return Err(Error::BranchCut { distance });
        }
        logs.push(lambda.ln());
    }
    Ok(&q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(logs)) * q.adjoint())
}

/// `U(u) = exp(Σ_pq [log u]_pq a†_p a_q)`, the Fock-space operator with
/// `U(u) a†_p U(u)† = Σ_j u_jp a†_j`.
pub fn thouless_unitary(u: &DMatrix<C64>) -> Result<DenseOperator> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {:?}",
            u.shape()
        )));
    }
    check_dense("thouless_unitary", n, THOULESS_LIMIT)?;
    let gap = crate::slaterprep::unitarity_gap(u);
    if gap.is_nan() || gap > crate::slaterprep::UNITARY_TOL {
        return Err(Error::NotUnitary(gap));
    }
    let k = unitary_log(u)?;
    // i·κ̂ is Hermitian and exp(κ̂) = exp(−i·(iκ̂))
    let mut ops = Vec::new();
    for x in 0..1usize << n {
        for p in 0..n {
            for q in 0..n {
                if let Some((y, sign)) = hop(x, p, q) {
                    ops.push((x, y, k[(p, q)] * C64::new(0.0, sign)));
                }
            }
        }
    }
    let generator = triples_to_dense(n, &ops)?;
    DenseOperator::from_matrix(n, exp_hermitian(n, generator.matrix(), 1.0)?)
}

/// Amplitude of occupation set `S` (|S| = eta) is `det Q[:, S]`, columns in
/// increasing mode order.
pub fn slater_amplitudes(d: &SlaterDeterminant) -> Result<Statevector> {
    let (eta, n) = (d.eta(), d.n());
    check_dense("slater_amplitudes", n, SLATER_LIMIT)?;
    let q = d.q();
    let amps = (0..1usize << n)
        .map(|x| {
            if x.count_ones() as usize != eta {
                return C64::new(0.0, 0.0);
            }
            let cols: Vec<usize> = (0..n).filter(|&j| x >> j & 1 == 1).collect();
            DMatrix::from_fn(eta, eta, |r, c| q[(r, cols[c])]).determinant()
        })
        .collect();
    Statevector::from_amplitudes(n, amps)
}
