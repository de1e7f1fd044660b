use nalgebra::DMatrix;
use serde_json::{json, Map};

use super::givens::{kill_lower, kill_upper, rotate_cols, rotate_rows};
use super::UNITARY_TOL;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::io::{content_hash, MatrixFile};
use crate::C64;

/// `eta` occupied orbitals over `n` modes; row `i` of `q` holds the
/// coefficients of orbital `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterDeterminant {
    q: DMatrix<C64>,
}

impl SlaterDeterminant {
    pub fn new(q: DMatrix<C64>) -> Result<Self> {
        let (eta, n) = q.shape();
        if eta == 0 || eta > n {
            return Err(Error::InvalidParticleCount { eta, n });
        }
        if q.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("orbital matrix".into()));
        }
        let gram = &q * q.adjoint();
        let gap = (gram - DMatrix::<C64>::identity(eta, eta))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if gap.is_nan() || gap > UNITARY_TOL {
            return Err(Error::NotOrthonormal(gap));
        }
        Ok(Self { q })
    }

    /// Modes `0..eta` occupied.
    pub fn hartree_fock(eta: usize, n: usize) -> Result<Self> {
        Self::new(DMatrix::identity(eta, n))
    }

    pub fn eta(&self) -> usize {
        self.q.nrows()
    }

    pub fn n(&self) -> usize {
        self.q.ncols()
    }

    pub fn q(&self) -> &DMatrix<C64> {
        &self.q
    }
}

/// Column rotation `(j, θ, φ)` on columns `(j, j + 1)`.
type ColumnOp = (usize, f64, f64);

/// Phase gates and rotation layers, kept apart so two sectors can be merged.
struct Program {
    phases: Vec<Gate>,
    layers: Vec<Vec<Gate>>,
    rotation_count: usize,
    holes: bool,
}

/// Brings orthonormal rows `m` to `[D | 0]` with `D` diagonal.
///
/// Row rotations (which leave the determinant state unchanged) first clear
/// the trailing staircase, then each row `i` is swept right to left with
/// column rotations, `n - rows` per row.
fn eliminate(m: &mut DMatrix<C64>) -> Vec<ColumnOp> {
    let (r, n) = m.shape();
    for k in 0..r.saturating_sub(1) {
        let col = n - 1 - k;
        let pivot = r - 1 - k;
        for i in 0..pivot {
            if let Some((theta, phase)) = kill_upper(m[(i, col)], m[(i + 1, col)]) {
                rotate_rows(m, i, theta, phase);
            }
        }
    }
    let mut ops = Vec::new();
    for i in 0..r {
        for j in ((i + 1)..=(n - r + i)).rev() {
            if let Some((theta, phase)) = kill_lower(m[(i, j - 1)], m[(i, j)]) {
                rotate_cols(m, j - 1, theta, phase);
                ops.push((j - 1, theta, phase));
            }
        }
    }
    ops
}

/// Earliest-layer placement of ops that touch columns `(j, j + 1)`.
fn layer_ops(n: usize, ops: &[ColumnOp]) -> Vec<Vec<ColumnOp>> {
    let mut free = vec![0usize; n];
    let mut layers: Vec<Vec<ColumnOp>> = Vec::new();
    for &op in ops {
        let l = free[op.0].max(free[op.0 + 1]);
        if l == layers.len() {
            layers.push(Vec::new());
        }
        layers[l].push(op);
        free[op.0] = l + 1;
        free[op.0 + 1] = l + 1;
    }
    layers
}

/// Rows spanning the orthogonal complement of the rows of `q`.
fn orthonormal_complement(q: &DMatrix<C64>) -> DMatrix<C64> {
    let (eta, n) = q.shape();
    let mut basis: Vec<DMatrix<C64>> = (0..eta).map(|i| q.rows(i, 1).into_owned()).collect();
    let mut out = Vec::with_capacity(n - eta);
    while out.len() < n - eta {
        let mut best: Option<DMatrix<C64>> = None;
        for k in 0..n {
            let mut v = DMatrix::<C64>::zeros(1, n);
            v[(0, k)] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for b in &basis {
                    let overlap = b.conjugate().dot(&v);
                    v -= b * overlap;
                }
            }
            if best.as_ref().is_none_or(|bv| v.norm() > bv.norm()) {
                best = Some(v);
            }
        }
        let v = best.expect("n > eta");
        let v = &v / C64::new(v.norm(), 0.0);
        basis.push(v.clone());
        out.push(v);
    }
    DMatrix::from_fn(n - eta, n, |r, c| out[r][(0, c)])
}

fn program(d: &SlaterDeterminant) -> Program {
    let (eta, n) = (d.eta(), d.n());
    let holes = 2 * eta > n;
    let (ops, phases) = if !holes {
        let mut m = d.q().clone();
        let ops = eliminate(&mut m);
        let phases = (0..eta).map(|i| (i, m[(i, i)].arg())).collect::<Vec<_>>();
        (ops, phases)
    } else {
        let p = orthonormal_complement(d.q());
        let h = n - eta;
        let mut reversed = DMatrix::from_fn(h, n, |r, c| p[(h - 1 - r, n - 1 - c)]);
        let ops: Vec<ColumnOp> = eliminate(&mut reversed)
            .into_iter()
            .map(|(j, theta, phase)| (n - 2 - j, -theta, -phase))
            .collect();
        let mut m = d.q().clone();
        for &(j, theta, phase) in &ops {
            rotate_cols(&mut m, j, theta, phase);
        }
        let det = m.columns(0, eta).into_owned().determinant();
        (ops, vec![(0, det.arg())])
    };
    let layers = layer_ops(n, &ops)
        .into_iter()
        .rev()
        .map(|layer| {
            layer
                .into_iter()
                .map(|(j, theta, phase)| Gate::givens(j, -theta, phase))
                .collect()
        })
        .collect();
    Program {
        phases: phases
            .into_iter()
            .filter(|&(_, angle)| angle != 0.0)
            .map(|(q, angle)| Gate::phase(q, angle))
            .collect(),
        layers,
        rotation_count: ops.len(),
        holes,
    }
}

fn assemble(n: usize, phases: Vec<Gate>, layers: Vec<Vec<Gate>>) -> Result<Circuit> {
    let mut c = Circuit::new(n);
    c.push_nonempty(phases)?;
    for layer in layers {
        c.push_layer(layer)?;
    }
    Ok(c)
}

fn depth_metadata(meta: &mut Map<String, serde_json::Value>, eta: usize, rotation_layers: usize) {
    let claim = eta.saturating_sub(1);
    meta.insert("rotation_layers".into(), json!(rotation_layers));
    meta.insert("eta_minus_one".into(), json!(claim));
    meta.insert(
        "exceeds_eta_minus_one".into(),
        json!(rotation_layers > claim),
    );
}

/// Circuit taking the state with modes `0..eta` occupied to the Slater
/// determinant `d`, with at most `eta·(n − eta)` Givens gates.
///
/// For `eta > n/2` the holes are rotated instead: the complement of `d` is
/// eliminated and the leftover `eta×eta` block contributes a global phase,
/// applied on mode 0.
pub fn slater_prep_circuit(d: &SlaterDeterminant) -> Result<Circuit> {
    let prog = program(d);
    let rotation_layers = prog.layers.len();
    let mut c = assemble(d.n(), prog.phases, prog.layers)?;
    let file = MatrixFile::from_matrix(d.q(), Some(d.eta()));
    c.metadata.insert("kind".into(), json!("slater"));
    c.metadata.insert("n_modes".into(), json!(d.n()));
    c.metadata.insert("eta".into(), json!(d.eta()));
    c.metadata.insert("rotated_holes".into(), json!(prog.holes));
    c.metadata
        .insert("rotation_count".into(), json!(prog.rotation_count));
    c.metadata
        .insert("rotation_bound".into(), json!(d.eta() * (d.n() - d.eta())));
    depth_metadata(&mut c.metadata, d.eta(), rotation_layers);
    c.metadata
        .insert("problem_sha256".into(), json!(content_hash(&file)?));
    c.metadata
        .insert("slater".into(), serde_json::to_value(&file)?);
    let stats = serde_json::to_value(c.stats())?;
    c.metadata.insert("stats".into(), stats);
    Ok(c)
}

/// Spin-up sector on the first half of the chain, spin-down on the second,
/// prepared in parallel. Both sectors must have the same number of modes.
pub fn spin_split_prep(d_up: &SlaterDeterminant, d_down: &SlaterDeterminant) -> Result<Circuit> {
    let half = d_up.n();
    if d_down.n() != half {
        return Err(Error::DimensionMismatch(format!(
            "spin sectors have {} and {} modes",
            half,
            d_down.n()
        )));
    }
    let up = program(d_up);
    let down = program(d_down);
    let mut phases = up.phases;
    phases.extend(down.phases.iter().map(|g| g.shifted(half)));
    // align both sectors to finish together
    let depth = up.layers.len().max(down.layers.len());
    let pad = |layers: Vec<Vec<Gate>>| {
        let mut padded = vec![Vec::new(); depth - layers.len()];
        padded.extend(layers);
        padded
    };
    let layers: Vec<Vec<Gate>> = pad(up.layers)
        .into_iter()
        .zip(pad(down.layers))
        .map(|(mut a, b)| {
            a.extend(b.iter().map(|g| g.shifted(half)));
            a
        })
        .filter(|l| !l.is_empty())
        .collect();
    let rotation_layers = layers.len();
    let mut c = assemble(2 * half, phases, layers)?;
    let up_file = MatrixFile::from_matrix(d_up.q(), Some(d_up.eta()));
    let down_file = MatrixFile::from_matrix(d_down.q(), Some(d_down.eta()));
    c.metadata.insert("kind".into(), json!("slater_spin"));
    c.metadata.insert("n_modes".into(), json!(2 * half));
    c.metadata
        .insert("eta".into(), json!(d_up.eta() + d_down.eta()));
    c.metadata.insert(
        "rotation_count".into(),
        json!(up.rotation_count + down.rotation_count),
    );
    depth_metadata(&mut c.metadata, d_up.eta() + d_down.eta(), rotation_layers);
    c.metadata
        .insert("slater_up".into(), serde_json::to_value(&up_file)?);
    c.metadata
        .insert("slater_down".into(), serde_json::to_value(&down_file)?);
    let stats = serde_json::to_value(c.stats())?;
    c.metadata.insert("stats".into(), stats);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slaterprep::random_slater;

    #[test]
    fn hartree_fock_needs_no_gates() {
        for (eta, n) in [(1, 3), (2, 4), (3, 4), (4, 4)] {
            let d = SlaterDeterminant::hartree_fock(eta, n).unwrap();
            let c = slater_prep_circuit(&d).unwrap();
            assert_eq!(c.stats().gate_count, 0, "eta={eta} n={n}");
        }
    }

    #[test]
    fn single_particle_on_two_modes_uses_one_gate() {
        let (a, b) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let q = DMatrix::from_row_slice(1, 4, &[a, b, C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        let c = slater_prep_circuit(&SlaterDeterminant::new(q).unwrap()).unwrap();
        assert_eq!(c.stats().per_kind_counts["givens"], 1);
    }

    #[test]
    fn elimination_reaches_diagonal_form() {
        for (eta, n) in [(1, 5), (2, 5), (2, 4), (3, 7)] {
            let mut m = random_slater(eta, n, 17);
            let ops = eliminate(&mut m);
            assert_eq!(ops.len(), eta * (n - eta));
            for i in 0..eta {
                for j in 0..n {
                    if i != j {
                        assert!(m[(i, j)].norm() < 1e-12, "eta={eta} n={n} ({i},{j})");
                    }
                }
                assert!((m[(i, i)].norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn complement_is_orthonormal_and_orthogonal() {
        let q = random_slater(3, 5, 2);
        let p = orthonormal_complement(&q);
        assert_eq!(p.shape(), (2, 5));
        assert!((&p * p.adjoint() - DMatrix::<C64>::identity(2, 2)).norm() < 1e-12);
        assert!((&q * p.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn rotation_count_bound() {
        for n in 1..=12 {
            for eta in 1..=n {
                let d =
                    SlaterDeterminant::new(random_slater(eta, n, (n * 31 + eta) as u64)).unwrap();
                let c = slater_prep_circuit(&d).unwrap();
                assert!(
                    c.stats().two_qubit_count <= eta * (n - eta),
                    "eta={eta} n={n}"
                );
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        let q = DMatrix::from_element(1, 2, C64::new(1.0, 0.0));
        assert!(matches!(
            SlaterDeterminant::new(q),
            Err(Error::NotOrthonormal(_))
        ));
        assert!(matches!(
            SlaterDeterminant::new(DMatrix::identity(3, 2)),
            Err(Error::InvalidParticleCount { .. })
        ));
        let a = SlaterDeterminant::hartree_fock(1, 2).unwrap();
        let b = SlaterDeterminant::hartree_fock(1, 3).unwrap();
        assert!(spin_split_prep(&a, &b).is_err());
    }

    #[test]
    fn spin_split_of_identical_sectors_keeps_depth() {
        let d = SlaterDeterminant::new(random_slater(2, 5, 8)).unwrap();
        let single = slater_prep_circuit(&d).unwrap();
        let both = spin_split_prep(&d, &d).unwrap();
        assert_eq!(both.stats().depth, single.stats().depth);
        assert_eq!(
            both.stats().two_qubit_count,
            2 * single.stats().two_qubit_count
        );
        let hf = SlaterDeterminant::hartree_fock(2, 4).unwrap();
        assert_eq!(spin_split_prep(&hf, &hf).unwrap().stats().gate_count, 0);
    }
}
