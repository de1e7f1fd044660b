use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use serde_json::json;

use super::{UNITARY_TOL, ZERO_TOL};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::io::{content_hash, MatrixFile};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation {
    /// Upper row of the rotated pair `(p, p + 1)`.
    pub p: usize,
    pub theta: f64,
    pub phase: f64,
    /// Column whose entry in row `p + 1` the rotation eliminates.
    pub column: usize,
}

/// Rotations that reduce a unitary `u` to `diag(e^{iφ_p})`.
#[derive(Debug, Clone, PartialEq)]
pub struct GivensPlan {
    pub n: usize,
    pub layers: Vec<Vec<GivensRotation>>,
    pub diag_phases: Vec<f64>,
}

impl GivensPlan {
    pub fn rotation_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn rotations(&self) -> impl Iterator<Item = &GivensRotation> {
        self.layers.iter().flatten()
    }

    /// `u` with every rotation applied in plan order.
    pub fn apply_to(&self, u: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        let mut a = u.clone();
        for r in self.rotations() {
            rotate_rows(&mut a, r.p, r.theta, r.phase);
        }
        Ok(a)
    }
}

pub(crate) fn rotate_rows(a: &mut DMatrix<C64>, p: usize, theta: f64, phase: f64) {
    let (s, c) = theta.sin_cos();
    let up = C64::from_polar(s, phase);
    let down = C64::from_polar(s, -phase);
    for col in 0..a.ncols() {
        let (x, y) = (a[(p, col)], a[(p + 1, col)]);
        a[(p, col)] = x * c - up * y;
        a[(p + 1, col)] = down * x + y * c;
    }
}

pub(crate) fn rotate_cols(a: &mut DMatrix<C64>, j: usize, theta: f64, phase: f64) {
    let (s, c) = theta.sin_cos();
    let up = C64::from_polar(s, phase);
    let down = C64::from_polar(s, -phase);
    for row in 0..a.nrows() {
        let (x, y) = (a[(row, j)], a[(row, j + 1)]);
        a[(row, j)] = x * c - up * y;
        a[(row, j + 1)] = down * x + y * c;
    }
}

/// Rows `p, p + 1` replaced by `cosθ·A_p − e^{iφ} sinθ·A_{p+1}` and
/// `e^{−iφ} sinθ·A_p + cosθ·A_{p+1}`.
pub fn apply_phased_givens(
    a: &DMatrix<C64>,
    p: usize,
    theta: f64,
    phase: f64,
) -> Result<DMatrix<C64>> {
    if p + 1 >= a.nrows() {
        return Err(Error::IndexOutOfRange {
            index: p + 1,
            len: a.nrows(),
        });
    }
    let mut out = a.clone();
    rotate_rows(&mut out, p, theta, phase);
    Ok(out)
}

fn wrap(angle: f64) -> f64 {
    let w = angle.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// `(θ, φ)` with `e^{iφ} tanθ = w`. Real `w` gives `θ = atan w`, `φ = 0`.
fn solve_tan(w: C64) -> (f64, f64) {
    let (r, beta) = w.to_polar();
    if beta > -FRAC_PI_2 && beta <= FRAC_PI_2 {
        (r.atan(), beta)
    } else {
        (-r.atan(), wrap(beta - PI))
    }
}

/// Angles that zero `b` (the lower entry) while keeping `a`.
pub(crate) fn kill_lower(a: C64, b: C64) -> Option<(f64, f64)> {
    if b.norm() < ZERO_TOL {
        return None;
    }
    if a == C64::new(0.0, 0.0) {
        return Some((FRAC_PI_2, 0.0));
    }
    // e^{-iφ} tanθ = -b/a  ⇔  e^{iφ} tanθ = conj(-b/a)
    Some(solve_tan((-b / a).conj()))
}

/// Angles that zero `a` (the upper entry) while keeping `b`.
pub(crate) fn kill_upper(a: C64, b: C64) -> Option<(f64, f64)> {
    if a.norm() < ZERO_TOL {
        return None;
    }
    if b == C64::new(0.0, 0.0) {
        return Some((FRAC_PI_2, 0.0));
    }
    Some(solve_tan(a / b))
}

pub(crate) fn unitarity_gap(u: &DMatrix<C64>) -> f64 {
    let gram = u.adjoint() * u;
    let n = u.ncols();
    (gram - DMatrix::<C64>::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Parallel nearest-neighbor QR of a unitary.
///
/// Element `(r, c)` below the diagonal is eliminated by rotating rows
/// `(r − 1, r)` in layer `(n − r) + 2c` (1-based), which gives `2n − 3`
/// layers with disjoint row pairs. Entries that are already zero get no
/// rotation, so layers can be empty.
pub fn givens_decompose(u: &DMatrix<C64>) -> Result<GivensPlan> {
    let n = u.nrows();
    if u.ncols() != n || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {:?}",
            u.shape()
        )));
    }
    let gap = unitarity_gap(u);
    if gap.is_nan() || gap > UNITARY_TOL {
        return Err(Error::NotUnitary(gap));
    }
    let depth = (2 * n).saturating_sub(3);
    let mut a = u.clone();
    let mut layers = vec![Vec::new(); depth];
    for label in 1..=depth {
        for c in 0..n - 1 {
            // (n - r) + 2c = label
            let Some(r) = (n + 2 * c).checked_sub(label) else {
                continue;
            };
            if r <= c || r >= n {
                continue;
            }
            if let Some((theta, phase)) = kill_lower(a[(r - 1, c)], a[(r, c)]) {
                rotate_rows(&mut a, r - 1, theta, phase);
                layers[label - 1].push(GivensRotation {
                    p: r - 1,
                    theta,
                    phase,
                    column: c,
                });
            }
        }
    }
    let diag_phases = (0..n).map(|p| a[(p, p)].arg()).collect();
    Ok(GivensPlan {
        n,
        layers,
        diag_phases,
    })
}

/// Circuit for the basis change described by `plan`.
///
/// Without `invert` it applies `U(u)†`: the rotations in plan order followed
/// by `e^{-iφ_p n_p}`. With `invert` it applies `U(u)`: `e^{iφ_p n_p}` first,
/// then the rotations in reverse with negated angles.
pub fn plan_to_circuit(plan: &GivensPlan, invert: bool) -> Result<Circuit> {
    let sign = if invert { 1.0 } else { -1.0 };
    let phases: Vec<Gate> = plan
        .diag_phases
        .iter()
        .enumerate()
        .filter(|&(_, &phi)| phi != 0.0)
        .map(|(p, &phi)| Gate::phase(p, sign * phi))
        .collect();
    let mut c = Circuit::new(plan.n);
    if invert {
        c.push_nonempty(phases)?;
        for layer in plan.layers.iter().rev() {
            c.push_nonempty(
                layer
                    .iter()
                    .map(|r| Gate::givens(r.p, -r.theta, r.phase))
                    .collect(),
            )?;
        }
    } else {
        for layer in &plan.layers {
            c.push_nonempty(
                layer
                    .iter()
                    .map(|r| Gate::givens(r.p, r.theta, r.phase))
                    .collect(),
            )?;
        }
        c.push_nonempty(phases)?;
    }
    Ok(c)
}

/// Circuit implementing `U(u)`, with the source matrix kept in metadata.
pub fn synthesize_basis_rotation(u: &DMatrix<C64>) -> Result<Circuit> {
    let plan = givens_decompose(u)?;
    let mut c = plan_to_circuit(&plan, true)?;
    let file = MatrixFile::from_matrix(u, None);
    c.metadata.insert("kind".into(), json!("basis_rotation"));
    c.metadata.insert("n_modes".into(), json!(plan.n));
    c.metadata
        .insert("plan_layers".into(), json!(plan.layers.len()));
    c.metadata
        .insert("rotation_count".into(), json!(plan.rotation_count()));
    c.metadata
        .insert("diag_phases".into(), json!(plan.diag_phases));
    c.metadata
        .insert("problem_sha256".into(), json!(content_hash(&file)?));
    c.metadata
        .insert("unitary".into(), serde_json::to_value(&file)?);
    let stats = serde_json::to_value(c.stats())?;
    c.metadata.insert("stats".into(), stats);
    Ok(c)
}
