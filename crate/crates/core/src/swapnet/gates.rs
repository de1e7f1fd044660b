use nalgebra::{Matrix2, Matrix4};

use crate::circuit::GateKind;
use crate::error::{Error, Result};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Local matrix of a gate. Two-qubit matrices use the basis index
/// `2·b_hi + b_lo`, where `b_lo` is the lower chain position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalMatrix {
    One(Matrix2<C64>),
    Two(Matrix4<C64>),
}

/// Fermionic simulation gate
/// `[[1,0,0,0],[0,-i sinθ,cosθ,0],[0,cosθ,-i sinθ,0],[0,0,0,-e^{-iφ}]]`.
pub fn fsim_matrix(theta: f64, phi: f64) -> Result<Matrix4<C64>> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::NonFinite("fsim angles".into()));
    }
    Ok(fsim_unchecked(theta, phi))
}

fn fsim_unchecked(theta: f64, phi: f64) -> Matrix4<C64> {
    let (s, c) = theta.sin_cos();
    let c = C64::new(c, 0.0);
    let mis = C64::new(0.0, -s);
    Matrix4::new(
        ONE,
        ZERO,
        ZERO,
        ZERO,
        ZERO,
        mis,
        c,
        ZERO,
        ZERO,
        c,
        mis,
        ZERO,
        ZERO,
        ZERO,
        ZERO,
        -C64::from_polar(1.0, -phi),
    )
}

pub fn fswap_matrix() -> Matrix4<C64> {
    fsim_unchecked(0.0, 0.0)
}

/// Rotation of the single-excitation block by
/// `[[cosθ, -e^{iφ} sinθ], [e^{-iφ} sinθ, cosθ]]`, identity elsewhere.
pub fn givens_matrix(theta: f64, phase: f64) -> Matrix4<C64> {
    let (s, c) = theta.sin_cos();
    let c = C64::new(c, 0.0);
    Matrix4::new(
        ONE,
        ZERO,
        ZERO,
        ZERO,
        ZERO,
        c,
        -C64::from_polar(s, phase),
        ZERO,
        ZERO,
        C64::from_polar(s, -phase),
        c,
        ZERO,
        ZERO,
        ZERO,
        ZERO,
        ONE,
    )
}

/// `diag(1, e^{i angle})`.
pub fn phase_matrix(angle: f64) -> Matrix2<C64> {
    Matrix2::new(ONE, ZERO, ZERO, C64::from_polar(1.0, angle))
}

pub fn gate_matrix(kind: &GateKind) -> LocalMatrix {
    match *kind {
        GateKind::FSim { theta, phi } => LocalMatrix::Two(fsim_unchecked(theta, phi)),
        GateKind::Givens { theta, phase } => LocalMatrix::Two(givens_matrix(theta, phase)),
        GateKind::PhaseShift { angle } => LocalMatrix::One(phase_matrix(angle)),
        GateKind::FSwap => LocalMatrix::Two(fswap_matrix()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: &Matrix4<C64>, b: &Matrix4<C64>) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn fsim_at_zero_is_fswap() {
        let r = |x: f64| C64::new(x, 0.0);
        let expected = Matrix4::new(
            r(1.0),
            ZERO,
            ZERO,
            ZERO,
            ZERO,
            ZERO,
            r(1.0),
            ZERO,
            ZERO,
            r(1.0),
            ZERO,
            ZERO,
            ZERO,
            ZERO,
            ZERO,
            r(-1.0),
        );
        assert_eq!(fsim_matrix(0.0, 0.0).unwrap(), expected);
    }

    #[test]
    fn fsim_at_quarter_turn_is_diagonal() {
        let m = fsim_matrix(FRAC_PI_2, 0.0).unwrap();
        let mi = C64::new(0.0, -1.0);
        let expected = Matrix4::from_diagonal(&nalgebra::Vector4::new(ONE, mi, mi, -ONE));
        assert!(close(&m, &expected));
        assert!(fsim_matrix(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn givens_with_quarter_phase_is_hopping_exponential() {
        let theta = 0.37;
        let g = givens_matrix(theta, FRAC_PI_2);
        let (s, c) = theta.sin_cos();
        assert!((g[(1, 1)] - c).norm() < 1e-15);
        assert!((g[(1, 2)] - C64::new(0.0, -s)).norm() < 1e-15);
        assert!((g[(2, 1)] - C64::new(0.0, -s)).norm() < 1e-15);
        assert_eq!(g[(3, 3)], ONE);
    }

    #[test]
    fn phase_gate_is_diagonal() {
        let m = phase_matrix(0.5);
        assert_eq!(m[(0, 0)], ONE);
        assert!((m[(1, 1)] - C64::from_polar(1.0, 0.5)).norm() < 1e-15);
    }
}
