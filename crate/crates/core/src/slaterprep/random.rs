use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::C64;

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal folded back into `Q`.
pub fn random_unitary(n: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    haar_fix(g)
}

/// Haar-random real orthogonal matrix.
pub fn random_orthogonal(n: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(n, n, |_, _| C64::new(rng.sample(StandardNormal), 0.0));
    haar_fix(g)
}

fn haar_fix(g: DMatrix<C64>) -> DMatrix<C64> {
    let n = g.nrows();
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for c in 0..n {
        let d = r[(c, c)];
        let unit = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for row in 0..n {
            q[(row, c)] *= unit;
        }
    }
    q
}

/// First `eta` rows of a Haar-random `n×n` unitary.
pub fn random_slater(eta: usize, n: usize, seed: u64) -> DMatrix<C64> {
    random_unitary(n, seed).rows(0, eta).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slaterprep::givens::unitarity_gap;

    #[test]
    fn generators_are_unitary_and_deterministic() {
        for n in [1, 2, 5, 9] {
            assert!(unitarity_gap(&random_unitary(n, 3)) < 1e-12);
            assert!(unitarity_gap(&random_orthogonal(n, 3)) < 1e-12);
            assert!(random_orthogonal(n, 3).iter().all(|z| z.im == 0.0));
        }
        assert_eq!(random_unitary(4, 9), random_unitary(4, 9));
        assert_ne!(random_unitary(4, 9), random_unitary(4, 10));
        assert_eq!(random_slater(2, 5, 1).shape(), (2, 5));
    }
}
