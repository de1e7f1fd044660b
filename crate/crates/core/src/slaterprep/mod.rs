//! Givens-rotation decompositions of single-particle basis changes and
//! Slater-determinant preparation circuits.
//!
//! A rotation `(p, θ, φ)` acts on rows (or columns) `p` and `p + 1` with the
//! 2×2 block `[[cosθ, -e^{iφ} sinθ], [e^{-iφ} sinθ, cosθ]]`, the same block
//! the Givens gate applies to the single-excitation subspace.

mod givens;
mod random;
mod slater;

pub(crate) use givens::unitarity_gap;
pub use givens::{
    apply_phased_givens, givens_decompose, plan_to_circuit, synthesize_basis_rotation, GivensPlan,
    GivensRotation,
};
pub use random::{random_orthogonal, random_slater, random_unitary};
pub use slater::{slater_prep_circuit, spin_split_prep, SlaterDeterminant};

/// Entries below this magnitude count as already eliminated.
pub const ZERO_TOL: f64 = 1e-14;

/// Maximum deviation accepted by the unitarity and orthonormality checks.
pub const UNITARY_TOL: f64 = 1e-10;
