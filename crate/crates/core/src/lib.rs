//! Fermionic swap networks, Givens-rotation state preparation, and the dense
//! oracles used to check them.
//!
//! The crate compiles second-quantized Hamiltonians of the form
//!
//! ```text
//! H = Σ_pq T_pq a†_p a_q + Σ_p U_p n_p + Σ_{p≠q} V_pq n_p n_q
//! ```
//!
//! into Trotter-step circuits on a linear chain of qubits, compiles Slater
//! determinant preparations into nearest-neighbor Givens rotations, and
//! verifies both against exact dense operators at small sizes.
//!
//! Conventions used throughout:
//!
//! * modes, qubits and chain positions are 0-based;
//! * amplitude index bit `j` is the occupation of qubit `j` (qubit 0 is the
//!   least significant bit);
//! * Jordan-Wigner strings run over lower-indexed qubits, so
//!   `a_j = Z_0 ⋯ Z_{j-1} (X_j + iY_j)/2` and `n_j = (1 - Z_j)/2`.

pub mod circuit;
pub mod error;
pub mod hamiltonian;
pub mod io;
pub mod simcheck;
pub mod slaterprep;
pub mod swapnet;

pub use circuit::{Circuit, CircuitStats, Gate, GateKind};
pub use error::{Error, Result};
pub use hamiltonian::{FermionHamiltonian, HubbardInstance, PauliHamiltonian};

/// Complex scalar used by every dense kernel.
pub type C64 = num_complex::Complex64;
