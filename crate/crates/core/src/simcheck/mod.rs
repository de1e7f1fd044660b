//! Dense statevector simulation and exact oracles for small systems.

mod dense;
mod fermion;
mod oracles;
mod state;

pub use dense::{
    circuit_to_dense, number_commutator_norm, operator_distance, DenseOperator, DENSE_QUBIT_LIMIT,
};
pub use fermion::{
    fermion_hamiltonian_dense, fermionic_swap_network_operator, pauli_hamiltonian_dense,
};
pub use oracles::{exact_evolution, slater_amplitudes, thouless_unitary, trotter_reference};
pub use state::{apply_circuit, apply_circuit_threaded, Statevector};
