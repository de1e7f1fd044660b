//! Odd-even fermionic swap networks and the Trotter steps built on them.

mod gates;
mod hubbard;
mod schedule;
mod trotter;

pub use gates::{fsim_matrix, fswap_matrix, gate_matrix, givens_matrix, phase_matrix, LocalMatrix};
pub use hubbard::{hubbard_swap_schedule, synthesize_hubbard_trotter};
pub use schedule::{swap_network_schedule, SwapSchedule, TermService};
pub use trotter::synthesize_trotter_step;
