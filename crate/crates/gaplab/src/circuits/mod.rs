//! Circuit families and their exact output distributions.
//!
//! Every family gets two independent routes to the same distribution: a
//! closed-form gap/spectrum computation and a literal statevector simulation.
//! The tests hold the two within 1e-10 of each other.

pub mod boolean;
pub mod cnf;
pub mod iqp;
pub mod reversible;
pub mod statevector;
mod table;

pub use boolean::{
    boolean_construction_probabilities, boolean_phase_distribution, BoolGate, BoolOp,
    BooleanCircuit,
};
pub use cnf::{
    cnf_construction_probabilities, cnf_phase_distribution, compile_cnf, t_count, Cnf3, Literal,
    T_PER_TOFFOLI,
};
pub use iqp::{build_iqp, iqp_distribution, DiagonalGate, IqpCircuit};
pub use reversible::{RevGate, ReversibleCircuit};
pub use statevector::{simulate_statevector, Statevector};
pub use table::DistributionTable;
