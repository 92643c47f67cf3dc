//! Exact pure- and mixed-state simulation.

mod channel;
mod density;
mod distribution;
mod gate;
mod pauli;
pub(crate) mod state;

pub use channel::{KrausChannel, TRACE_PRESERVING_TOL};
pub use density::{
    hermitian_eigen, DensityMatrix, Physicality, HERMITIAN_TOL, MIN_EIGENVALUE_TOL, TRACE_TOL,
};
pub use distribution::{
    rng_stream, sample_counts, sample_counts_stream, CountsHistogram, Distribution,
};
pub use gate::{Circuit, GateKind, GateOp};
pub use pauli::{Pauli, PauliString};
pub use state::{
    Limits, StateVector, DEFAULT_MAX_DENSITY_QUBITS, DEFAULT_MAX_STATEVECTOR_QUBITS,
};
