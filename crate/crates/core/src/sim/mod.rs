//! Statevector simulation and the multi-step execution strategies.

pub mod dense;
pub mod runner;
pub mod sampling;
pub mod statevector;

pub use runner::{
    reinitialize_qtm, run, run_with, QtmReinitializer, Reinitialized, Reinitializer,
    SimulationConfig, StepRecord, TimeSeriesResult,
};
pub use dense::{distance_from_identity, distance_up_to_phase, unitary};
pub use sampling::{marginal, sample, Counts, CountsMode};
pub use statevector::{apply, SimError, Statevector};
