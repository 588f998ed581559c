//! Circuit components of the collisionless transport method, organised as
//! primitives, operators built from them, and full algorithms.

mod algorithm;
mod operators;
mod primitives;
mod schedule;

pub use algorithm::{cqlbm_step, grid_measurement, initial_conditions, InitialCondition};
pub use operators::{
    bounceback_reflection_operator, specular_reflection_operator, streaming_operator,
};
pub use primitives::{
    comparator, controlled_incrementer, interval_patterns, streaming_ancilla_preparation,
    ComparatorMode, Reflection,
};
pub use schedule::{substep_schedule, SubstepSchedule};

use crate::circuit::{Circuit, CircuitError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Primitive,
    Operator,
    Algorithm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub kind: ComponentKind,
    pub circuit: Circuit,
}

impl Component {
    fn new(kind: ComponentKind, circuit: Circuit) -> Self {
        Self { kind, circuit }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComponentError {
    #[error("dimension {dim} does not exist in a {num_dims}D lattice")]
    InvalidDimension { dim: usize, num_dims: usize },
    #[error("constant {value} is outside [0, {extent})")]
    ConstantOutOfRange { value: usize, extent: usize },
    #[error("qubit {0} is not an obstacle or comparator ancilla")]
    InvalidOutput(usize),
    #[error("velocity magnitude {magnitude} is outside 1..={max}")]
    InvalidMagnitude { magnitude: usize, max: usize },
    #[error("position {0:?} lies inside an obstacle")]
    PositionInsideObstacle(Vec<usize>),
    #[error("invalid initial condition: {0}")]
    InvalidInitialCondition(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

pub type Result<T> = std::result::Result<T, ComponentError>;
