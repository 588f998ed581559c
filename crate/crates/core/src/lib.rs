//! Quantum Transport Method workbench: lattice definitions, circuit IR,
//! circuit components, statevector engine, lowering, classical oracle and
//! result export.

pub mod circuit;
pub mod components;
pub mod export;
pub mod fit;
pub mod lattice;
pub mod lowering;
pub mod oracle;
pub mod reflection;
pub mod registers;
pub mod sim;

pub use circuit::{qft, Circuit, CircuitError, CircuitMetrics, Control, Gate, GateKind};
pub use components::{Component, ComponentError, ComponentKind, InitialCondition};
pub use export::{export_stl, export_vtk, ExportError};
pub use fit::{linear_fit, quadratic_fit, Fit};
pub use lattice::{obstacle_sweep_lattice, parse_lattice, Block, BoundaryKind, LatticeError, LatticeSpec};
pub use lowering::{compile_report, lower, optimize, CompileReport, LoweringError};
pub use oracle::{oracle_density, oracle_step, OracleError, OracleState, Particle};
pub use reflection::{inversion_vector, reflection_data, NearCornerPoint, ReflectionData};
pub use registers::{register_layout, Register, RegisterKind, RegisterMap};
pub use sim::{Counts, CountsMode, SimError, SimulationConfig, Statevector};
