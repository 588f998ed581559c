//! Fixtures shared by the criterion suites.

use qlbw_core::components::{cqlbm_step, grid_measurement, initial_conditions};
use qlbw_core::{
    obstacle_sweep_lattice, reflection_data, register_layout, Circuit, InitialCondition, LatticeSpec, SimulationConfig,
    Statevector,
};

/// 16x16 lattice with four velocities per dimension and `obstacles` sweep blocks.
pub fn sweep_lattice(obstacles: usize) -> LatticeSpec {
    obstacle_sweep_lattice(16, 4, obstacles).expect("sweep layout has room for six blocks")
}

pub fn step_circuit(spec: &LatticeSpec) -> Circuit {
    let rmap = register_layout(spec);
    cqlbm_step(spec, &rmap, &reflection_data(spec)).expect("valid lattice").circuit
}

fn origin(spec: &LatticeSpec) -> InitialCondition {
    InitialCondition::PointSource {
        position: vec![0; spec.num_dims()],
        velocity: vec![1; spec.num_dims()],
    }
}

/// Exact-mode simulation of one population starting at the origin.
pub fn simulation_config(spec: &LatticeSpec, snapshots: bool) -> SimulationConfig {
    let rmap = register_layout(spec);
    let initial = initial_conditions(spec, &rmap, &origin(spec)).expect("origin is free").circuit;
    let measurement = grid_measurement(&rmap).expect("grid registers exist").circuit;
    let mut config = SimulationConfig::new(initial, step_circuit(spec), measurement);
    config.snapshots = snapshots;
    config
}

/// State right after initialization, ready for repeated step applications.
pub fn initial_state(spec: &LatticeSpec) -> Statevector {
    let rmap = register_layout(spec);
    let mut psi = Statevector::zero(rmap.total_qubits());
    psi.apply(&initial_conditions(spec, &rmap, &origin(spec)).expect("origin is free").circuit)
        .expect("qubit counts match");
    psi
}
