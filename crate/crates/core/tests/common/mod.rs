#![allow(dead_code)]

use qlbw_core::components::{cqlbm_step, grid_measurement, initial_conditions};
use qlbw_core::oracle::normalized_density;
use qlbw_core::sim::{run, SimulationConfig, TimeSeriesResult};
use qlbw_core::*;
use std::collections::BTreeMap;

pub fn config(spec: &LatticeSpec, init: &InitialCondition) -> SimulationConfig {
    let rmap = register_layout(spec);
    let data = reflection_data(spec);
    let step = cqlbm_step(spec, &rmap, &data).unwrap().circuit;
    let initial = initial_conditions(spec, &rmap, init).unwrap().circuit;
    let measurement = grid_measurement(&rmap).unwrap().circuit;
    SimulationConfig::new(initial, step, measurement)
}

pub fn oracle_start(spec: &LatticeSpec, init: &InitialCondition) -> OracleState {
    match init {
        InitialCondition::LeftHalfUniform => OracleState::left_half_uniform(spec),
        InitialCondition::PointSource { position, velocity } => OracleState::new(vec![Particle {
            position: position.clone(),
            velocity: velocity.clone(),
        }]),
    }
}

/// Largest absolute difference between two sparse distributions.
pub fn max_deviation(a: &BTreeMap<Vec<usize>, f64>, b: &BTreeMap<Vec<usize>, f64>) -> f64 {
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
        .fold(0.0, f64::max)
}

/// Runs quantum and classical side by side; returns the worst per-step
/// deviation and the quantum result.
pub fn compare(spec: &LatticeSpec, init: &InitialCondition, steps: usize) -> (f64, TimeSeriesResult) {
    let cfg = config(spec, init);
    let result = run(&cfg, steps).unwrap();
    let mut state = oracle_start(spec, init);
    let mut worst: f64 = 0.0;
    for rec in &result.steps {
        state = oracle_step(&state, spec).unwrap();
        let dev = max_deviation(&rec.counts.values, &normalized_density(&state));
        worst = worst.max(dev);
    }
    (worst, result)
}
