//! Obstacle-count sweeps for circuit assembly, lowering and simulation.

use anyhow::{Context, Result};
use clap::ValueEnum;
use qlbw_core::components::{cqlbm_step, grid_measurement, initial_conditions};
use qlbw_core::sim::run;
use qlbw_core::{
    compile_report, obstacle_sweep_lattice, reflection_data, register_layout, Circuit, InitialCondition, LatticeSpec,
    SimulationConfig,
};
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Assembly,
    Lowering,
    Simulation,
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub grids: Vec<usize>,
    pub velocities: usize,
    pub max_obstacles: usize,
    pub steps: usize,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssemblyRow {
    pub grid: usize,
    pub obstacles: usize,
    pub qubits: usize,
    pub gate_count: usize,
    pub depth: usize,
    pub assembly_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoweringRow {
    pub grid: usize,
    pub obstacles: usize,
    pub qubits: usize,
    pub ir_gate_count: usize,
    pub lowered_gate_count: usize,
    pub lowered_depth: usize,
    pub compile_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationRow {
    pub grid: usize,
    pub obstacles: usize,
    pub qubits: usize,
    pub steps: usize,
    pub snapshots: bool,
    pub step_applications: usize,
    pub wall_seconds: f64,
}

fn step_circuit(spec: &LatticeSpec) -> Result<Circuit> {
    let rmap = register_layout(spec);
    Ok(cqlbm_step(spec, &rmap, &reflection_data(spec))?.circuit)
}

fn configurations(opts: &SweepOptions) -> Vec<(usize, usize)> {
    opts.grids
        .iter()
        .flat_map(|&g| (0..=opts.max_obstacles).map(move |k| (g, k)))
        .collect()
}

pub fn assembly_row(grid: usize, velocities: usize, obstacles: usize) -> Result<AssemblyRow> {
    let spec = obstacle_sweep_lattice(grid, velocities, obstacles)?;
    let start = Instant::now();
    let step = step_circuit(&spec)?;
    let assembly_seconds = start.elapsed().as_secs_f64();
    let m = step.metrics();
    Ok(AssemblyRow {
        grid,
        obstacles,
        qubits: step.num_qubits(),
        gate_count: m.gate_count,
        depth: m.depth,
        assembly_seconds,
    })
}

pub fn lowering_row(grid: usize, velocities: usize, obstacles: usize) -> Result<LoweringRow> {
    let spec = obstacle_sweep_lattice(grid, velocities, obstacles)?;
    let step = step_circuit(&spec)?;
    let report = compile_report(&step)?;
    Ok(LoweringRow {
        grid,
        obstacles,
        qubits: step.num_qubits(),
        ir_gate_count: step.len(),
        lowered_gate_count: report.lowered_gate_count,
        lowered_depth: report.lowered_depth,
        compile_seconds: report.compile_wall_time.as_secs_f64(),
    })
}

pub fn simulation_row(grid: usize, velocities: usize, obstacles: usize, steps: usize, snapshots: bool) -> Result<SimulationRow> {
    let spec = obstacle_sweep_lattice(grid, velocities, obstacles)?;
    let rmap = register_layout(&spec);
    let step = cqlbm_step(&spec, &rmap, &reflection_data(&spec))?.circuit;
    // Sweep obstacles reach into the left half, so start from one population
    // at the origin; dense simulation cost does not depend on the state.
    let origin = InitialCondition::PointSource {
        position: vec![0; spec.num_dims()],
        velocity: vec![1; spec.num_dims()],
    };
    let initial = initial_conditions(&spec, &rmap, &origin)?.circuit;
    let mut config = SimulationConfig::new(initial, step, grid_measurement(&rmap)?.circuit);
    config.snapshots = snapshots;
    let start = Instant::now();
    let result = run(&config, steps)?;
    Ok(SimulationRow {
        grid,
        obstacles,
        qubits: rmap.total_qubits(),
        steps,
        snapshots,
        step_applications: result.total_applications(),
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

/// Runs one suite over every configuration in a worker pool and writes one
/// CSV row per configuration, ordered by grid then obstacle count.
pub fn run_suite(suite: Suite, opts: &SweepOptions, out: &Path) -> Result<usize> {
    let configs = configurations(opts);
    let pool = pool(opts.threads)?;
    let v = opts.velocities;
    match suite {
        Suite::Assembly => {
            let rows: Vec<_> = pool.install(|| configs.par_iter().map(|&(g, k)| assembly_row(g, v, k)).collect::<Result<_>>())?;
            write_rows(out, &rows)?;
            Ok(rows.len())
        }
        Suite::Lowering => {
            let rows: Vec<_> = pool.install(|| configs.par_iter().map(|&(g, k)| lowering_row(g, v, k)).collect::<Result<_>>())?;
            write_rows(out, &rows)?;
            Ok(rows.len())
        }
        Suite::Simulation => {
            let jobs: Vec<_> = configs
                .iter()
                .flat_map(|&(g, k)| [true, false].map(|s| (g, k, s)))
                .collect();
            let rows: Vec<_> = pool.install(|| {
                jobs.par_iter()
                    .map(|&(g, k, s)| simulation_row(g, v, k, opts.steps, s))
                    .collect::<Result<_>>()
            })?;
            write_rows(out, &rows)?;
            Ok(rows.len())
        }
    }
}
