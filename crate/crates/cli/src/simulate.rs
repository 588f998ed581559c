//! The `simulate` workflow and its replayable run manifest.

use crate::output::{write_counts_csv, write_density};
use anyhow::{Context, Result};
use qlbw_core::components::{cqlbm_step, grid_measurement, initial_conditions};
use qlbw_core::sim::run;
use qlbw_core::{export_stl, parse_lattice, reflection_data, register_layout, InitialCondition, LatticeSpec, SimulationConfig};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;
use std::time::Instant;

pub const SEED_ENV: &str = "QLBW_SEED";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const COUNTS_FILE: &str = "counts.csv";
pub const GEOMETRY_FILE: &str = "geometry.stl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitSpec {
    LeftHalfUniform,
    PointSource { position: Vec<usize>, velocity: Vec<i64> },
}

impl From<&InitSpec> for InitialCondition {
    fn from(s: &InitSpec) -> Self {
        match s {
            InitSpec::LeftHalfUniform => InitialCondition::LeftHalfUniform,
            InitSpec::PointSource { position, velocity } => InitialCondition::PointSource {
                position: position.clone(),
                velocity: velocity.clone(),
            },
        }
    }
}

/// Everything that determines a run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub lattice: serde_json::Value,
    pub initial_condition: InitSpec,
    pub steps: usize,
    pub shots: u64,
    pub exact: bool,
    pub snapshots: bool,
    pub seed: u64,
}

impl RunSettings {
    pub fn new(spec: &LatticeSpec, initial_condition: InitSpec, steps: usize, shots: u64, exact: bool, snapshots: bool, seed: u64) -> Self {
        let lattice = serde_json::from_str(&spec.to_json()).expect("lattice JSON is valid");
        Self {
            lattice,
            initial_condition,
            steps,
            shots,
            exact,
            snapshots,
            seed,
        }
    }

    pub fn spec(&self) -> Result<LatticeSpec> {
        Ok(parse_lattice(self.lattice.to_string().as_bytes())?)
    }

    /// Applies the seed override from the environment, if set.
    pub fn with_env_seed(mut self) -> Result<Self> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v.trim().parse().with_context(|| format!("{SEED_ENV}=`{v}` is not an unsigned integer"))?;
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counters {
    pub qubits: usize,
    pub step_gate_count: usize,
    pub step_depth: usize,
    pub step_applications: Vec<usize>,
    pub total_applications: usize,
    pub statevector_copies: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub build_seconds: f64,
    pub step_seconds: Vec<f64>,
    pub total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(flatten)]
    pub settings: RunSettings,
    pub counters: Counters,
    pub timings: Timings,
    pub files: Vec<String>,
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_slice(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Runs the simulation and writes counts, densities, geometry and manifest
/// into `out`.
pub fn simulate(settings: &RunSettings, out: &Path) -> Result<Manifest> {
    let total_start = Instant::now();
    let spec = settings.spec()?;
    let rmap = register_layout(&spec);
    let build_start = Instant::now();
    let data = reflection_data(&spec);
    let step = cqlbm_step(&spec, &rmap, &data)?.circuit;
    let initial = initial_conditions(&spec, &rmap, &(&settings.initial_condition).into())?.circuit;
    let measurement = grid_measurement(&rmap)?.circuit;
    let build_seconds = build_start.elapsed().as_secs_f64();
    let metrics = step.metrics();

    let mut config = SimulationConfig::new(initial, step, measurement);
    config.snapshots = settings.snapshots;
    config.exact = settings.exact;
    config.shots = settings.shots;
    config.seed = settings.seed;
    let result = run(&config, settings.steps)?;

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut files = vec![COUNTS_FILE.to_string()];
    let per_step: Vec<_> = result.steps.iter().map(|r| (r.step, &r.counts)).collect();
    write_counts_csv(&out.join(COUNTS_FILE), spec.num_dims(), &per_step)?;
    for rec in &result.steps {
        files.push(write_density(out, rec.step, &rec.counts.values, spec.dims())?);
    }
    fs::write(out.join(GEOMETRY_FILE), export_stl(spec.blocks()))?;
    files.push(GEOMETRY_FILE.to_string());

    let manifest = Manifest {
        settings: settings.clone(),
        counters: Counters {
            qubits: rmap.total_qubits(),
            step_gate_count: metrics.gate_count,
            step_depth: metrics.depth,
            step_applications: result.steps.iter().map(|r| r.applications).collect(),
            total_applications: result.total_applications(),
            statevector_copies: result.copies,
        },
        timings: Timings {
            build_seconds,
            step_seconds: result.steps.iter().map(|r| r.wall_time.as_secs_f64()).collect(),
            total_seconds: total_start.elapsed().as_secs_f64(),
        },
        files,
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(out.join(MANIFEST_FILE), text + "\n")?;
    Ok(manifest)
}
