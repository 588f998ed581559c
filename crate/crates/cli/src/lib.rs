//! Command-line workbench: validate lattices, build and lower circuits, run
//! simulations, export results and sweep benchmarks.

pub mod bench;
pub mod output;
pub mod simulate;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qlbw_core::components::{
    bounceback_reflection_operator, cqlbm_step, grid_measurement, initial_conditions, specular_reflection_operator,
    streaming_operator,
};
use qlbw_core::lowering::is_basis;
use qlbw_core::{
    compile_report, export_stl, lower, optimize, parse_lattice, reflection_data, register_layout, Circuit,
    InitialCondition, LatticeSpec,
};
use serde_json::json;
use simulate::{read_manifest, InitSpec, RunSettings, GEOMETRY_FILE};
use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "qlbw", version, about = "Quantum transport method workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComponentArg {
    Step,
    Initial,
    Streaming,
    Specular,
    Bounceback,
    Measurement,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a lattice file and report its register layout.
    Validate { lattice: PathBuf },
    /// Assemble a circuit component and report its metrics.
    Build {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, value_enum, default_value = "step")]
        component: ComponentArg,
        /// Write the gate listing here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Lower a component to {U, CX} and report compile metrics.
    Lower {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, value_enum, default_value = "step")]
        component: ComponentArg,
        #[arg(long, default_value_t = 1)]
        level: u8,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Run a time series and write counts, densities, geometry and a manifest.
    Simulate {
        #[arg(long, required_unless_present = "manifest", conflicts_with = "manifest")]
        lattice: Option<PathBuf>,
        /// Replay the settings recorded in a previous run's manifest.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, default_value_t = 1024)]
        shots: u64,
        /// Exact probabilities instead of sampled counts.
        #[arg(long)]
        exact: bool,
        /// Re-run every step from the initial state.
        #[arg(long)]
        no_snapshots: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start from one population at this cell, e.g. `3,4`.
        #[arg(long, value_delimiter = ',', requires = "velocity")]
        point: Option<Vec<usize>>,
        /// Signed velocity of the point source, e.g. `1,-2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "point")]
        velocity: Option<Vec<i64>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep obstacle counts and grid sizes, one CSV row per configuration.
    Bench {
        #[arg(long, value_enum)]
        suite: bench::Suite,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "16")]
        grids: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        velocities: usize,
        #[arg(long, default_value_t = 6)]
        max_obstacles: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Write the obstacle STL and, given a counts CSV, one VTK file per step.
    Export {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        counts: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_lattice(path: &Path) -> Result<LatticeSpec> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_lattice(&bytes).with_context(|| format!("invalid lattice {}", path.display()))
}

pub fn component_circuit(spec: &LatticeSpec, which: ComponentArg) -> Result<Circuit> {
    let rmap = register_layout(spec);
    let data = reflection_data(spec);
    let component = match which {
        ComponentArg::Step => cqlbm_step(spec, &rmap, &data)?,
        ComponentArg::Initial => {
            let init = if spec.blocks().iter().all(|b| b.lo(0) >= spec.dims()[0] / 2) {
                InitialCondition::LeftHalfUniform
            } else {
                InitialCondition::PointSource {
                    position: vec![0; spec.num_dims()],
                    velocity: vec![1; spec.num_dims()],
                }
            };
            initial_conditions(spec, &rmap, &init)?
        }
        ComponentArg::Streaming => {
            let all: BTreeSet<usize> = (1..=spec.max_magnitude()).collect();
            streaming_operator(spec, &rmap, &all)?
        }
        ComponentArg::Specular => specular_reflection_operator(spec, &rmap, &data)?,
        ComponentArg::Bounceback => bounceback_reflection_operator(spec, &rmap, &data)?,
        ComponentArg::Measurement => grid_measurement(&rmap)?,
    };
    Ok(component.circuit)
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Validate { lattice } => {
            let spec = load_lattice(&lattice)?;
            let rmap = register_layout(&spec);
            let registers: Vec<_> = rmap
                .registers()
                .iter()
                .map(|r| json!({ "name": r.name, "qubits": [r.range.start, r.range.end] }))
                .collect();
            print_json(
                out,
                &json!({
                    "valid": true,
                    "dims": spec.dims(),
                    "velocities": spec.velocities(),
                    "blocks": spec.blocks().len(),
                    "qubits": rmap.total_qubits(),
                    "registers": registers,
                }),
            )
        }
        Command::Build { lattice, component, dump } => {
            let spec = load_lattice(&lattice)?;
            let c = component_circuit(&spec, component)?;
            if let Some(path) = dump {
                fs::write(&path, c.dump()).with_context(|| format!("writing {}", path.display()))?;
            }
            let m = c.metrics();
            print_json(
                out,
                &json!({
                    "component": c.name(),
                    "qubits": c.num_qubits(),
                    "gate_count": m.gate_count,
                    "depth": m.depth,
                    "per_kind_counts": m.per_kind_counts,
                }),
            )
        }
        Command::Lower { lattice, component, level, dump } => {
            if level > 1 {
                bail!("optimization level {level} is not supported (0 or 1)");
            }
            let spec = load_lattice(&lattice)?;
            let c = component_circuit(&spec, component)?;
            let lowered = optimize(&lower(&c)?, level);
            if let Some(path) = dump {
                fs::write(&path, lowered.dump()).with_context(|| format!("writing {}", path.display()))?;
            }
            let m = lowered.metrics();
            let report = compile_report(&c)?;
            print_json(
                out,
                &json!({
                    "component": c.name(),
                    "level": level,
                    "qubits": c.num_qubits(),
                    "ir_gate_count": c.len(),
                    "lowered_gate_count": m.gate_count,
                    "lowered_depth": m.depth,
                    "per_kind_counts": m.per_kind_counts,
                    "basis_only": is_basis(&lowered),
                    "compile_seconds": report.compile_wall_time.as_secs_f64(),
                }),
            )
        }
        Command::Simulate {
            lattice,
            manifest,
            steps,
            shots,
            exact,
            no_snapshots,
            seed,
            point,
            velocity,
            out: dir,
        } => {
            let settings = match (lattice, manifest) {
                (_, Some(m)) => read_manifest(&m)?.settings,
                (Some(l), None) => {
                    let spec = load_lattice(&l)?;
                    let init = match (point, velocity) {
                        (Some(position), Some(velocity)) => InitSpec::PointSource { position, velocity },
                        _ => InitSpec::LeftHalfUniform,
                    };
                    if shots == 0 && !exact {
                        bail!("--shots must be at least 1");
                    }
                    RunSettings::new(&spec, init, steps, shots, exact, !no_snapshots, seed)
                }
                (None, None) => bail!("either --lattice or --manifest is required"),
            };
            let settings = settings.with_env_seed()?;
            let manifest = simulate::simulate(&settings, &dir)?;
            print_json(
                out,
                &json!({
                    "out": dir,
                    "steps": manifest.settings.steps,
                    "seed": manifest.settings.seed,
                    "total_applications": manifest.counters.total_applications,
                    "files": manifest.files.len() + 1,
                }),
            )
        }
        Command::Bench {
            suite,
            out: path,
            grids,
            velocities,
            max_obstacles,
            steps,
            threads,
        } => {
            let opts = bench::SweepOptions {
                grids,
                velocities,
                max_obstacles,
                steps,
                threads: threads.max(1),
            };
            let rows = bench::run_suite(suite, &opts, &path)?;
            print_json(out, &json!({ "suite": format!("{suite:?}").to_lowercase(), "rows": rows, "out": path }))
        }
        Command::Export { lattice, counts, out: dir } => {
            let spec = load_lattice(&lattice)?;
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            fs::write(dir.join(GEOMETRY_FILE), export_stl(spec.blocks()))?;
            let mut files = vec![GEOMETRY_FILE.to_string()];
            if let Some(path) = counts {
                for (step, density) in output::read_counts_csv(&path, spec.num_dims())? {
                    files.push(output::write_density(&dir, step, &density, spec.dims())?);
                }
            }
            print_json(out, &json!({ "out": dir, "files": files }))
        }
    }
}
