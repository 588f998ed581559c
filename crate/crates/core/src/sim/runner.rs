//! Multi-step execution: naive re-execution, statevector snapshots, and the
//! reinitialization hook between steps.

use super::sampling::{sample, Counts, CountsMode};
use super::statevector::{SimError, Statevector};
use crate::circuit::Circuit;
use std::time::{Duration, Instant};

/// Tolerated deviation of the squared norm from 1 before a run aborts.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub initial: Circuit,
    pub step: Circuit,
    pub postprocess: Circuit,
    pub measurement: Circuit,
    /// Reuse the evolved state between steps instead of re-running from
    /// the initial conditions.
    pub snapshots: bool,
    /// Read counts straight from the evolving state when no postprocessing
    /// needs a scratch copy.
    pub sampling: bool,
    pub exact: bool,
    pub shots: u64,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn new(initial: Circuit, step: Circuit, measurement: Circuit) -> Self {
        let n = step.num_qubits();
        Self {
            initial,
            step,
            postprocess: Circuit::flat("postprocess", n),
            measurement,
            snapshots: true,
            sampling: true,
            exact: true,
            shots: 1024,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        let n = self.step.num_qubits();
        for c in [&self.initial, &self.postprocess, &self.measurement] {
            if c.num_qubits() != n {
                return Err(SimError::QubitCountMismatch {
                    circuit: c.num_qubits(),
                    state: n,
                });
            }
        }
        for c in [&self.initial, &self.step, &self.postprocess] {
            if c.has_measurements() {
                return Err(SimError::InvalidConfig(format!(
                    "circuit `{}` contains measurements; only the measurement circuit may",
                    c.name()
                )));
            }
        }
        if !self.measurement.gates().iter().all(|g| g.is_measure()) {
            return Err(SimError::InvalidConfig(
                "the measurement circuit may only contain measurements".into(),
            ));
        }
        if !self.exact && self.shots == 0 {
            return Err(SimError::InvalidConfig("shots must be positive".into()));
        }
        Ok(())
    }

    /// Measured qubits grouped by owning register, in register order.
    pub fn measured_groups(&self) -> Vec<Vec<usize>> {
        let measured: Vec<usize> = self
            .measurement
            .gates()
            .iter()
            .map(|g| g.targets[0])
            .collect();
        let rmap = self.measurement.register_map();
        let mut groups = Vec::new();
        for r in rmap.registers() {
            let group: Vec<usize> = r.range.clone().filter(|q| measured.contains(q)).collect();
            if !group.is_empty() {
                groups.push(group);
            }
        }
        groups
    }

    fn counts_mode(&self, step: usize) -> CountsMode {
        if self.exact {
            CountsMode::Exact
        } else {
            CountsMode::Sampled {
                seed: self.seed.wrapping_add(step as u64),
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepRecord {
    /// 1-based step number.
    pub step: usize,
    pub counts: Counts,
    pub wall_time: Duration,
    /// Step-circuit applications spent producing this step.
    pub applications: usize,
    /// Squared norm of the state the counts were read from.
    pub norm_sqr: f64,
}

#[derive(Debug, Clone)]
pub struct TimeSeriesResult {
    pub steps: Vec<StepRecord>,
    /// Statevector copies made for postprocessing.
    pub copies: usize,
    pub final_state: Option<Statevector>,
}

impl TimeSeriesResult {
    pub fn total_applications(&self) -> usize {
        self.steps.iter().map(|s| s.applications).sum()
    }

    pub fn total_wall_time(&self) -> Duration {
        self.steps.iter().map(|s| s.wall_time).sum()
    }
}

/// What the next step starts from.
pub enum Reinitialized {
    State(Statevector),
    /// Circuit preparing the next state from |0…0⟩.
    Circuit(Circuit),
}

pub trait Reinitializer {
    fn reinitialize(&self, state: Statevector, counts: &Counts) -> Reinitialized;
}

/// The transport method keeps evolving its own state; counts are ignored.
pub fn reinitialize_qtm(state: Statevector, _counts: &Counts) -> Statevector {
    state
}

#[derive(Debug, Clone, Copy, Default)]
pub struct QtmReinitializer;

impl Reinitializer for QtmReinitializer {
    fn reinitialize(&self, state: Statevector, counts: &Counts) -> Reinitialized {
        Reinitialized::State(reinitialize_qtm(state, counts))
    }
}

fn check_norm(psi: &Statevector) -> Result<f64, SimError> {
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > NORM_DRIFT_TOLERANCE {
        return Err(SimError::NormDrift {
            norm,
            tolerance: NORM_DRIFT_TOLERANCE,
        });
    }
    Ok(norm)
}

pub fn run(config: &SimulationConfig, steps: usize) -> Result<TimeSeriesResult, SimError> {
    run_with(config, steps, &QtmReinitializer)
}

pub fn run_with(
    config: &SimulationConfig,
    steps: usize,
    reinitializer: &dyn Reinitializer,
) -> Result<TimeSeriesResult, SimError> {
    config.validate()?;
    let groups = config.measured_groups();
    let n = config.step.num_qubits();
    let mut records = Vec::with_capacity(steps);
    let mut copies = 0;
    if !config.snapshots {
        for k in 1..=steps {
            let start = Instant::now();
            let mut psi = Statevector::zero(n);
            psi.apply(&config.initial)?;
            for _ in 0..k {
                psi.apply(&config.step)?;
            }
            psi.apply(&config.postprocess)?;
            let norm_sqr = check_norm(&psi)?;
            let counts = sample(&psi, &groups, config.shots, config.counts_mode(k));
            records.push(StepRecord {
                step: k,
                counts,
                wall_time: start.elapsed(),
                applications: k,
                norm_sqr,
            });
        }
        return Ok(TimeSeriesResult {
            steps: records,
            copies,
            final_state: None,
        });
    }

    let mut psi = Statevector::zero(n);
    psi.apply(&config.initial)?;
    for k in 1..=steps {
        let start = Instant::now();
        psi.apply(&config.step)?;
        let norm_sqr = check_norm(&psi)?;
        let counts = if config.sampling && config.postprocess.is_empty() {
            sample(&psi, &groups, config.shots, config.counts_mode(k))
        } else {
            copies += 1;
            let mut scratch = psi.clone();
            scratch.apply(&config.postprocess)?;
            check_norm(&scratch)?;
            sample(&scratch, &groups, config.shots, config.counts_mode(k))
        };
        psi = match reinitializer.reinitialize(psi, &counts) {
            Reinitialized::State(s) => s,
            Reinitialized::Circuit(c) => {
                let mut s = Statevector::zero(n);
                s.apply(&c)?;
                s
            }
        };
        if psi.num_qubits() != n {
            return Err(SimError::QubitCountMismatch {
                circuit: n,
                state: psi.num_qubits(),
            });
        }
        records.push(StepRecord {
            step: k,
            counts,
            wall_time: start.elapsed(),
            applications: 1,
            norm_sqr,
        });
    }
    Ok(TimeSeriesResult {
        steps: records,
        copies,
        final_state: Some(psi),
    })
}
