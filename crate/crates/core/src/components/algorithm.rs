use super::operators::{
    bounceback_reflection_operator, specular_reflection_operator, streaming_operator,
};
use super::primitives::streaming_ancilla_preparation;
use super::schedule::substep_schedule;
use super::{Component, ComponentError, ComponentKind, Result};
use crate::circuit::{Circuit, Gate};
use crate::lattice::LatticeSpec;
use crate::reflection::ReflectionData;
use crate::registers::RegisterMap;

/// One full time step: per substep, streaming, specular reflection,
/// bounce-back reflection and the velocity-ancilla reset.
pub fn cqlbm_step(
    lattice: &LatticeSpec,
    rmap: &RegisterMap,
    data: &ReflectionData,
) -> Result<Component> {
    let mut c = Circuit::new("cqlbm_step", rmap.clone());
    let specular = specular_reflection_operator(lattice, rmap, data)?.circuit;
    let bounceback = bounceback_reflection_operator(lattice, rmap, data)?.circuit;
    for magnitudes in &substep_schedule(lattice.max_magnitude()).substeps {
        c.append(&streaming_operator(lattice, rmap, magnitudes)?.circuit, None)?;
        c.append(&specular, None)?;
        c.append(&bounceback, None)?;
        for k in 0..lattice.num_dims() {
            let prep = streaming_ancilla_preparation(lattice, rmap, magnitudes, k)?;
            c.append(&prep.circuit, None)?;
        }
    }
    Ok(Component::new(ComponentKind::Algorithm, c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialCondition {
    /// Every cell with x < dims[0]/2, every magnitude, positive directions.
    LeftHalfUniform,
    /// One population at `position` with signed per-dimension velocity.
    PointSource {
        position: Vec<usize>,
        velocity: Vec<i64>,
    },
}

pub fn initial_conditions(
    lattice: &LatticeSpec,
    rmap: &RegisterMap,
    kind: &InitialCondition,
) -> Result<Component> {
    let d = lattice.num_dims();
    let mut c = Circuit::new("initial_conditions", rmap.clone());
    match kind {
        InitialCondition::LeftHalfUniform => {
            // Superposed cells overlapping an obstacle would start inside it.
            let half = lattice.dims()[0] / 2;
            if lattice.blocks().iter().any(|b| b.lo(0) < half) {
                return Err(ComponentError::InvalidInitialCondition(
                    "an obstacle overlaps the left half of the domain".into(),
                ));
            }
            for k in 0..d {
                let grid = rmap.grid(k).qubits();
                let skip_msb = usize::from(k == 0);
                for &q in &grid[..grid.len() - skip_msb] {
                    c.push(Gate::h(q))?;
                }
            }
            for k in 0..d {
                for q in rmap.vel_mag(k).qubits() {
                    c.push(Gate::h(q))?;
                }
            }
        }
        InitialCondition::PointSource { position, velocity } => {
            if position.len() != d || velocity.len() != d {
                return Err(ComponentError::InvalidInitialCondition(format!(
                    "expected {d} coordinates and velocity components"
                )));
            }
            for (k, (&p, &n)) in position.iter().zip(lattice.dims()).enumerate() {
                if p >= n {
                    return Err(ComponentError::InvalidInitialCondition(format!(
                        "coordinate {p} outside dimension {k} of extent {n}"
                    )));
                }
            }
            if lattice.block_at(position).is_some() {
                return Err(ComponentError::PositionInsideObstacle(position.clone()));
            }
            let max = lattice.max_magnitude();
            for (k, &v) in velocity.iter().enumerate() {
                let magnitude = v.unsigned_abs() as usize;
                if magnitude == 0 || magnitude > max {
                    return Err(ComponentError::InvalidMagnitude { magnitude, max });
                }
                for (bit, q) in rmap.grid(k).qubits().into_iter().enumerate() {
                    if position[k] >> bit & 1 == 1 {
                        c.push(Gate::x(q))?;
                    }
                }
                for (bit, q) in rmap.vel_mag(k).qubits().into_iter().enumerate() {
                    if (magnitude - 1) >> bit & 1 == 1 {
                        c.push(Gate::x(q))?;
                    }
                }
                if v < 0 {
                    c.push(Gate::x(rmap.vel_dir(k)))?;
                }
            }
        }
    }
    Ok(Component::new(ComponentKind::Algorithm, c))
}

/// Measures every grid qubit.
pub fn grid_measurement(rmap: &RegisterMap) -> Result<Component> {
    let mut c = Circuit::new("grid_measurement", rmap.clone());
    for q in rmap.grid_qubits() {
        c.push(Gate::measure(q))?;
    }
    Ok(Component::new(ComponentKind::Algorithm, c))
}
