//! Classical collisionless transport on the same discretization as the
//! circuits, used as ground truth.

use crate::components::substep_schedule;
use crate::lattice::{Block, BoundaryKind, LatticeSpec};
use crate::reflection::NearCornerPoint;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("particle {particle} is still inside an obstacle at {position:?} after reflection")]
    UnresolvableReflection {
        particle: usize,
        position: Vec<usize>,
    },
}

/// A particle with per-dimension signed velocity components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Particle {
    pub position: Vec<usize>,
    pub velocity: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OracleState {
    pub particles: Vec<Particle>,
}

impl OracleState {
    pub fn new(particles: Vec<Particle>) -> Self {
        Self { particles }
    }

    /// One particle per cell with x < dims[0]/2 and per combination of
    /// positive velocity magnitudes.
    pub fn left_half_uniform(spec: &LatticeSpec) -> Self {
        let d = spec.num_dims();
        let q = spec.max_magnitude() as i64;
        let mut cells: Vec<Vec<usize>> = vec![Vec::new()];
        for (k, &n) in spec.dims().iter().enumerate() {
            let end = if k == 0 { n / 2 } else { n };
            cells = cells
                .into_iter()
                .flat_map(|p| {
                    (0..end).map(move |x| {
                        let mut next = p.clone();
                        next.push(x);
                        next
                    })
                })
                .collect();
        }
        let mut velocities: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..d {
            velocities = velocities
                .into_iter()
                .flat_map(|v| {
                    (1..=q).map(move |m| {
                        let mut next = v.clone();
                        next.push(m);
                        next
                    })
                })
                .collect();
        }
        let particles = cells
            .iter()
            .flat_map(|c| {
                velocities.iter().map(move |v| Particle {
                    position: c.clone(),
                    velocity: v.clone(),
                })
            })
            .collect();
        Self { particles }
    }
}

/// Resolves a particle that streamed from `pre` into `block` along the
/// dimensions in `moved`. Specular walls reverse and undo the components
/// whose starting coordinate lay outside the block; bounce-back reverses
/// every component and undoes the whole move.
pub fn reflect(block: &Block, pre: &[usize], moved: &[usize], p: &mut Particle) {
    match block.boundary {
        BoundaryKind::Specular => {
            for &k in moved {
                let (lo, hi) = block.bounds[k];
                if pre[k] < lo || pre[k] > hi {
                    p.velocity[k] = -p.velocity[k];
                    p.position[k] = pre[k];
                }
            }
        }
        BoundaryKind::BounceBack => {
            for v in p.velocity.iter_mut() {
                *v = -*v;
            }
            for &k in moved {
                p.position[k] = pre[k];
            }
        }
    }
}

/// Direction bits (`true` = negative) of a population launched from a
/// near-corner point towards the block, once the specular rule has resolved
/// the move. Blocks need a width of at least two cells for every launch to
/// land inside them.
pub fn near_corner_directions(block: &Block, point: &NearCornerPoint) -> Vec<bool> {
    let velocity: Vec<i64> = point.bound.iter().map(|&upper| if upper { -1 } else { 1 }).collect();
    let pre = &point.grid_coords;
    let position = pre
        .iter()
        .zip(&velocity)
        .map(|(&x, &v)| (x as i64 + v) as usize)
        .collect();
    let mut particle = Particle { position, velocity };
    let specular = Block::new(block.bounds.clone(), BoundaryKind::Specular);
    if specular.contains(&particle.position) {
        let moved: Vec<usize> = (0..pre.len()).collect();
        reflect(&specular, pre, &moved, &mut particle);
    }
    particle.velocity.iter().map(|&v| v < 0).collect()
}

fn substep(
    p: &mut Particle,
    index: usize,
    spec: &LatticeSpec,
    magnitudes: &BTreeSet<usize>,
) -> Result<(), OracleError> {
    let pre = p.position.clone();
    let moved: Vec<usize> = (0..spec.num_dims())
        .filter(|&k| magnitudes.contains(&(p.velocity[k].unsigned_abs() as usize)))
        .collect();
    for &k in &moved {
        let n = spec.dims()[k] as i64;
        p.position[k] = (p.position[k] as i64 + p.velocity[k].signum()).rem_euclid(n) as usize;
    }
    if let Some((_, block)) = spec.block_at(&p.position) {
        reflect(block, &pre, &moved, p);
    }
    if spec.block_at(&p.position).is_some() {
        return Err(OracleError::UnresolvableReflection {
            particle: index,
            position: p.position.clone(),
        });
    }
    Ok(())
}

/// Advances every particle by one time step: per substep, stream the
/// scheduled magnitudes, then reflect anything that entered an obstacle.
pub fn oracle_step(s: &OracleState, spec: &LatticeSpec) -> Result<OracleState, OracleError> {
    let schedule = substep_schedule(spec.max_magnitude());
    let mut next = s.clone();
    for (i, p) in next.particles.iter_mut().enumerate() {
        for magnitudes in &schedule.substeps {
            substep(p, i, spec, magnitudes)?;
        }
    }
    Ok(next)
}

pub fn oracle_density(s: &OracleState) -> BTreeMap<Vec<usize>, usize> {
    let mut out = BTreeMap::new();
    for p in &s.particles {
        *out.entry(p.position.clone()).or_insert(0) += 1;
    }
    out
}

/// Density divided by the particle count.
pub fn normalized_density(s: &OracleState) -> BTreeMap<Vec<usize>, f64> {
    let total = s.particles.len() as f64;
    oracle_density(s)
        .into_iter()
        .map(|(k, v)| (k, v as f64 / total))
        .collect()
}
