//! Lattice configuration: grid extents, discrete velocities and cuboid obstacles.
//!
//! The JSON layout is
//!
//! ```json
//! {
//!   "lattice": { "dim": { "x": 16, "y": 16 }, "velocities": { "x": 4, "y": 4 } },
//!   "geometry": [ { "x": [9, 12], "y": [3, 6], "boundary": "specular" } ]
//! }
//! ```
//!
//! `z` keys are present iff the lattice is three dimensional.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

/// Minimum number of fluid grid points required between two obstacles in at
/// least one dimension.
pub const MIN_BLOCK_GAP: usize = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    MalformedJson {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: unknown boundary kind `{kind}` (expected `specular` or `bounceback`)")]
    UnknownBoundaryKind { field: String, kind: String },
    #[error("{field}: interval [{lo}, {hi}] is not inside [0, {extent})")]
    BoundsOutOfRange {
        field: String,
        lo: i64,
        hi: i64,
        extent: usize,
    },
    #[error("{field}: block touches the periodic domain edge (needs 1 <= lo and hi <= {max_hi})")]
    TouchesDomainEdge { field: String, max_hi: usize },
    #[error("geometry[{first}] and geometry[{second}] are separated by fewer than {MIN_BLOCK_GAP} grid points in every dimension")]
    SeparationViolation { first: usize, second: usize },
    #[error("{field}: {value} is not a power of two")]
    NonPowerOfTwoExtent { field: String, value: usize },
    #[error("{field}: {message}")]
    InvalidShape { field: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Specular,
    #[serde(rename = "bounceback")]
    BounceBack,
}

impl BoundaryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryKind::Specular => "specular",
            BoundaryKind::BounceBack => "bounceback",
        }
    }
}

/// Axis-aligned cuboid obstacle with inclusive per-dimension bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub bounds: Vec<(usize, usize)>,
    pub boundary: BoundaryKind,
}

impl Block {
    pub fn new(bounds: Vec<(usize, usize)>, boundary: BoundaryKind) -> Self {
        Self { bounds, boundary }
    }

    pub fn contains(&self, position: &[usize]) -> bool {
        self.bounds
            .iter()
            .zip(position)
            .all(|(&(lo, hi), &p)| lo <= p && p <= hi)
    }

    pub fn lo(&self, dim: usize) -> usize {
        self.bounds[dim].0
    }

    pub fn hi(&self, dim: usize) -> usize {
        self.bounds[dim].1
    }

    /// Number of fluid points strictly between `self` and `other` along `dim`,
    /// or `None` if the intervals overlap.
    fn gap(&self, other: &Block, dim: usize) -> Option<usize> {
        let (a_lo, a_hi) = self.bounds[dim];
        let (b_lo, b_hi) = other.bounds[dim];
        if b_lo > a_hi {
            Some(b_lo - a_hi - 1)
        } else if a_lo > b_hi {
            Some(a_lo - b_hi - 1)
        } else {
            None
        }
    }

    pub fn is_separated_from(&self, other: &Block) -> bool {
        (0..self.bounds.len()).any(|k| self.gap(other, k).is_some_and(|g| g >= MIN_BLOCK_GAP))
    }
}

/// A validated lattice definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    dims: Vec<usize>,
    velocities: Vec<usize>,
    blocks: Vec<Block>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lattice: RawLattice,
    geometry: Vec<BTreeMap<String, serde_json::Value>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    dim: RawAxes,
    velocities: RawAxes,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxes {
    x: usize,
    y: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<usize>,
}

impl RawAxes {
    fn to_vec(&self) -> Vec<usize> {
        let mut v = vec![self.x, self.y];
        v.extend(self.z);
        v
    }

    fn from_slice(values: &[usize]) -> Self {
        Self {
            x: values[0],
            y: values[1],
            z: values.get(2).copied(),
        }
    }
}

/// Parses and validates a lattice configuration.
pub fn parse_lattice(json_text: &[u8]) -> Result<LatticeSpec, LatticeError> {
    let raw: RawConfig = serde_json::from_slice(json_text).map_err(|e| LatticeError::MalformedJson {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let dims = raw.lattice.dim.to_vec();
    let velocities = raw.lattice.velocities.to_vec();
    if dims.len() != velocities.len() {
        return Err(LatticeError::InvalidShape {
            field: "lattice.velocities".into(),
            message: format!(
                "has {} axes but lattice.dim has {}",
                velocities.len(),
                dims.len()
            ),
        });
    }
    let mut blocks = Vec::with_capacity(raw.geometry.len());
    for (i, entry) in raw.geometry.iter().enumerate() {
        blocks.push(parse_block(i, entry, &dims)?);
    }
    LatticeSpec::new(dims, velocities, blocks)
}

fn parse_block(
    index: usize,
    entry: &BTreeMap<String, serde_json::Value>,
    dims: &[usize],
) -> Result<Block, LatticeError> {
    let d = dims.len();
    let prefix = format!("geometry[{index}]");
    for key in entry.keys() {
        let known = key == "boundary" || AXIS_NAMES[..d].contains(&key.as_str());
        if !known {
            return Err(LatticeError::InvalidShape {
                field: format!("{prefix}.{key}"),
                message: "unexpected key".into(),
            });
        }
    }
    let boundary = match entry.get("boundary") {
        Some(serde_json::Value::String(s)) => match s.as_str() {
            "specular" => BoundaryKind::Specular,
            "bounceback" => BoundaryKind::BounceBack,
            other => {
                return Err(LatticeError::UnknownBoundaryKind {
                    field: format!("{prefix}.boundary"),
                    kind: other.to_string(),
                })
            }
        },
        Some(other) => {
            return Err(LatticeError::UnknownBoundaryKind {
                field: format!("{prefix}.boundary"),
                kind: other.to_string(),
            })
        }
        None => {
            return Err(LatticeError::InvalidShape {
                field: format!("{prefix}.boundary"),
                message: "missing".into(),
            })
        }
    };
    let mut bounds = Vec::with_capacity(d);
    for (k, axis) in AXIS_NAMES[..d].iter().enumerate() {
        let field = format!("{prefix}.{axis}");
        let pair = entry
            .get(*axis)
            .and_then(|v| v.as_array())
            .filter(|a| a.len() == 2)
            .ok_or_else(|| LatticeError::InvalidShape {
                field: field.clone(),
                message: "expected a two-element integer array [lo, hi]".into(),
            })?;
        let as_int = |v: &serde_json::Value| {
            v.as_i64().ok_or_else(|| LatticeError::InvalidShape {
                field: field.clone(),
                message: format!("`{v}` is not an integer"),
            })
        };
        let lo = as_int(&pair[0])?;
        let hi = as_int(&pair[1])?;
        if lo < 0 || hi < lo {
            return Err(LatticeError::BoundsOutOfRange {
                field,
                lo,
                hi,
                extent: dims[k],
            });
        }
        bounds.push((lo as usize, hi as usize));
    }
    Ok(Block::new(bounds, boundary))
}

impl LatticeSpec {
    /// Validates and builds a lattice from already-decoded parts.
    pub fn new(
        dims: Vec<usize>,
        velocities: Vec<usize>,
        blocks: Vec<Block>,
    ) -> Result<Self, LatticeError> {
        let d = dims.len();
        if !(2..=3).contains(&d) || velocities.len() != d {
            return Err(LatticeError::InvalidShape {
                field: "lattice.dim".into(),
                message: format!("expected 2 or 3 dimensions, got {d}"),
            });
        }
        for (k, &n) in dims.iter().enumerate() {
            if n < 2 || !n.is_power_of_two() {
                return Err(LatticeError::NonPowerOfTwoExtent {
                    field: format!("lattice.dim.{}", AXIS_NAMES[k]),
                    value: n,
                });
            }
        }
        for (k, &v) in velocities.iter().enumerate() {
            if v < 2 || !v.is_power_of_two() {
                return Err(LatticeError::NonPowerOfTwoExtent {
                    field: format!("lattice.velocities.{}", AXIS_NAMES[k]),
                    value: v,
                });
            }
            if v != velocities[0] {
                return Err(LatticeError::InvalidShape {
                    field: format!("lattice.velocities.{}", AXIS_NAMES[k]),
                    message: "all dimensions must use the same number of discrete velocities"
                        .into(),
                });
            }
        }
        for (i, block) in blocks.iter().enumerate() {
            if block.bounds.len() != d {
                return Err(LatticeError::InvalidShape {
                    field: format!("geometry[{i}]"),
                    message: format!("expected {d} intervals, got {}", block.bounds.len()),
                });
            }
            for (k, &(lo, hi)) in block.bounds.iter().enumerate() {
                let field = format!("geometry[{i}].{}", AXIS_NAMES[k]);
                if lo > hi || hi >= dims[k] {
                    return Err(LatticeError::BoundsOutOfRange {
                        field,
                        lo: lo as i64,
                        hi: hi as i64,
                        extent: dims[k],
                    });
                }
                if lo == 0 || hi + 1 >= dims[k] {
                    return Err(LatticeError::TouchesDomainEdge {
                        field,
                        max_hi: dims[k].saturating_sub(2),
                    });
                }
            }
        }
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if !blocks[i].is_separated_from(&blocks[j]) {
                    return Err(LatticeError::SeparationViolation {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self {
            dims,
            velocities,
            blocks,
        })
    }

    pub fn num_dims(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn velocities(&self) -> &[usize] {
        &self.velocities
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn blocks_of(&self, kind: BoundaryKind) -> Vec<&Block> {
        self.blocks.iter().filter(|b| b.boundary == kind).collect()
    }

    /// Grid qubits in dimension `k`.
    pub fn grid_bits(&self, k: usize) -> usize {
        self.dims[k].trailing_zeros() as usize
    }

    /// Largest velocity magnitude, i.e. the number of CFL substeps per step.
    pub fn max_magnitude(&self) -> usize {
        self.velocities[0] / 2
    }

    /// Qubits encoding the magnitude of one velocity component.
    pub fn magnitude_bits(&self) -> usize {
        self.velocities[0].trailing_zeros() as usize - 1
    }

    pub fn only_bounceback(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.boundary == BoundaryKind::BounceBack)
    }

    /// The block containing `position`, if any.
    pub fn block_at(&self, position: &[usize]) -> Option<(usize, &Block)> {
        self.blocks
            .iter()
            .enumerate()
            .find(|(_, b)| b.contains(position))
    }

    pub fn to_json(&self) -> String {
        let geometry = self
            .blocks
            .iter()
            .map(|b| {
                let mut m = BTreeMap::new();
                for (k, &(lo, hi)) in b.bounds.iter().enumerate() {
                    m.insert(AXIS_NAMES[k].to_string(), serde_json::json!([lo, hi]));
                }
                m.insert("boundary".to_string(), serde_json::json!(b.boundary.as_str()));
                m
            })
            .collect();
        let raw = RawConfig {
            lattice: RawLattice {
                dim: RawAxes::from_slice(&self.dims),
                velocities: RawAxes::from_slice(&self.velocities),
            },
            geometry,
        };
        serde_json::to_string_pretty(&raw).expect("lattice serialization cannot fail")
    }
}

/// Square 2D lattice with `obstacles` 2×2 bounce-back blocks on aligned
/// slots (cells 1–2, 5–6, … per axis), filled row by row. Used by the
/// obstacle-count sweeps.
pub fn obstacle_sweep_lattice(grid: usize, velocities: usize, obstacles: usize) -> Result<LatticeSpec, LatticeError> {
    let per_axis = grid / 4;
    if obstacles > per_axis * per_axis {
        return Err(LatticeError::InvalidShape {
            field: "geometry".into(),
            message: format!("a {grid}x{grid} grid has room for {} sweep obstacles, not {obstacles}", per_axis * per_axis),
        });
    }
    let blocks = (0..obstacles)
        .map(|i| {
            let (sx, sy) = (1 + 4 * (i % per_axis), 1 + 4 * (i / per_axis));
            Block::new(vec![(sx, sx + 1), (sy, sy + 1)], BoundaryKind::BounceBack)
        })
        .collect();
    LatticeSpec::new(vec![grid, grid], vec![velocities, velocities], blocks)
}
