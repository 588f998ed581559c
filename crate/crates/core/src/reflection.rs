//! Classical preprocessing of obstacle geometry for the reflection circuits.
//!
//! Directions use the velocity encoding of the circuits: `false` is the
//! positive direction, `true` the negative one.

use crate::lattice::{Block, BoundaryKind, LatticeSpec};

/// A point next to a corner of a block.
///
/// Per dimension, `bound` selects the upper (`true`) or lower surface and
/// `outside` whether the point lies one cell beyond that surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearCornerPoint {
    pub bound: Vec<bool>,
    pub outside: Vec<bool>,
    pub grid_coords: Vec<usize>,
}

impl NearCornerPoint {
    pub fn new(block: &Block, bound: Vec<bool>, outside: Vec<bool>) -> Self {
        let grid_coords = bound
            .iter()
            .zip(&outside)
            .enumerate()
            .map(|(k, (&upper, &out))| match (upper, out) {
                (false, false) => block.lo(k),
                (false, true) => block.lo(k) - 1,
                (true, false) => block.hi(k),
                (true, true) => block.hi(k) + 1,
            })
            .collect();
        Self {
            bound,
            outside,
            grid_coords,
        }
    }
}

/// Per-dimension XOR of `bound` and `outside`.
///
/// For a population launched from the point towards the corner, this is the
/// direction bit it carries once any reflection has been applied: outside
/// dimensions were crossed and reversed, the others keep pointing inwards.
pub fn inversion_vector(p: &NearCornerPoint) -> Vec<bool> {
    p.bound.iter().zip(&p.outside).map(|(b, o)| b ^ o).collect()
}

/// One face of a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallSegment {
    pub normal_dim: usize,
    pub upper: bool,
    /// Coordinate of the obstacle layer forming the face.
    pub wall_coord: usize,
    /// Inclusive extent along every dimension; the normal entry is the wall.
    pub tangential: Vec<(usize, usize)>,
    /// Direction bit of the normal component after reflection off this face.
    pub reflected_direction: bool,
}

/// One edge of a 3D block: parallel to `free_dim`, on the surfaces selected
/// by `bound` in the other two dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSegment {
    pub free_dim: usize,
    pub bound: Vec<bool>,
    pub range: (usize, usize),
}

/// Where a launch coordinate sits relative to a block in one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// One cell beyond the lower (`upper == false`) or upper surface.
    Outside { upper: bool },
    /// On the lower or upper obstacle layer.
    AtBound { upper: bool },
    /// Strictly between the two obstacle layers.
    Interior,
}

/// A set of launch points sharing one placement per dimension, with at least
/// one `Outside` dimension. Populations reflected off a block come from
/// exactly these regions, which the reset logic enumerates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResetRegion {
    pub placements: Vec<Placement>,
}

impl ResetRegion {
    /// Inclusive launch coordinates in dimension `k`, possibly empty.
    pub fn coords(&self, block: &Block, k: usize) -> (usize, usize) {
        let (lo, hi) = block.bounds[k];
        match self.placements[k] {
            Placement::Outside { upper: false } => (lo - 1, lo - 1),
            Placement::Outside { upper: true } => (hi + 1, hi + 1),
            Placement::AtBound { upper: false } => (lo, lo),
            Placement::AtBound { upper: true } => (hi, hi),
            Placement::Interior => (lo + 1, hi - 1),
        }
    }

    pub fn outside_dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.placements
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Placement::Outside { .. }))
            .map(|(k, _)| k)
    }

    /// Direction bit carried after reflection in each non-interior
    /// dimension, from the near-corner inversion vector of the region.
    pub fn directions(&self) -> Vec<Option<bool>> {
        let flags = |f: fn(&Placement) -> bool| self.placements.iter().map(f).collect();
        let point = NearCornerPoint {
            bound: flags(|p| {
                matches!(
                    p,
                    Placement::Outside { upper: true } | Placement::AtBound { upper: true }
                )
            }),
            outside: flags(|p| matches!(p, Placement::Outside { .. })),
            grid_coords: Vec::new(),
        };
        inversion_vector(&point)
            .into_iter()
            .zip(&self.placements)
            .map(|(v, p)| (*p != Placement::Interior).then_some(v))
            .collect()
    }

    /// The near-corner point this region reduces to when no dimension is
    /// interior.
    pub fn near_corner_point(&self, block: &Block) -> Option<NearCornerPoint> {
        let mut bound = Vec::new();
        let mut outside = Vec::new();
        for p in &self.placements {
            match *p {
                Placement::Outside { upper } => {
                    bound.push(upper);
                    outside.push(true);
                }
                Placement::AtBound { upper } => {
                    bound.push(upper);
                    outside.push(false);
                }
                Placement::Interior => return None,
            }
        }
        Some(NearCornerPoint::new(block, bound, outside))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockReflection {
    pub block_index: usize,
    pub block: Block,
    pub walls: Vec<WallSegment>,
    pub edges: Vec<EdgeSegment>,
    /// Bound flags of every corner.
    pub corners: Vec<Vec<bool>>,
    pub near_corner_points: Vec<NearCornerPoint>,
    pub reset_regions: Vec<ResetRegion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReflectionData {
    pub blocks: Vec<BlockReflection>,
}

impl ReflectionData {
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn of_kind(&self, kind: BoundaryKind) -> impl Iterator<Item = &BlockReflection> {
        self.blocks.iter().filter(move |b| b.block.boundary == kind)
    }
}

/// All bit vectors of length `d`, in counting order with bit k = entry k.
fn bit_vectors(d: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1usize << d).map(move |m| (0..d).map(|k| m >> k & 1 == 1).collect())
}

fn placements_for(block: &Block, k: usize) -> Vec<Placement> {
    let (lo, hi) = block.bounds[k];
    let mut out = vec![
        Placement::Outside { upper: false },
        Placement::Outside { upper: true },
        Placement::AtBound { upper: false },
    ];
    if hi > lo {
        out.push(Placement::AtBound { upper: true });
    }
    if hi - lo >= 2 {
        out.push(Placement::Interior);
    }
    out
}

fn reset_regions(block: &Block) -> Vec<ResetRegion> {
    let options: Vec<Vec<Placement>> = (0..block.bounds.len())
        .map(|k| placements_for(block, k))
        .collect();
    let mut regions = vec![Vec::new()];
    for opts in &options {
        regions = regions
            .into_iter()
            .flat_map(|prefix: Vec<Placement>| {
                opts.iter().map(move |&p| {
                    let mut next = prefix.clone();
                    next.push(p);
                    next
                })
            })
            .collect();
    }
    regions
        .into_iter()
        .map(|placements| ResetRegion { placements })
        .filter(|r| r.outside_dims().next().is_some())
        .collect()
}

fn block_reflection(block_index: usize, block: &Block) -> BlockReflection {
    let d = block.bounds.len();
    let mut walls = Vec::with_capacity(2 * d);
    for normal_dim in 0..d {
        for upper in [false, true] {
            let wall_coord = if upper {
                block.hi(normal_dim)
            } else {
                block.lo(normal_dim)
            };
            let mut tangential = block.bounds.clone();
            tangential[normal_dim] = (wall_coord, wall_coord);
            walls.push(WallSegment {
                normal_dim,
                upper,
                wall_coord,
                tangential,
                reflected_direction: !upper,
            });
        }
    }
    let mut edges = Vec::new();
    if d == 3 {
        for free_dim in 0..d {
            for bits in bit_vectors(2) {
                let mut bound = vec![false; d];
                let others = (0..d).filter(|&k| k != free_dim);
                for (k, b) in others.zip(bits) {
                    bound[k] = b;
                }
                edges.push(EdgeSegment {
                    free_dim,
                    bound,
                    range: block.bounds[free_dim],
                });
            }
        }
    }
    let near_corner_points = bit_vectors(d)
        .flat_map(|bound| {
            bit_vectors(d).map(move |outside| NearCornerPoint::new(block, bound.clone(), outside))
        })
        .collect();
    BlockReflection {
        block_index,
        block: block.clone(),
        walls,
        edges,
        corners: bit_vectors(d).collect(),
        near_corner_points,
        reset_regions: reset_regions(block),
    }
}

pub fn reflection_data(spec: &LatticeSpec) -> ReflectionData {
    ReflectionData {
        blocks: spec
            .blocks()
            .iter()
            .enumerate()
            .map(|(i, b)| block_reflection(i, b))
            .collect(),
    }
}
