use super::primitives::{
    check_magnitudes, push_box_flip, push_incrementer, push_marking, RangeCond,
};
use super::{Component, ComponentKind, Result};
use crate::circuit::{Circuit, CircuitError, Control, Gate};
use crate::lattice::{Block, BoundaryKind, LatticeSpec};
use crate::reflection::{BlockReflection, Placement, ReflectionData};
use crate::registers::RegisterMap;
use std::collections::BTreeSet;

type CircuitResult = std::result::Result<(), CircuitError>;

pub fn streaming_operator(
    lattice: &LatticeSpec,
    rmap: &RegisterMap,
    magnitudes: &BTreeSet<usize>,
) -> Result<Component> {
    check_magnitudes(lattice, magnitudes)?;
    let mut c = Circuit::new("streaming", rmap.clone());
    if !magnitudes.is_empty() {
        for k in 0..lattice.num_dims() {
            push_marking(&mut c, rmap, magnitudes, k)?;
            let av = Control::on(rmap.anc_vel(k));
            push_incrementer(&mut c, &rmap.grid(k).qubits(), rmap.vel_dir(k), &[av])?;
        }
    }
    Ok(Component::new(ComponentKind::Operator, c))
}

/// ac[j] ^= [grid_j ∈ block] for each `j` in `dims`.
fn push_in_block(c: &mut Circuit, rmap: &RegisterMap, block: &Block, dims: &[usize]) -> CircuitResult {
    let ac = rmap.anc_comparator();
    for &j in dims {
        let grid = rmap.grid(j).qubits();
        let (lo, hi) = block.bounds[j];
        push_box_flip(c, &[RangeCond { qubits: &grid, lo, hi }], &[], ac.qubit(j))?;
    }
    Ok(())
}

/// Flips `target` where stepping back one cell along the current velocity
/// (for components that streamed) lands inside `block` in dimension `j`.
fn push_stepped_back_inside(
    c: &mut Circuit,
    rmap: &RegisterMap,
    block: &Block,
    j: usize,
    extra: &[Control],
    target: usize,
) -> CircuitResult {
    let grid = rmap.grid(j).qubits();
    let (lo, hi) = block.bounds[j];
    let av = rmap.anc_vel(j);
    let dir = rmap.vel_dir(j);
    let cases = [
        (vec![Control::off(av)], lo, hi),
        (vec![Control::on(av), Control::off(dir)], lo + 1, hi + 1),
        (vec![Control::on(av), Control::on(dir)], lo - 1, hi - 1),
    ];
    for (controls, lo, hi) in cases {
        let mut all = extra.to_vec();
        all.extend(controls);
        push_box_flip(c, &[RangeCond { qubits: &grid, lo, hi }], &all, target)?;
    }
    Ok(())
}

/// Per-dimension options for the reset of one region: launch range, whether
/// the component streamed, and its direction bit when it did.
fn region_motions(block: &Block, k: usize, placement: Placement, direction: Option<bool>) -> Vec<(usize, usize, bool, Option<bool>)> {
    let (lo, hi) = block.bounds[k];
    match placement {
        Placement::Outside { upper } => {
            let p = if upper { hi + 1 } else { lo - 1 };
            vec![(p, p, true, direction)]
        }
        Placement::AtBound { upper } => {
            let p = if upper { hi } else { lo };
            let mut out = vec![(p, p, false, None)];
            if hi > lo {
                let inward = if upper { p - 1 } else { p + 1 };
                out.push((inward, inward, true, direction));
            }
            out
        }
        Placement::Interior => vec![
            (lo + 1, hi - 1, false, None),
            (lo + 2, hi, true, Some(false)),
            (lo, hi - 2, true, Some(true)),
        ],
    }
}

/// Clears the obstacle flags of reflected populations. A region's flags are
/// the dimensions in which it lies outside the block; the population there
/// must carry the region's inversion-vector directions.
fn push_specular_reset(c: &mut Circuit, rmap: &RegisterMap, br: &BlockReflection) -> CircuitResult {
    let block = &br.block;
    let d = block.bounds.len();
    let grids: Vec<Vec<usize>> = (0..d).map(|k| rmap.grid(k).qubits()).collect();
    let ao = rmap.anc_obstacle();
    for region in &br.reset_regions {
        let directions = region.directions();
        let options: Vec<_> = (0..d)
            .map(|k| region_motions(block, k, region.placements[k], directions[k]))
            .collect();
        let targets: Vec<usize> = region.outside_dims().map(|k| ao.qubit(k)).collect();
        let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
        for opts in &options {
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    (0..opts.len()).map(move |i| {
                        let mut next = prefix.clone();
                        next.push(i);
                        next
                    })
                })
                .collect();
        }
        for choice in combos {
            let mut ranges = Vec::with_capacity(d);
            let mut extra = Vec::new();
            for k in 0..d {
                let (lo, hi, moved, dir) = options[k][choice[k]];
                ranges.push(RangeCond {
                    qubits: &grids[k],
                    lo,
                    hi,
                });
                extra.push(Control::when(rmap.anc_vel(k), moved));
                if let Some(dir) = dir {
                    extra.push(Control::when(rmap.vel_dir(k), dir));
                }
            }
            for &t in &targets {
                push_box_flip(c, &ranges, &extra, t)?;
            }
        }
    }
    Ok(())
}

fn push_specular_block(c: &mut Circuit, rmap: &RegisterMap, br: &BlockReflection) -> CircuitResult {
    let block = &br.block;
    let d = block.bounds.len();
    let all: Vec<usize> = (0..d).collect();
    let ac = rmap.anc_comparator();
    let ao = rmap.anc_obstacle();

    // Flag the dimensions whose block face was crossed in this substep.
    push_in_block(c, rmap, block, &all)?;
    for k in 0..d {
        let grid = rmap.grid(k).qubits();
        for (negative, face) in [(false, block.lo(k)), (true, block.hi(k))] {
            let mut extra: Vec<Control> = (0..d)
                .filter(|&j| j != k)
                .map(|j| Control::on(ac.qubit(j)))
                .collect();
            extra.push(Control::on(rmap.anc_vel(k)));
            extra.push(Control::when(rmap.vel_dir(k), negative));
            let face = RangeCond {
                qubits: &grid,
                lo: face,
                hi: face,
            };
            push_box_flip(c, &[face], &extra, ao.qubit(k))?;
        }
    }
    push_in_block(c, rmap, block, &all)?;

    for k in 0..d {
        c.push(Gate::cx(ao.qubit(k), rmap.vel_dir(k)))?;
    }
    for k in 0..d {
        let flag = Control::on(ao.qubit(k));
        push_incrementer(c, &rmap.grid(k).qubits(), rmap.vel_dir(k), &[flag])?;
    }
    push_specular_reset(c, rmap, br)
}

pub fn specular_reflection_operator(
    lattice: &LatticeSpec,
    rmap: &RegisterMap,
    data: &ReflectionData,
) -> Result<Component> {
    debug_assert_eq!(lattice.num_dims(), rmap.num_dims());
    let mut c = Circuit::new("specular_reflection", rmap.clone());
    for br in data.of_kind(BoundaryKind::Specular) {
        push_specular_block(&mut c, rmap, br)?;
    }
    Ok(Component::new(ComponentKind::Operator, c))
}

fn push_bounceback_block(c: &mut Circuit, rmap: &RegisterMap, block: &Block) -> CircuitResult {
    let d = block.bounds.len();
    let head: Vec<usize> = (0..d - 1).collect();
    let last = d - 1;
    let ac = rmap.anc_comparator();
    let flag = rmap.anc_obstacle().qubit(0);
    let conj: Vec<Control> = head.iter().map(|&j| Control::on(ac.qubit(j))).collect();

    // Detect: flag ^= position inside the block.
    push_in_block(c, rmap, block, &head)?;
    let grid = rmap.grid(last).qubits();
    let (lo, hi) = block.bounds[last];
    push_box_flip(c, &[RangeCond { qubits: &grid, lo, hi }], &conj, flag)?;
    push_in_block(c, rmap, block, &head)?;

    for k in 0..d {
        c.push(Gate::cx(flag, rmap.vel_dir(k)))?;
    }
    for k in 0..d {
        let controls = [Control::on(flag), Control::on(rmap.anc_vel(k))];
        push_incrementer(c, &rmap.grid(k).qubits(), rmap.vel_dir(k), &controls)?;
    }

    // Reset: the flag is set exactly where stepping back along the reversed
    // velocity lands inside the block.
    for &j in &head {
        push_stepped_back_inside(c, rmap, block, j, &[], ac.qubit(j))?;
    }
    push_stepped_back_inside(c, rmap, block, last, &conj, flag)?;
    for &j in &head {
        push_stepped_back_inside(c, rmap, block, j, &[], ac.qubit(j))?;
    }
    Ok(())
}

pub fn bounceback_reflection_operator(
    lattice: &LatticeSpec,
    rmap: &RegisterMap,
    data: &ReflectionData,
) -> Result<Component> {
    debug_assert_eq!(lattice.num_dims(), rmap.num_dims());
    let mut c = Circuit::new("bounceback_reflection", rmap.clone());
    for br in data.of_kind(BoundaryKind::BounceBack) {
        push_bounceback_block(&mut c, rmap, &br.block)?;
    }
    Ok(Component::new(ComponentKind::Operator, c))
}
