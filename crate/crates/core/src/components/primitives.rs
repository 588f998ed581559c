use super::{Component, ComponentError, ComponentKind, Result};
use crate::circuit::{qft, Circuit, CircuitError, Control, Gate};
use crate::lattice::LatticeSpec;
use crate::registers::RegisterMap;
use std::collections::BTreeSet;
use std::f64::consts::PI;

/// Which qubits gate the grid shift of a controlled incrementer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflection {
    /// Streaming: controlled by the velocity ancilla of the dimension.
    None,
    /// Bounce-back move-back: the shared obstacle flag and the velocity
    /// ancilla of the dimension, so only components that streamed return.
    BounceBack,
    /// Specular move-back: the obstacle flag of the dimension.
    Specular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparatorMode {
    Eq(usize),
    Geq(usize),
    Leq(usize),
    InRange(usize, usize),
}

pub(super) fn check_dim(rmap: &RegisterMap, dim: usize) -> Result<()> {
    if dim >= rmap.num_dims() {
        return Err(ComponentError::InvalidDimension {
            dim,
            num_dims: rmap.num_dims(),
        });
    }
    Ok(())
}

pub(super) fn check_magnitudes(lattice: &LatticeSpec, magnitudes: &BTreeSet<usize>) -> Result<()> {
    let max = lattice.max_magnitude();
    match magnitudes.iter().find(|&&q| q == 0 || q > max) {
        Some(&magnitude) => Err(ComponentError::InvalidMagnitude { magnitude, max }),
        None => Ok(()),
    }
}

/// Aligned dyadic blocks covering `[lo, hi]` on an `nbits` register. Each
/// pattern lists the fixed (bit, value) pairs; the low bits are free.
pub fn interval_patterns(lo: usize, hi: usize, nbits: usize) -> Vec<Vec<(usize, bool)>> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let mut cur = lo;
    while cur <= hi {
        let mut s = 0;
        while s < nbits && cur % (1 << (s + 1)) == 0 && cur + (1 << (s + 1)) - 1 <= hi {
            s += 1;
        }
        out.push((s..nbits).map(|b| (b, cur >> b & 1 == 1)).collect());
        cur += 1 << s;
    }
    out
}

/// One inclusive range on a register of qubits.
pub(super) struct RangeCond<'a> {
    pub qubits: &'a [usize],
    pub lo: usize,
    pub hi: usize,
}

/// Flips `target` where every range condition holds and every `extra`
/// control matches. One multi-controlled X per combination of dyadic blocks.
pub(super) fn push_box_flip(
    c: &mut Circuit,
    ranges: &[RangeCond<'_>],
    extra: &[Control],
    target: usize,
) -> std::result::Result<(), CircuitError> {
    let per_range: Vec<Vec<Vec<Control>>> = ranges
        .iter()
        .map(|r| {
            interval_patterns(r.lo, r.hi, r.qubits.len())
                .into_iter()
                .map(|p| {
                    p.into_iter()
                        .map(|(bit, v)| Control::when(r.qubits[bit], v))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut combos: Vec<Vec<Control>> = vec![extra.to_vec()];
    for options in &per_range {
        combos = combos
            .iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.extend_from_slice(o);
                    next
                })
            })
            .collect();
    }
    for controls in combos {
        if controls.is_empty() {
            c.push(Gate::x(target))?;
        } else {
            c.push(Gate::mcx(controls, target))?;
        }
    }
    Ok(())
}

/// Shifts the register `grid` by +1 where `dir` is |0⟩ and by −1 where it
/// is |1⟩, on the subspace selected by `controls`.
pub(super) fn push_incrementer(
    c: &mut Circuit,
    grid: &[usize],
    dir: usize,
    controls: &[Control],
) -> std::result::Result<(), CircuitError> {
    let n = grid.len();
    let fourier = qft(n);
    c.append(&fourier, Some(grid))?;
    let mut gated = controls.to_vec();
    gated.push(Control::on(dir));
    for sign in [1.0, -1.0] {
        if sign > 0.0 {
            c.push(Gate::x(dir))?;
        }
        for (j, &q) in grid.iter().enumerate() {
            let theta = sign * PI / (1u64 << (n - 1 - j)) as f64;
            c.push(Gate::mcp(theta, gated.clone(), q))?;
        }
        if sign > 0.0 {
            c.push(Gate::x(dir))?;
        }
    }
    c.append(&fourier.inverse()?, Some(grid))?;
    Ok(())
}

/// av[dim] ^= [vel_mag[dim] encodes a magnitude in `magnitudes`].
pub(super) fn push_marking(
    c: &mut Circuit,
    rmap: &RegisterMap,
    magnitudes: &BTreeSet<usize>,
    dim: usize,
) -> std::result::Result<(), CircuitError> {
    let mag = rmap.vel_mag(dim).qubits();
    let av = rmap.anc_vel(dim);
    for &q in magnitudes {
        let m = q - 1;
        if mag.is_empty() {
            c.push(Gate::x(av))?;
        } else {
            let controls = mag
                .iter()
                .enumerate()
                .map(|(i, &qb)| Control::when(qb, m >> i & 1 == 1))
                .collect();
            c.push(Gate::mcx(controls, av))?;
        }
    }
    Ok(())
}

pub fn controlled_incrementer(
    lattice: &LatticeSpec,
    rmap: &RegisterMap,
    dim: usize,
    reflection: Reflection,
) -> Result<Component> {
    check_dim(rmap, dim)?;
    debug_assert_eq!(lattice.num_dims(), rmap.num_dims());
    let controls = match reflection {
        Reflection::None => vec![Control::on(rmap.anc_vel(dim))],
        Reflection::BounceBack => vec![
            Control::on(rmap.anc_obstacle().qubit(0)),
            Control::on(rmap.anc_vel(dim)),
        ],
        Reflection::Specular => vec![Control::on(rmap.anc_obstacle().qubit(dim))],
    };
    let mut c = Circuit::new(format!("incrementer_{dim}"), rmap.clone());
    push_incrementer(&mut c, &rmap.grid(dim).qubits(), rmap.vel_dir(dim), &controls)?;
    Ok(Component::new(ComponentKind::Primitive, c))
}

/// Flips `out` on the grid values of dimension `dim` selected by `mode`.
/// Needs no scratch qubits: each aligned dyadic block of the accepted
/// interval is one multi-controlled X on its fixed prefix bits.
pub fn comparator(
    rmap: &RegisterMap,
    dim: usize,
    mode: ComparatorMode,
    out: usize,
) -> Result<Component> {
    check_dim(rmap, dim)?;
    let grid = rmap.grid(dim).qubits();
    let extent = 1usize << grid.len();
    let (lo, hi) = match mode {
        ComparatorMode::Eq(v) => (v, v),
        ComparatorMode::Geq(v) => (v, extent - 1),
        ComparatorMode::Leq(v) => (0, v),
        ComparatorMode::InRange(lo, hi) => (lo, hi),
    };
    if let Some(value) = [lo, hi].into_iter().find(|&v| v >= extent) {
        return Err(ComponentError::ConstantOutOfRange { value, extent });
    }
    let allowed = rmap.anc_comparator().range.contains(&out) || rmap.anc_obstacle().range.contains(&out);
    if !allowed {
        return Err(ComponentError::InvalidOutput(out));
    }
    let mut c = Circuit::new(format!("comparator_{dim}"), rmap.clone());
    push_box_flip(&mut c, &[RangeCond { qubits: &grid, lo, hi }], &[], out)?;
    Ok(Component::new(ComponentKind::Primitive, c))
}

/// Undoes the velocity-ancilla marking of a streaming operator in one
/// dimension; the marking is its own inverse.
pub fn streaming_ancilla_preparation(
    lattice: &LatticeSpec,
    rmap: &RegisterMap,
    magnitudes: &BTreeSet<usize>,
    dim: usize,
) -> Result<Component> {
    check_dim(rmap, dim)?;
    check_magnitudes(lattice, magnitudes)?;
    let mut c = Circuit::new(format!("ancilla_preparation_{dim}"), rmap.clone());
    push_marking(&mut c, rmap, magnitudes, dim)?;
    Ok(Component::new(ComponentKind::Operator, c))
}
