//! Named qubit registers of the collisionless layout.
//!
//! Order: `g_<axis>` grid registers, `v_<axis>` velocity magnitudes,
//! `v_dir_<axis>` velocity signs, then the ancillae `av`, `ao`, `ac`.
//! Qubit `i` of a register is bit `i` (little endian) of the register value.

use crate::lattice::{LatticeSpec, AXIS_NAMES};
use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegisterKind {
    Grid(usize),
    VelocityMagnitude(usize),
    VelocityDirection(usize),
    AncillaVelocity,
    AncillaObstacle,
    AncillaComparator,
    /// Anonymous flat register used by standalone primitives.
    Flat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub kind: RegisterKind,
    pub range: Range<usize>,
}

impl Register {
    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_empty()
    }

    pub fn qubit(&self, i: usize) -> usize {
        assert!(i < self.len(), "qubit {i} outside register {}", self.name);
        self.range.start + i
    }

    pub fn qubits(&self) -> Vec<usize> {
        self.range.clone().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterMap {
    registers: Vec<Register>,
    num_dims: usize,
    total_qubits: usize,
}

impl RegisterMap {
    /// A single anonymous register of `n` qubits.
    pub fn flat(n: usize) -> Self {
        Self {
            registers: vec![Register {
                name: "q".into(),
                kind: RegisterKind::Flat,
                range: 0..n,
            }],
            num_dims: 0,
            total_qubits: n,
        }
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn num_dims(&self) -> usize {
        self.num_dims
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    fn find(&self, kind: RegisterKind) -> &Register {
        self.registers
            .iter()
            .find(|r| r.kind == kind)
            .unwrap_or_else(|| panic!("register {kind:?} not in layout"))
    }

    pub fn grid(&self, dim: usize) -> &Register {
        self.find(RegisterKind::Grid(dim))
    }

    pub fn vel_mag(&self, dim: usize) -> &Register {
        self.find(RegisterKind::VelocityMagnitude(dim))
    }

    pub fn vel_dir(&self, dim: usize) -> usize {
        self.find(RegisterKind::VelocityDirection(dim)).range.start
    }

    pub fn anc_vel(&self, dim: usize) -> usize {
        self.find(RegisterKind::AncillaVelocity).qubit(dim)
    }

    pub fn anc_obstacle(&self) -> &Register {
        self.find(RegisterKind::AncillaObstacle)
    }

    pub fn anc_comparator(&self) -> &Register {
        self.find(RegisterKind::AncillaComparator)
    }

    /// Every grid qubit, dimension by dimension.
    pub fn grid_qubits(&self) -> Vec<usize> {
        (0..self.num_dims).flat_map(|k| self.grid(k).qubits()).collect()
    }

    /// Qubits that must be |0⟩ between time steps.
    pub fn ancilla_qubits(&self) -> Vec<usize> {
        [
            RegisterKind::AncillaVelocity,
            RegisterKind::AncillaObstacle,
            RegisterKind::AncillaComparator,
        ]
        .into_iter()
        .flat_map(|k| self.find(k).qubits())
        .collect()
    }

    /// Name of the register owning `qubit` and the offset inside it.
    pub fn locate(&self, qubit: usize) -> Option<(&str, usize)> {
        self.registers
            .iter()
            .find(|r| r.range.contains(&qubit))
            .map(|r| (r.name.as_str(), qubit - r.range.start))
    }
}

/// Computes the adaptive register layout for a lattice.
///
/// The obstacle ancilla shrinks to a single qubit when every obstacle uses
/// bounce-back reflection; otherwise it holds one flag per dimension which
/// bounce-back obstacles share.
pub fn register_layout(spec: &LatticeSpec) -> RegisterMap {
    let d = spec.num_dims();
    let mut registers = Vec::new();
    let mut next = 0;
    let mut push = |name: String, kind: RegisterKind, len: usize| {
        registers.push(Register {
            name,
            kind,
            range: next..next + len,
        });
        next += len;
    };
    for k in 0..d {
        push(format!("g_{}", AXIS_NAMES[k]), RegisterKind::Grid(k), spec.grid_bits(k));
    }
    for k in 0..d {
        push(
            format!("v_{}", AXIS_NAMES[k]),
            RegisterKind::VelocityMagnitude(k),
            spec.magnitude_bits(),
        );
    }
    for k in 0..d {
        push(
            format!("v_dir_{}", AXIS_NAMES[k]),
            RegisterKind::VelocityDirection(k),
            1,
        );
    }
    push("av".into(), RegisterKind::AncillaVelocity, d);
    let obstacle = if spec.only_bounceback() { 1 } else { d };
    push("ao".into(), RegisterKind::AncillaObstacle, obstacle);
    push("ac".into(), RegisterKind::AncillaComparator, d * (d - 1));
    RegisterMap {
        registers,
        num_dims: d,
        total_qubits: next,
    }
}
