//! Dense statevector with in-place gate kernels.

use crate::circuit::{Circuit, Gate, GateKind};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("circuit acts on {circuit} qubits but the state has {state}")]
    QubitCountMismatch { circuit: usize, state: usize },
    #[error("measurement gate found in a unitary circuit")]
    MeasureInUnitaryApply,
    #[error("state norm drifted to {norm} (|1 - norm| > {tolerance})")]
    NormDrift { norm: f64, tolerance: f64 },
    #[error("{0}")]
    InvalidConfig(String),
}

/// Below this many amplitude groups per gate the kernels stay sequential.
const PARALLEL_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    amplitudes: Vec<Complex64>,
    num_qubits: usize,
}

#[derive(Clone, Copy)]
struct SendPtr(*mut Complex64);
// SAFETY: kernels hand each worker a disjoint set of amplitude indices.
unsafe impl Send for SendPtr {}
unsafe impl Sync for SendPtr {}

impl SendPtr {
    /// # Safety
    /// `i` must be in bounds and not touched concurrently by another worker.
    #[inline(always)]
    unsafe fn at(self, i: usize) -> *mut Complex64 {
        self.0.add(i)
    }
}

/// Spreads the bits of `base` over the positions not listed in `fixed`
/// (ascending), leaving zeros at the fixed positions.
#[inline(always)]
fn deposit(mut base: usize, fixed: &[usize]) -> usize {
    for &p in fixed {
        let low = base & ((1 << p) - 1);
        base = ((base >> p) << (p + 1)) | low;
    }
    base
}

impl Statevector {
    /// |0…0⟩ on `n` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        assert!(num_qubits < usize::BITS as usize - 1, "too many qubits");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            num_qubits,
        }
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        assert!(amplitudes.len().is_power_of_two(), "length must be 2^n");
        let num_qubits = amplitudes.len().trailing_zeros() as usize;
        Self {
            amplitudes,
            num_qubits,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        if self.amplitudes.len() >= PARALLEL_THRESHOLD {
            self.amplitudes.par_iter().map(|a| a.norm_sqr()).sum()
        } else {
            self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies every gate of `c` in order.
    pub fn apply(&mut self, c: &Circuit) -> Result<(), SimError> {
        if c.num_qubits() != self.num_qubits {
            return Err(SimError::QubitCountMismatch {
                circuit: c.num_qubits(),
                state: self.num_qubits,
            });
        }
        if c.has_measurements() {
            return Err(SimError::MeasureInUnitaryApply);
        }
        for g in c.gates() {
            self.apply_gate(g);
        }
        Ok(())
    }

    /// Applies one non-measurement gate whose indices are already validated.
    pub fn apply_gate(&mut self, g: &Gate) {
        let mut mask = 0usize;
        let mut value = 0usize;
        for c in &g.controls {
            mask |= 1 << c.qubit;
            if c.on_one {
                value |= 1 << c.qubit;
            }
        }
        match g.kind {
            GateKind::Swap => {
                let (a, b) = (g.targets[0], g.targets[1]);
                self.for_each_group(mask | 1 << a | 1 << b, value, move |p, i| unsafe {
                    std::ptr::swap(p.at(i | 1 << a), p.at(i | 1 << b));
                });
            }
            GateKind::X | GateKind::MultiControlledX => {
                let t = g.targets[0];
                self.for_each_group(mask | 1 << t, value, move |p, i| unsafe {
                    std::ptr::swap(p.at(i), p.at(i | 1 << t));
                });
            }
            GateKind::Phase(theta)
            | GateKind::ControlledPhase(theta)
            | GateKind::MultiControlledPhase(theta) => {
                let t = g.targets[0];
                let phase = Complex64::from_polar(1.0, theta);
                self.for_each_group(mask | 1 << t, value | 1 << t, move |p, i| unsafe {
                    *p.at(i) *= phase;
                });
            }
            GateKind::H => {
                let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
                self.apply_matrix(g.targets[0], mask, value, [[s, s], [s, -s]]);
            }
            GateKind::U { theta, phi, lambda } => {
                self.apply_matrix(g.targets[0], mask, value, u_matrix(theta, phi, lambda));
            }
            GateKind::Measure => panic!("measurement passed to a unitary kernel"),
        }
    }

    fn apply_matrix(&mut self, t: usize, mask: usize, value: usize, m: [[Complex64; 2]; 2]) {
        self.for_each_group(mask | 1 << t, value, move |p, i| unsafe {
            let a0 = *p.at(i);
            let a1 = *p.at(i | 1 << t);
            *p.at(i) = m[0][0] * a0 + m[0][1] * a1;
            *p.at(i | 1 << t) = m[1][0] * a0 + m[1][1] * a1;
        });
    }

    /// Calls `f(ptr, i)` for every index `i` whose bits under `fixed_mask`
    /// equal `value`; each call owns the amplitudes it derives from `i` by
    /// setting bits inside `fixed_mask` that are clear in `value`.
    fn for_each_group<F>(&mut self, fixed_mask: usize, value: usize, f: F)
    where
        F: Fn(SendPtr, usize) + Sync + Send,
    {
        let mut fixed = Vec::with_capacity(fixed_mask.count_ones() as usize);
        let mut m = fixed_mask;
        while m != 0 {
            fixed.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        let groups = self.amplitudes.len() >> fixed.len();
        let ptr = SendPtr(self.amplitudes.as_mut_ptr());
        if groups >= PARALLEL_THRESHOLD {
            let chunk = groups / (rayon::current_num_threads() * 4).max(1);
            let chunk = chunk.max(1024);
            (0..groups)
                .into_par_iter()
                .with_min_len(chunk)
                .for_each(|base| f(ptr, deposit(base, &fixed) | value));
        } else {
            for base in 0..groups {
                f(ptr, deposit(base, &fixed) | value);
            }
        }
    }
}

/// Matrix of U(θ, φ, λ) = Rz(φ)·Ry(θ)·Rz(λ) with the usual phase convention.
pub fn u_matrix(theta: f64, phi: f64, lambda: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(c, phi + lambda),
        ],
    ]
}

/// Convenience: runs `c` on a copy of `psi`.
pub fn apply(c: &Circuit, psi: &Statevector) -> Result<Statevector, SimError> {
    let mut out = psi.clone();
    out.apply(c)?;
    Ok(out)
}
