//! Dense unitaries of small circuits, for equivalence checks.

use super::statevector::{SimError, Statevector};
use crate::circuit::Circuit;
use num_complex::Complex64;

/// Column-major unitary: entry `[col][row]` is ⟨row|C|col⟩.
pub fn unitary(c: &Circuit) -> Result<Vec<Vec<Complex64>>, SimError> {
    let n = c.num_qubits();
    (0..1usize << n)
        .map(|col| {
            let mut psi = Statevector::basis(n, col);
            psi.apply(c)?;
            Ok(psi.into_amplitudes())
        })
        .collect()
}

/// Largest entrywise difference between `a` and `b` after removing the global
/// phase that best aligns them.
pub fn distance_up_to_phase(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    assert_eq!(a.len(), b.len(), "unitaries of different size");
    let overlap: Complex64 = a
        .iter()
        .zip(b)
        .flat_map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| x.conj() * y))
        .sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .flat_map(|(ca, cb)| ca.iter().zip(cb).map(move |(x, y)| (x * phase - y).norm()))
        .fold(0.0, f64::max)
}

/// Largest entrywise difference from the identity, up to global phase.
pub fn distance_from_identity(u: &[Vec<Complex64>]) -> f64 {
    let dim = u.len();
    let id: Vec<Vec<Complex64>> = (0..dim)
        .map(|c| (0..dim).map(|r| Complex64::new(f64::from(u8::from(r == c)), 0.0)).collect())
        .collect();
    distance_up_to_phase(u, &id)
}
