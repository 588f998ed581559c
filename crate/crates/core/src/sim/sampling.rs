//! Marginal distributions and measurement counts.

use super::statevector::Statevector;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Exact probabilities at or below this are numerical residue and dropped.
pub const PROBABILITY_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountsMode {
    Exact,
    Sampled { seed: u64 },
}

/// Outcome frequencies keyed by one integer per measured qubit group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub mode: CountsMode,
    pub shots: u64,
    pub values: BTreeMap<Vec<usize>, f64>,
}

impl Counts {
    pub fn total(&self) -> f64 {
        self.values.values().sum()
    }

    pub fn get(&self, key: &[usize]) -> f64 {
        self.values.get(key).copied().unwrap_or(0.0)
    }

    /// Values divided by their total.
    pub fn normalized(&self) -> BTreeMap<Vec<usize>, f64> {
        let total = self.total();
        self.values
            .iter()
            .map(|(k, v)| (k.clone(), v / total))
            .collect()
    }
}

struct GroupLayout {
    qubits: Vec<usize>,
    /// Offset of this group's value inside the packed key.
    offset: usize,
}

fn pack_key(index: usize, groups: &[GroupLayout]) -> usize {
    let mut key = 0;
    for g in groups {
        for (bit, &q) in g.qubits.iter().enumerate() {
            key |= (index >> q & 1) << (g.offset + bit);
        }
    }
    key
}

/// Probability of every value of the measured groups, summing |a|² over
/// the unmeasured qubits. Group `g` contributes Σ bit(g[i])·2^i.
pub fn marginal(psi: &Statevector, groups: &[Vec<usize>]) -> BTreeMap<Vec<usize>, f64> {
    let mut layout = Vec::with_capacity(groups.len());
    let mut offset = 0;
    for g in groups {
        layout.push(GroupLayout {
            qubits: g.clone(),
            offset,
        });
        offset += g.len();
    }
    let width = offset;
    let amps = psi.amplitudes();
    let dense = if amps.len() >= 1 << 16 {
        amps.par_chunks(1 << 14)
            .enumerate()
            .fold(
                || vec![0.0; 1 << width],
                |mut acc, (c, chunk)| {
                    let base = c << 14;
                    for (i, a) in chunk.iter().enumerate() {
                        acc[pack_key(base + i, &layout)] += a.norm_sqr();
                    }
                    acc
                },
            )
            .reduce(
                || vec![0.0; 1 << width],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    } else {
        let mut acc = vec![0.0; 1 << width];
        for (i, a) in amps.iter().enumerate() {
            acc[pack_key(i, &layout)] += a.norm_sqr();
        }
        acc
    };
    dense
        .into_iter()
        .enumerate()
        .filter(|&(_, p)| p > PROBABILITY_FLOOR)
        .map(|(key, p)| {
            let values = layout
                .iter()
                .map(|g| key >> g.offset & ((1 << g.qubits.len()) - 1))
                .collect();
            (values, p)
        })
        .collect()
}

/// Reads the measured groups without modifying `psi`. `Exact` returns the
/// marginal itself; `Sampled` draws `shots` outcomes from it.
pub fn sample(psi: &Statevector, groups: &[Vec<usize>], shots: u64, mode: CountsMode) -> Counts {
    let dist = marginal(psi, groups);
    let values = match mode {
        CountsMode::Exact => dist,
        CountsMode::Sampled { seed } => {
            let keys: Vec<&Vec<usize>> = dist.keys().collect();
            let weights = WeightedIndex::new(dist.values().copied())
                .expect("marginal of a normalized state has positive weight");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut tally = vec![0u64; keys.len()];
            for _ in 0..shots {
                tally[weights.sample(&mut rng)] += 1;
            }
            keys.into_iter()
                .zip(tally)
                .filter(|&(_, n)| n > 0)
                .map(|(k, n)| (k.clone(), n as f64))
                .collect()
        }
    };
    Counts {
        mode,
        shots,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};
    use num_complex::Complex64;

    #[test]
    fn exact_basis_state() {
        let psi = Statevector::basis(3, 0b101);
        let c = sample(&psi, &[vec![0, 1, 2]], 1, CountsMode::Exact);
        assert_eq!(c.values.len(), 1);
        assert_eq!(c.get(&[5]), 1.0);
    }

    #[test]
    fn marginalizes_unmeasured_qubits() {
        let mut c = Circuit::flat("u", 2);
        c.push(Gate::h(0)).unwrap();
        c.push(Gate::h(1)).unwrap();
        let mut psi = Statevector::zero(2);
        psi.apply(&c).unwrap();
        let counts = sample(&psi, &[vec![0]], 1, CountsMode::Exact);
        assert!((counts.get(&[0]) - 0.5).abs() < 1e-12);
        assert!((counts.get(&[1]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn groups_pack_little_endian() {
        // qubits: g0 = {0,1}, g1 = {2}; index 0b110 → g0 = 2, g1 = 1
        let psi = Statevector::basis(3, 0b110);
        let m = marginal(&psi, &[vec![0, 1], vec![2]]);
        assert_eq!(m.keys().collect::<Vec<_>>(), vec![&vec![2, 1]]);
    }

    #[test]
    fn sampled_is_reproducible_and_within_bounds() {
        let p = [0.5, 0.3, 0.2, 0.0];
        let amps = p.iter().map(|x: &f64| Complex64::new(x.sqrt(), 0.0)).collect();
        let psi = Statevector::from_amplitudes(amps);
        let groups = [vec![0, 1]];
        let shots = 4096;
        let a = sample(&psi, &groups, shots, CountsMode::Sampled { seed: 7 });
        let b = sample(&psi, &groups, shots, CountsMode::Sampled { seed: 7 });
        assert_eq!(a, b);
        assert_eq!(a.total(), shots as f64);
        for (i, &pi) in p.iter().enumerate().take(3) {
            let mean = pi * shots as f64;
            let sigma = (shots as f64 * pi * (1.0 - pi)).sqrt();
            assert!((a.get(&[i]) - mean).abs() < 4.0 * sigma);
        }
        assert_eq!(a.get(&[3]), 0.0);
    }

    #[test]
    fn sampling_leaves_state_untouched() {
        let psi = Statevector::from_amplitudes(vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ]);
        let before = psi.clone();
        sample(&psi, &[vec![0]], 100, CountsMode::Sampled { seed: 1 });
        assert_eq!(psi, before);
    }
}
