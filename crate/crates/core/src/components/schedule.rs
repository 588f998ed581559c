use std::collections::BTreeSet;

/// Which velocity magnitudes stream in each substep of a time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstepSchedule {
    pub max_magnitude: usize,
    /// Entry `t - 1` lists the magnitudes streaming at substep `t`.
    pub substeps: Vec<BTreeSet<usize>>,
}

impl SubstepSchedule {
    /// Number of substeps in which magnitude `q` streams.
    pub fn activations(&self, q: usize) -> usize {
        self.substeps.iter().filter(|s| s.contains(&q)).count()
    }
}

/// Evenly spaced activation: magnitude `q` streams at substep `t` iff
/// ⌊tq/Q⌋ > ⌊(t−1)q/Q⌋, so it moves exactly `q` cells per step.
pub fn substep_schedule(max_magnitude: usize) -> SubstepSchedule {
    assert!(max_magnitude >= 1, "the schedule needs Q >= 1");
    let big_q = max_magnitude;
    let substeps = (1..=big_q)
        .map(|t| {
            (1..=big_q)
                .filter(|&q| t * q / big_q > (t - 1) * q / big_q)
                .collect()
        })
        .collect();
    SubstepSchedule {
        max_magnitude,
        substeps,
    }
}
