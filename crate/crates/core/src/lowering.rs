//! Lowering to the {U, CX, Measure} basis and peephole optimization.

use crate::circuit::{Circuit, CircuitError, CircuitMetrics, Gate, GateKind};
use crate::sim::statevector::u_matrix;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Multi-controlled gates with at most this many controls use the ancilla-free
/// parity-phase expansion; larger ones borrow idle qubits.
pub const MAX_DIRECT_CONTROLS: usize = 4;

const ANGLE_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoweringError {
    #[error("gate with {controls} controls needs a spare qubit but the circuit has only {num_qubits}")]
    InsufficientScratch { controls: usize, num_qubits: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompileReport {
    pub lowered_gate_count: usize,
    pub lowered_depth: usize,
    pub per_kind_counts: std::collections::BTreeMap<&'static str, usize>,
    pub compile_wall_time: Duration,
}

struct Lowerer {
    n: usize,
    /// Qubits tried first when borrowing scratch space.
    preferred: Vec<usize>,
    out: Vec<Gate>,
}

impl Lowerer {
    fn u(&mut self, q: usize, theta: f64, phi: f64, lambda: f64) {
        self.out.push(Gate::u(theta, phi, lambda, q));
    }

    fn p(&mut self, q: usize, lambda: f64) {
        self.u(q, 0.0, 0.0, lambda);
    }

    fn x(&mut self, q: usize) {
        self.u(q, PI, 0.0, PI);
    }

    fn h(&mut self, q: usize) {
        self.u(q, PI / 2.0, 0.0, PI);
    }

    fn cx(&mut self, c: usize, t: usize) {
        self.out.push(Gate::cx(c, t));
    }

    fn cp(&mut self, theta: f64, c: usize, t: usize) {
        self.p(c, theta / 2.0);
        self.cx(c, t);
        self.p(t, -theta / 2.0);
        self.cx(c, t);
        self.p(t, theta / 2.0);
    }

    /// Phase `theta` on the all-ones state of `qs`, as a sum of parity phases
    /// φ_S = θ·(−1)^{|S|−1}/2^{k−1} walked in Gray-code order per carrier.
    fn parity_phase(&mut self, theta: f64, qs: &[usize]) {
        let k = qs.len();
        let scale = theta / (1u64 << (k - 1)) as f64;
        for (j, &carrier) in qs.iter().enumerate() {
            let mut prev = 0usize;
            for step in 0..1usize << j {
                let gray = step ^ (step >> 1);
                let changed = gray ^ prev;
                if changed != 0 {
                    self.cx(qs[changed.trailing_zeros() as usize], carrier);
                }
                prev = gray;
                let size = gray.count_ones() + 1;
                let sign = if size % 2 == 1 { 1.0 } else { -1.0 };
                self.p(carrier, sign * scale);
            }
            if j > 0 {
                self.cx(qs[j - 1], carrier);
            }
        }
    }

    fn idle(&self, busy: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = self.preferred.iter().copied().filter(|q| !busy.contains(q)).collect();
        for q in 0..self.n {
            if !busy.contains(&q) && !out.contains(&q) {
                out.push(q);
            }
        }
        out
    }

    fn mcx(&mut self, controls: &[usize], t: usize) -> Result<(), LoweringError> {
        let m = controls.len();
        match m {
            0 => self.x(t),
            1 => self.cx(controls[0], t),
            _ if m <= MAX_DIRECT_CONTROLS => {
                let mut qs = controls.to_vec();
                qs.push(t);
                self.h(t);
                self.parity_phase(PI, &qs);
                self.h(t);
            }
            _ => {
                let mut busy = controls.to_vec();
                busy.push(t);
                let spare = self.idle(&busy);
                if spare.len() >= m - 2 {
                    self.vchain(controls, &spare[..m - 2], t)?;
                } else if let Some(&a) = spare.first() {
                    let (c1, c2) = controls.split_at(m.div_ceil(2));
                    let mut c2a = c2.to_vec();
                    c2a.push(a);
                    for _ in 0..2 {
                        self.mcx(c1, a)?;
                        self.mcx(&c2a, t)?;
                    }
                } else {
                    return Err(LoweringError::InsufficientScratch {
                        controls: m,
                        num_qubits: self.n,
                    });
                }
            }
        }
        Ok(())
    }

    /// Toffoli ladder over m−2 borrowed qubits of unknown state; restores them.
    fn vchain(&mut self, c: &[usize], a: &[usize], t: usize) -> Result<(), LoweringError> {
        let m = c.len();
        // Rung i (2 ≤ i < m) toggles a[i-1] (or t for the top rung) on c[i] ∧ a[i-2].
        let rung_target = |i: usize| if i == m - 1 { t } else { a[i - 1] };
        let ladder = |s: &mut Self, top: usize| -> Result<(), LoweringError> {
            for i in (2..=top).rev() {
                s.mcx(&[c[i], a[i - 2]], rung_target(i))?;
            }
            s.mcx(&[c[0], c[1]], a[0])?;
            for i in 2..=top {
                s.mcx(&[c[i], a[i - 2]], rung_target(i))?;
            }
            Ok(())
        };
        ladder(self, m - 1)?;
        ladder(self, m - 2)
    }

    fn mcp(&mut self, theta: f64, controls: &[usize], t: usize) -> Result<(), LoweringError> {
        let m = controls.len();
        match m {
            0 => self.p(t, theta),
            1 => self.cp(theta, controls[0], t),
            _ if m <= MAX_DIRECT_CONTROLS => {
                let mut qs = controls.to_vec();
                qs.push(t);
                self.parity_phase(theta, &qs);
            }
            _ => {
                let (&last, rest) = controls.split_last().expect("m > 0");
                self.cp(theta / 2.0, last, t);
                self.mcx(rest, last)?;
                self.cp(-theta / 2.0, last, t);
                self.mcx(rest, last)?;
                self.mcp(theta / 2.0, rest, t)?;
            }
        }
        Ok(())
    }

    fn gate(&mut self, g: &Gate) -> Result<(), LoweringError> {
        let negative: Vec<usize> = g.controls.iter().filter(|c| !c.on_one).map(|c| c.qubit).collect();
        let controls: Vec<usize> = g.controls.iter().map(|c| c.qubit).collect();
        for &q in &negative {
            self.x(q);
        }
        match g.kind {
            GateKind::X => self.x(g.targets[0]),
            GateKind::H => self.h(g.targets[0]),
            GateKind::Phase(l) => self.p(g.targets[0], l),
            GateKind::U { theta, phi, lambda } => self.u(g.targets[0], theta, phi, lambda),
            GateKind::Swap => {
                let (a, b) = (g.targets[0], g.targets[1]);
                self.cx(a, b);
                self.cx(b, a);
                self.cx(a, b);
            }
            GateKind::ControlledPhase(theta) => self.cp(theta, controls[0], g.targets[0]),
            GateKind::MultiControlledX => self.mcx(&controls, g.targets[0])?,
            GateKind::MultiControlledPhase(theta) => self.mcp(theta, &controls, g.targets[0])?,
            GateKind::Measure => self.out.push(g.clone()),
        }
        for &q in &negative {
            self.x(q);
        }
        Ok(())
    }
}

/// Rewrites `c` over {U, CX, Measure}. The result equals `c` up to global
/// phase; borrowed qubits are returned to their original state.
pub fn lower(c: &Circuit) -> Result<Circuit, LoweringError> {
    let rmap = c.register_map();
    let preferred = if rmap.num_dims() > 0 {
        rmap.anc_comparator().qubits()
    } else {
        Vec::new()
    };
    let mut l = Lowerer {
        n: c.num_qubits(),
        preferred,
        out: Vec::with_capacity(c.len() * 4),
    };
    for g in c.gates() {
        l.gate(g)?;
    }
    Ok(Circuit::from_parts(format!("{}_lowered", c.name()), rmap.clone(), l.out))
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a - 2.0 * PI
    } else {
        a
    }
}

/// Angles (θ, φ, λ) with U(θ, φ, λ) equal to `m` up to global phase.
fn zyz(m: &[[Complex64; 2]; 2]) -> (f64, f64, f64) {
    let (c, s) = (m[0][0].norm(), m[1][0].norm());
    let theta = 2.0 * s.atan2(c);
    if c > ANGLE_EPS {
        let g = m[0][0].arg();
        let lam_phi = m[1][1].arg() - g;
        if s > ANGLE_EPS {
            let phi = m[1][0].arg() - g;
            (theta, wrap(phi), wrap(lam_phi - phi))
        } else {
            (theta, 0.0, wrap(lam_phi))
        }
    } else {
        let g = m[1][0].arg();
        (theta, 0.0, wrap((-m[0][1]).arg() - g))
    }
}

fn is_identity(theta: f64, phi: f64, lambda: f64) -> bool {
    let t = theta.rem_euclid(4.0 * PI);
    let t_zero = t.abs() < ANGLE_EPS || (4.0 * PI - t).abs() < ANGLE_EPS;
    // θ ≡ 2π mod 4π is −I, also the identity up to phase.
    let t_two_pi = (t - 2.0 * PI).abs() < ANGLE_EPS;
    (t_zero || t_two_pi) && wrap(phi + lambda).abs() < ANGLE_EPS
}

fn optimize_pass(gates: &[Gate], n: usize) -> Vec<Gate> {
    let mut slots: Vec<Option<Gate>> = Vec::with_capacity(gates.len());
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for g in gates {
        match g.kind {
            GateKind::U { theta, phi, lambda } => {
                let q = g.targets[0];
                let prev = stacks[q]
                    .last()
                    .copied()
                    .filter(|&i| matches!(slots[i].as_ref().map(|p| &p.kind), Some(GateKind::U { .. })));
                let (theta, phi, lambda) = match prev {
                    Some(i) => {
                        let GateKind::U { theta: t0, phi: p0, lambda: l0 } = slots[i].as_ref().expect("live").kind else {
                            unreachable!()
                        };
                        stacks[q].pop();
                        slots[i] = None;
                        zyz(&mat_mul(&u_matrix(theta, phi, lambda), &u_matrix(t0, p0, l0)))
                    }
                    None => (theta, phi, lambda),
                };
                if !is_identity(theta, phi, lambda) {
                    stacks[q].push(slots.len());
                    slots.push(Some(Gate::u(theta, phi, lambda, q)));
                }
            }
            _ if g.is_cx() => {
                let (c, t) = (g.controls[0].qubit, g.targets[0]);
                let top_c = stacks[c].last().copied();
                if top_c.is_some()
                    && top_c == stacks[t].last().copied()
                    && slots[top_c.unwrap()].as_ref() == Some(g)
                {
                    slots[top_c.unwrap()] = None;
                    stacks[c].pop();
                    stacks[t].pop();
                } else {
                    for q in [c, t] {
                        stacks[q].push(slots.len());
                    }
                    slots.push(Some(g.clone()));
                }
            }
            _ => {
                for q in g.qubits() {
                    stacks[q].push(slots.len());
                }
                slots.push(Some(g.clone()));
            }
        }
    }
    slots.into_iter().flatten().collect()
}

/// Level 0 returns the circuit unchanged. Level 1 repeats CX-pair
/// cancellation, adjacent-U fusion and identity removal until nothing changes.
pub fn optimize(c: &Circuit, level: u8) -> Circuit {
    let mut gates = c.gates().to_vec();
    if level >= 1 {
        loop {
            let next = optimize_pass(&gates, c.num_qubits());
            let done = next.len() == gates.len();
            gates = next;
            if done {
                break;
            }
        }
    }
    Circuit::from_parts(c.name().to_string(), c.register_map().clone(), gates)
}

/// Lowers and optimizes at level 1, timing both.
pub fn compile_report(c: &Circuit) -> Result<CompileReport, LoweringError> {
    let start = Instant::now();
    let lowered = optimize(&lower(c)?, 1);
    let compile_wall_time = start.elapsed();
    let CircuitMetrics {
        gate_count,
        depth,
        per_kind_counts,
    } = lowered.metrics();
    Ok(CompileReport {
        lowered_gate_count: gate_count,
        lowered_depth: depth,
        per_kind_counts,
        compile_wall_time,
    })
}

/// True when every gate is U, CX or a measurement.
pub fn is_basis(c: &Circuit) -> bool {
    c.gates()
        .iter()
        .all(|g| matches!(g.kind, GateKind::U { .. } | GateKind::Measure) || g.is_cx())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{qft, Control};
    use crate::sim::{distance_up_to_phase, unitary};
    use proptest::prelude::*;

    fn assert_equivalent(a: &Circuit, b: &Circuit) {
        let d = distance_up_to_phase(&unitary(a).unwrap(), &unitary(b).unwrap());
        assert!(d < 1e-9, "{} vs {}: distance {d}", a.name(), b.name());
    }

    fn single(n: usize, g: Gate) -> Circuit {
        let mut c = Circuit::flat("g", n);
        c.push(g).unwrap();
        c
    }

    #[test]
    fn qft3_tally() {
        let lowered = lower(&qft(3)).unwrap();
        let m = lowered.metrics();
        assert_eq!(m.per_kind_counts.get("U"), Some(&12));
        assert_eq!(m.per_kind_counts.get("CX"), Some(&9));
        assert_eq!(m.gate_count, 21);
        assert_equivalent(&qft(3), &lowered);
        let report = compile_report(&qft(3)).unwrap();
        assert!(report.lowered_gate_count <= 21);
    }

    #[test]
    fn every_gate_kind_lowers_exactly() {
        let n = 7;
        let all = |k: usize| -> Vec<Control> { (0..k).map(|q| Control::when(q + 1, q % 3 != 1)).collect() };
        let mut gates = vec![
            Gate::x(2),
            Gate::h(0),
            Gate::phase(0.7, 3),
            Gate::u(0.3, 1.1, -0.4, 4),
            Gate::swap(1, 5),
            Gate::cp(0.9, 2, 6),
            Gate::cx(4, 0),
        ];
        for k in 0..=5 {
            gates.push(Gate::mcx(all(k), 0));
            gates.push(Gate::mcp(1.3, all(k), 0));
        }
        for g in gates {
            let c = single(n, g.clone());
            let lowered = lower(&c).unwrap();
            assert!(is_basis(&lowered), "{g}");
            assert_equivalent(&c, &lowered);
        }
    }

    #[test]
    fn single_spare_qubit_split() {
        // 6 controls + target + 1 spare: too few for the ladder.
        let c = single(8, Gate::mcx((0..6).map(Control::on).collect(), 6));
        assert_equivalent(&c, &lower(&c).unwrap());
        let c = single(8, Gate::mcp(0.4, (0..6).map(Control::on).collect(), 7));
        assert_equivalent(&c, &lower(&c).unwrap());
    }

    #[test]
    fn borrowed_ladder() {
        // 6 controls + target + 5 spare: the ladder borrows four of them.
        let controls = vec![Control::on(0), Control::off(2), Control::on(4), Control::on(6), Control::off(8), Control::on(10)];
        let c = single(12, Gate::mcx(controls.clone(), 11));
        assert_equivalent(&c, &lower(&c).unwrap());
        let c = single(12, Gate::mcp(-0.8, controls, 11));
        assert_equivalent(&c, &lower(&c).unwrap());
    }

    #[test]
    fn insufficient_scratch() {
        let c = single(6, Gate::mcx((0..5).map(Control::on).collect(), 5));
        assert_eq!(
            lower(&c).unwrap_err(),
            LoweringError::InsufficientScratch { controls: 5, num_qubits: 6 }
        );
    }

    #[test]
    fn measurements_pass_through() {
        let mut c = Circuit::flat("m", 2);
        c.push(Gate::h(0)).unwrap();
        c.push(Gate::measure(0)).unwrap();
        let l = optimize(&lower(&c).unwrap(), 1);
        assert!(l.gates().last().unwrap().is_measure());
        assert!(is_basis(&l));
    }

    #[test]
    fn optimizer_cancels_and_fuses() {
        let mut c = Circuit::flat("o", 2);
        c.extend([Gate::cx(0, 1), Gate::cx(0, 1), Gate::h(0), Gate::h(0), Gate::x(1)]).unwrap();
        let l = optimize(&lower(&c).unwrap(), 1);
        assert_eq!(l.len(), 1);
        assert_equivalent(&c, &l);
        assert_eq!(optimize(&c, 0), c);
    }

    #[test]
    fn zyz_roundtrip() {
        for &(t, p, l) in &[(0.0, 0.0, 0.5), (PI, 0.2, -1.0), (1.0, 2.0, 3.0), (PI / 2.0, 0.0, PI)] {
            let m = u_matrix(t, p, l);
            let (t2, p2, l2) = zyz(&m);
            let m2 = u_matrix(t2, p2, l2);
            let d = distance_up_to_phase(
                &[vec![m[0][0], m[1][0]], vec![m[0][1], m[1][1]]],
                &[vec![m2[0][0], m2[1][0]], vec![m2[0][1], m2[1][1]]],
            );
            assert!(d < 1e-12, "{t} {p} {l}");
        }
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        let q = 0..n;
        prop_oneof![
            q.clone().prop_map(Gate::x),
            q.clone().prop_map(Gate::h),
            (q.clone(), -3.0..3.0f64).prop_map(|(q, t)| Gate::phase(t, q)),
            (q.clone(), 0.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(q, a, b, c)| Gate::u(a, b, c, q)),
            (q.clone(), q.clone()).prop_filter_map("distinct", |(a, b)| (a != b).then(|| Gate::cx(a, b))),
            (q.clone(), q.clone()).prop_filter_map("distinct", |(a, b)| (a != b).then(|| Gate::swap(a, b))),
            (proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..n), any::<u64>(), -3.0..3.0f64)
                .prop_map(move |(qs, pol, t)| {
                    let (&tgt, ctl) = qs.split_last().unwrap();
                    let controls = ctl.iter().enumerate().map(|(i, &c)| Control::when(c, pol >> i & 1 == 1)).collect();
                    if pol >> 63 == 1 { Gate::mcx(controls, tgt) } else { Gate::mcp(t, controls, tgt) }
                }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn lowering_preserves_unitary(gates in proptest::collection::vec(arb_gate(7), 1..12)) {
            let mut c = Circuit::flat("r", 7);
            c.extend(gates).unwrap();
            let lowered = lower(&c).unwrap();
            prop_assert!(is_basis(&lowered));
            let optimized = optimize(&lowered, 1);
            let u = unitary(&c).unwrap();
            prop_assert!(distance_up_to_phase(&u, &unitary(&lowered).unwrap()) < 1e-9);
            prop_assert!(distance_up_to_phase(&u, &unitary(&optimized).unwrap()) < 1e-9);
            prop_assert!(optimized.len() <= lowered.len());
            prop_assert_eq!(optimize(&optimized, 1), optimized);
        }
    }
}
