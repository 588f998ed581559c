//! Gate-level circuit IR.

use crate::registers::RegisterMap;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    IndexOutOfRange { qubit: usize, num_qubits: usize },
    #[error("measurements must be the last operations of a circuit")]
    MeasureNotTerminal,
    #[error("circuit contains a measurement and has no adjoint")]
    NonUnitaryGate,
    #[error("gate {0} uses qubit {1} more than once")]
    RepeatedQubit(&'static str, usize),
    #[error("gate {0} has a non-finite parameter")]
    NonFiniteParameter(&'static str),
    #[error("gate {kind} expects {expected} but got {got}")]
    Arity {
        kind: &'static str,
        expected: &'static str,
        got: String,
    },
    #[error("qubit mapping has {mapping} entries but the appended circuit has {qubits} qubits")]
    MappingLength { mapping: usize, qubits: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    Swap,
    Phase(f64),
    U { theta: f64, phi: f64, lambda: f64 },
    ControlledPhase(f64),
    MultiControlledX,
    MultiControlledPhase(f64),
    Measure,
}

/// A control qubit; `on_one == false` conditions on |0⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub qubit: usize,
    pub on_one: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self {
            qubit,
            on_one: true,
        }
    }

    pub fn off(qubit: usize) -> Self {
        Self {
            qubit,
            on_one: false,
        }
    }

    pub fn when(qubit: usize, value: bool) -> Self {
        Self {
            qubit,
            on_one: value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<Control>,
}

impl Gate {
    fn plain(kind: GateKind, targets: Vec<usize>) -> Self {
        Self {
            kind,
            targets,
            controls: Vec::new(),
        }
    }

    pub fn x(q: usize) -> Self {
        Self::plain(GateKind::X, vec![q])
    }

    pub fn h(q: usize) -> Self {
        Self::plain(GateKind::H, vec![q])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::plain(GateKind::Swap, vec![a, b])
    }

    pub fn phase(theta: f64, q: usize) -> Self {
        Self::plain(GateKind::Phase(theta), vec![q])
    }

    pub fn u(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Self::plain(GateKind::U { theta, phi, lambda }, vec![q])
    }

    pub fn cp(theta: f64, control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::ControlledPhase(theta),
            targets: vec![target],
            controls: vec![Control::on(control)],
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::mcx(vec![Control::on(control)], target)
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Self {
            kind: GateKind::MultiControlledX,
            targets: vec![target],
            controls,
        }
    }

    pub fn mcp(theta: f64, controls: Vec<Control>, target: usize) -> Self {
        Self {
            kind: GateKind::MultiControlledPhase(theta),
            targets: vec![target],
            controls,
        }
    }

    pub fn measure(q: usize) -> Self {
        Self::plain(GateKind::Measure, vec![q])
    }

    pub fn is_measure(&self) -> bool {
        self.kind == GateKind::Measure
    }

    /// CX is a multi-controlled X with a single positive control.
    pub fn is_cx(&self) -> bool {
        self.kind == GateKind::MultiControlledX
            && self.controls.len() == 1
            && self.controls[0].on_one
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Swap => "SWAP",
            GateKind::Phase(_) => "P",
            GateKind::U { .. } => "U",
            GateKind::ControlledPhase(_) => "CP",
            GateKind::MultiControlledX if self.is_cx() => "CX",
            GateKind::MultiControlledX => "MCX",
            GateKind::MultiControlledPhase(_) => "MCP",
            GateKind::Measure => "MEASURE",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match self.kind {
            GateKind::Phase(t) | GateKind::ControlledPhase(t) | GateKind::MultiControlledPhase(t) => {
                vec![t]
            }
            GateKind::U { theta, phi, lambda } => vec![theta, phi, lambda],
            _ => Vec::new(),
        }
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets
            .iter()
            .copied()
            .chain(self.controls.iter().map(|c| c.qubit))
    }

    pub fn adjoint(&self) -> Result<Gate, CircuitError> {
        let kind = match self.kind {
            GateKind::Measure => return Err(CircuitError::NonUnitaryGate),
            GateKind::X | GateKind::H | GateKind::Swap | GateKind::MultiControlledX => self.kind,
            GateKind::Phase(t) => GateKind::Phase(-t),
            GateKind::ControlledPhase(t) => GateKind::ControlledPhase(-t),
            GateKind::MultiControlledPhase(t) => GateKind::MultiControlledPhase(-t),
            GateKind::U { theta, phi, lambda } => GateKind::U {
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
        };
        Ok(Gate {
            kind,
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        })
    }

    fn validate(&self, num_qubits: usize) -> Result<(), CircuitError> {
        let name = self.name();
        let (targets, controls): (usize, &str) = match self.kind {
            GateKind::Swap => (2, "none"),
            GateKind::ControlledPhase(_) => (1, "one"),
            GateKind::MultiControlledX | GateKind::MultiControlledPhase(_) => (1, "any"),
            _ => (1, "none"),
        };
        if self.targets.len() != targets {
            return Err(CircuitError::Arity {
                kind: name,
                expected: if targets == 2 { "two targets" } else { "one target" },
                got: format!("{} targets", self.targets.len()),
            });
        }
        let controls_ok = match controls {
            "none" => self.controls.is_empty(),
            "one" => self.controls.len() == 1,
            _ => true,
        };
        if !controls_ok {
            return Err(CircuitError::Arity {
                kind: name,
                expected: if controls == "one" { "one control" } else { "no controls" },
                got: format!("{} controls", self.controls.len()),
            });
        }
        if self.params().iter().any(|p| !p.is_finite()) {
            return Err(CircuitError::NonFiniteParameter(name));
        }
        let mut seen = Vec::with_capacity(self.targets.len() + self.controls.len());
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(CircuitError::IndexOutOfRange { qubit: q, num_qubits });
            }
            if seen.contains(&q) {
                return Err(CircuitError::RepeatedQubit(name, q));
            }
            seen.push(q);
        }
        Ok(())
    }

    fn remapped(&self, mapping: &[usize]) -> Gate {
        Gate {
            kind: self.kind,
            targets: self.targets.iter().map(|&q| mapping[q]).collect(),
            controls: self
                .controls
                .iter()
                .map(|c| Control {
                    qubit: mapping[c.qubit],
                    on_one: c.on_one,
                })
                .collect(),
        }
    }
}

impl fmt::Display for Gate {
    /// `KIND(params) targets | controls(polarity)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let params = self.params();
        if !params.is_empty() {
            let joined: Vec<String> = params.iter().map(|p| format!("{p}")).collect();
            write!(f, "({})", joined.join(","))?;
        }
        let targets: Vec<String> = self.targets.iter().map(|t| t.to_string()).collect();
        write!(f, " {}", targets.join(" "))?;
        if !self.controls.is_empty() {
            let controls: Vec<String> = self
                .controls
                .iter()
                .map(|c| format!("{}({})", c.qubit, if c.on_one { '+' } else { '-' }))
                .collect();
            write!(f, " | {}", controls.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    name: String,
    register_map: RegisterMap,
    gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CircuitMetrics {
    pub gate_count: usize,
    pub depth: usize,
    pub per_kind_counts: BTreeMap<&'static str, usize>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, register_map: RegisterMap) -> Self {
        Self {
            name: name.into(),
            register_map,
            gates: Vec::new(),
        }
    }

    /// Circuit over an anonymous register of `n` qubits.
    pub fn flat(name: impl Into<String>, n: usize) -> Self {
        Self::new(name, RegisterMap::flat(n))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn register_map(&self) -> &RegisterMap {
        &self.register_map
    }

    pub fn num_qubits(&self) -> usize {
        self.register_map.total_qubits()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn has_measurements(&self) -> bool {
        self.gates.iter().any(Gate::is_measure)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.num_qubits())?;
        if !gate.is_measure() && self.gates.last().is_some_and(Gate::is_measure) {
            return Err(CircuitError::MeasureNotTerminal);
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<(), CircuitError> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Appends `other` after `self`. `mapping[i]` is the qubit of `self` that
    /// qubit `i` of `other` lands on; `None` maps qubits one to one.
    pub fn compose(&self, other: &Circuit, mapping: Option<&[usize]>) -> Result<Circuit, CircuitError> {
        let mut out = self.clone();
        out.append(other, mapping)?;
        Ok(out)
    }

    /// In-place variant of [`Circuit::compose`].
    pub fn append(&mut self, other: &Circuit, mapping: Option<&[usize]>) -> Result<(), CircuitError> {
        if self.has_measurements() && !other.is_empty() {
            return Err(CircuitError::MeasureNotTerminal);
        }
        let identity: Vec<usize>;
        let mapping = match mapping {
            Some(m) => {
                if m.len() != other.num_qubits() {
                    return Err(CircuitError::MappingLength {
                        mapping: m.len(),
                        qubits: other.num_qubits(),
                    });
                }
                m
            }
            None => {
                identity = (0..other.num_qubits()).collect();
                &identity
            }
        };
        if let Some(&bad) = mapping.iter().find(|&&q| q >= self.num_qubits()) {
            return Err(CircuitError::IndexOutOfRange {
                qubit: bad,
                num_qubits: self.num_qubits(),
            });
        }
        self.gates.reserve(other.len());
        for g in &other.gates {
            self.push(g.remapped(mapping))?;
        }
        Ok(())
    }

    pub fn inverse(&self) -> Result<Circuit, CircuitError> {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(Gate::adjoint)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Circuit {
            name: format!("{}_dg", self.name),
            register_map: self.register_map.clone(),
            gates,
        })
    }

    pub fn metrics(&self) -> CircuitMetrics {
        let mut frontier = vec![0usize; self.num_qubits()];
        let mut per_kind_counts = BTreeMap::new();
        let mut depth = 0;
        for g in &self.gates {
            let level = 1 + g.qubits().map(|q| frontier[q]).max().unwrap_or(0);
            for q in g.qubits() {
                frontier[q] = level;
            }
            depth = depth.max(level);
            *per_kind_counts.entry(g.name()).or_insert(0) += 1;
        }
        CircuitMetrics {
            gate_count: self.gates.len(),
            depth,
            per_kind_counts,
        }
    }

    /// One gate per line, see [`Gate`]'s `Display`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub(crate) fn from_parts(name: String, register_map: RegisterMap, gates: Vec<Gate>) -> Self {
        Self {
            name,
            register_map,
            gates,
        }
    }
}

/// Quantum Fourier transform on `n` qubits, terminal qubit-reversal swaps
/// included. Maps |k⟩ to 2^{-n/2} Σ_j exp(2πi·jk/2^n) |j⟩.
pub fn qft(n: usize) -> Circuit {
    assert!(n >= 1, "qft needs at least one qubit");
    let mut c = Circuit::flat(format!("qft{n}"), n);
    for j in (0..n).rev() {
        c.gates.push(Gate::h(j));
        for k in (0..j).rev() {
            c.gates.push(Gate::cp(PI / (1u64 << (j - k)) as f64, k, j));
        }
    }
    for i in 0..n / 2 {
        c.gates.push(Gate::swap(i, n - 1 - i));
    }
    c
}
