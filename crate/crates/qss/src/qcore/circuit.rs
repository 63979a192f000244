// Copyright 2026 The qss Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Circuits: ordered gate/measure/reset/conditional operations with JSON
//! serialization, trajectory execution, and exact branch enumeration.
//!
//! JSON op kinds: `gate`, `controlled_gate`, `measure`, `reset`,
//! `cond_gate`. Qubit indices are 1-based; classical bits are 0-based.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::qcore::gate::{GateKind, GateSpec};
use crate::qcore::state::{Control, DensityMatrix, State, StateVector};

/// One circuit operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircuitOp {
    /// Plain unitary gate.
    Gate {
        name: GateKind,
        targets: Vec<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        params: Vec<f64>,
    },
    /// Unitary gate applied coherently only where each control qubit holds
    /// its stated computational-basis value.
    ControlledGate {
        name: GateKind,
        targets: Vec<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        params: Vec<f64>,
        controls: Vec<Control>,
    },
    /// Projective Z-basis measurement of one qubit into a classical bit.
    Measure { qubit: usize, clbit: usize },
    /// Reset one qubit to `|0>`.
    Reset { qubit: usize },
    /// Gate applied iff the classical bit equals `value`.
    CondGate {
        name: GateKind,
        targets: Vec<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        params: Vec<f64>,
        clbit: usize,
        value: u8,
    },
}

impl CircuitOp {
    /// Gate payload if this op wraps one.
    pub fn gate_spec(&self) -> Option<GateSpec> {
        match self {
            CircuitOp::Gate { name, targets, params }
            | CircuitOp::ControlledGate { name, targets, params, .. }
            | CircuitOp::CondGate { name, targets, params, .. } => Some(GateSpec {
                name: *name,
                params: params.clone(),
                targets: targets.clone(),
            }),
            _ => None,
        }
    }

    /// All qubits the op touches (targets plus controls).
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            CircuitOp::Gate { targets, .. } | CircuitOp::CondGate { targets, .. } => {
                targets.clone()
            }
            CircuitOp::ControlledGate { targets, controls, .. } => {
                let mut qs = targets.clone();
                qs.extend(controls.iter().map(|c| c.qubit));
                qs
            }
            CircuitOp::Measure { qubit, .. } | CircuitOp::Reset { qubit } => vec![*qubit],
        }
    }

    /// True when the op acts unitarily on two or more qubits (the unit that
    /// attracts gate noise in noisy pipelines).
    pub fn is_multi_qubit_unitary(&self) -> bool {
        match self {
            CircuitOp::Gate { .. } | CircuitOp::ControlledGate { .. } => self.qubits().len() >= 2,
            _ => false,
        }
    }

    /// The JSON `kind` tag of this op.
    pub fn kind_name(&self) -> &'static str {
        match self {
            CircuitOp::Gate { .. } => "gate",
            CircuitOp::ControlledGate { .. } => "controlled_gate",
            CircuitOp::Measure { .. } => "measure",
            CircuitOp::Reset { .. } => "reset",
            CircuitOp::CondGate { .. } => "cond_gate",
        }
    }
}

/// An ordered operation list over `n_qubits` qubits and `n_clbits` bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_clbits: usize,
    pub ops: Vec<CircuitOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        Circuit { n_qubits, n_clbits, ops: Vec::new() }
    }

    /// Append a plain gate.
    pub fn push_gate(&mut self, name: GateKind, targets: Vec<usize>, params: Vec<f64>) {
        self.ops.push(CircuitOp::Gate { name, targets, params });
    }

    /// Validate every index and the write-before-read rule for clbits.
    pub fn validate(&self) -> Result<()> {
        let mut written = vec![false; self.n_clbits];
        for (i, op) in self.ops.iter().enumerate() {
            if let Some(g) = op.gate_spec() {
                g.validate_for(self.n_qubits)
                    .map_err(|e| QssError::Dimension(format!("op {i}: {e}")))?;
            }
            for q in op.qubits() {
                if q == 0 || q > self.n_qubits {
                    return Err(QssError::Dimension(format!(
                        "op {i}: qubit {q} out of range 1..={}",
                        self.n_qubits
                    )));
                }
            }
            match op {
                CircuitOp::ControlledGate { targets, controls, .. } => {
                    for c in controls {
                        if c.value > 1 {
                            return Err(QssError::Dimension(format!(
                                "op {i}: control value {} not a bit",
                                c.value
                            )));
                        }
                        if targets.contains(&c.qubit) {
                            return Err(QssError::Dimension(format!(
                                "op {i}: control qubit {} overlaps targets",
                                c.qubit
                            )));
                        }
                    }
                }
                CircuitOp::Measure { clbit, .. } => {
                    if *clbit >= self.n_clbits {
                        return Err(QssError::Dimension(format!(
                            "op {i}: clbit {clbit} out of range 0..{}",
                            self.n_clbits
                        )));
                    }
                    written[*clbit] = true;
                }
                CircuitOp::CondGate { clbit, value, .. } => {
                    if *clbit >= self.n_clbits {
                        return Err(QssError::Dimension(format!(
                            "op {i}: clbit {clbit} out of range 0..{}",
                            self.n_clbits
                        )));
                    }
                    if !written[*clbit] {
                        return Err(QssError::Dimension(format!(
                            "op {i}: conditional reads clbit {clbit} before any measure writes it"
                        )));
                    }
                    if *value > 1 {
                        return Err(QssError::Dimension(format!(
                            "op {i}: conditional value {value} not a bit"
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Reverse the circuit, inverting each gate. Fails if the circuit
    /// contains measurements, resets, or conditionals.
    pub fn inverted(&self) -> Result<Circuit> {
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in self.ops.iter().rev() {
            match op {
                CircuitOp::Gate { name, targets, params } => {
                    let inv = GateSpec {
                        name: *name,
                        params: params.clone(),
                        targets: targets.clone(),
                    }
                    .inverse();
                    ops.push(CircuitOp::Gate {
                        name: inv.name,
                        targets: inv.targets,
                        params: inv.params,
                    });
                }
                CircuitOp::ControlledGate { name, targets, params, controls } => {
                    let inv = GateSpec {
                        name: *name,
                        params: params.clone(),
                        targets: targets.clone(),
                    }
                    .inverse();
                    ops.push(CircuitOp::ControlledGate {
                        name: inv.name,
                        targets: inv.targets,
                        params: inv.params,
                        controls: controls.clone(),
                    });
                }
                _ => {
                    return Err(QssError::Consistency(
                        "cannot invert a circuit with measure/reset/conditional ops".into(),
                    ))
                }
            }
        }
        Ok(Circuit { n_qubits: self.n_qubits, n_clbits: 0, ops })
    }

    /// Parse the circuit JSON format.
    pub fn from_json(text: &str) -> Result<Circuit> {
        let c: Circuit = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    /// Serialize to the circuit JSON format.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Rewrite measure+conditional feed-forward into coherent controlled
    /// gates with all measurements deferred to the end of the circuit.
    pub fn deferred_measurement_rewrite(&self) -> Result<Circuit> {
        let mut clbit_source: Vec<Option<usize>> = vec![None; self.n_clbits];
        let mut ops = Vec::new();
        let mut tail = Vec::new();
        for op in &self.ops {
            match op {
                CircuitOp::Measure { qubit, clbit } => {
                    clbit_source[*clbit] = Some(*qubit);
                    tail.push(op.clone());
                }
                CircuitOp::CondGate { name, targets, params, clbit, value } => {
                    let q = clbit_source[*clbit].ok_or_else(|| {
                        QssError::Dimension(format!("clbit {clbit} never written"))
                    })?;
                    ops.push(CircuitOp::ControlledGate {
                        name: *name,
                        targets: targets.clone(),
                        params: params.clone(),
                        controls: vec![Control { qubit: q, value: *value }],
                    });
                }
                CircuitOp::Reset { .. } => {
                    return Err(QssError::Consistency(
                        "deferred rewrite does not support reset".into(),
                    ))
                }
                other => ops.push(other.clone()),
            }
        }
        ops.extend(tail);
        Ok(Circuit { n_qubits: self.n_qubits, n_clbits: self.n_clbits, ops })
    }

    /// Dense unitary of a measurement-free circuit, row-major `2^n x 2^n`.
    pub fn unitary(&self) -> Result<Vec<Complex64>> {
        self.validate()?;
        let dim = 1usize << self.n_qubits;
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        for b in 0..dim {
            let mut sv = StateVector::basis(self.n_qubits, b)?;
            for op in &self.ops {
                match op {
                    CircuitOp::Gate { .. } => {
                        sv.apply_gate(&op.gate_spec().unwrap())?;
                    }
                    CircuitOp::ControlledGate { controls, .. } => {
                        sv.apply_gate_controlled(controls, &op.gate_spec().unwrap())?;
                    }
                    _ => {
                        return Err(QssError::Consistency(
                            "unitary() requires a measurement-free circuit".into(),
                        ))
                    }
                }
            }
            cols.push(sv.amplitudes().to_vec());
        }
        let mut u = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (c, col) in cols.iter().enumerate() {
            for r in 0..dim {
                u[r * dim + c] = col[r];
            }
        }
        Ok(u)
    }
}

/// Record of classical bits produced by a circuit run; unwritten bits are
/// `None`.
pub type ClbitRecord = Vec<Option<u8>>;

/// Execute one stochastic trajectory of `circuit` on `state`.
///
/// Measurements collapse via the Born rule using `rng`; identical seeds give
/// identical outcomes. On a density matrix, measurement follows one sampled
/// branch (trajectory semantics) while `Reset` applies the exact reset
/// channel; use [`exact_branches`] for deterministic channel semantics.
pub fn apply_circuit<R: Rng>(
    state: State,
    circuit: &Circuit,
    rng: &mut R,
) -> Result<(State, ClbitRecord)> {
    circuit.validate()?;
    if state.n_qubits() != circuit.n_qubits {
        return Err(QssError::Dimension(format!(
            "circuit expects {} qubits, state has {}",
            circuit.n_qubits,
            state.n_qubits()
        )));
    }
    let mut clbits: ClbitRecord = vec![None; circuit.n_clbits];
    let mut state = state;
    for op in &circuit.ops {
        match op {
            CircuitOp::Gate { .. } => {
                let g = op.gate_spec().unwrap();
                state.apply_gate(&g)?;
            }
            CircuitOp::ControlledGate { controls, .. } => {
                let g = op.gate_spec().unwrap();
                match &mut state {
                    State::Pure(sv) => sv.apply_gate_controlled(controls, &g)?,
                    State::Mixed(dm) => dm.apply_gate_controlled(controls, &g)?,
                }
            }
            CircuitOp::Measure { qubit, clbit } => {
                let outcome = match &mut state {
                    State::Pure(sv) => sv.measure_qubit(*qubit, rng)?,
                    State::Mixed(dm) => dm.measure_qubit(*qubit, rng)?,
                };
                clbits[*clbit] = Some(outcome);
            }
            CircuitOp::Reset { qubit } => match &mut state {
                State::Pure(sv) => sv.reset_qubit(*qubit, rng)?,
                State::Mixed(dm) => {
                    let fresh = DensityMatrix::basis(1, 0)?;
                    *dm = dm.replace_subset(&[*qubit], &fresh)?;
                }
            },
            CircuitOp::CondGate { clbit, value, .. } => {
                let bit = clbits[*clbit].ok_or_else(|| {
                    QssError::Dimension(format!("conditional reads unwritten clbit {clbit}"))
                })?;
                if bit == *value {
                    let g = op.gate_spec().unwrap();
                    state.apply_gate(&g)?;
                }
            }
        }
    }
    Ok((state, clbits))
}

/// One exact measurement branch: joint probability of the recorded clbits,
/// the classical record, and the normalized conditional state.
#[derive(Debug, Clone)]
pub struct Branch {
    pub probability: f64,
    pub clbits: ClbitRecord,
    pub dm: DensityMatrix,
}

const MAX_BRANCH_MEASURES: usize = 12;

/// Enumerate every measurement branch of `circuit` exactly.
///
/// `Measure` splits each live branch in two (zero-probability branches are
/// dropped); conditionals follow the branch's own record; `Reset` applies
/// the exact reset channel. The weighted sum of branch density matrices is
/// the exact output channel of the circuit.
pub fn exact_branches(dm: &DensityMatrix, circuit: &Circuit) -> Result<Vec<Branch>> {
    circuit.validate()?;
    if dm.n_qubits() != circuit.n_qubits {
        return Err(QssError::Dimension(format!(
            "circuit expects {} qubits, state has {}",
            circuit.n_qubits,
            dm.n_qubits()
        )));
    }
    let n_measures = circuit
        .ops
        .iter()
        .filter(|op| matches!(op, CircuitOp::Measure { .. }))
        .count();
    if n_measures > MAX_BRANCH_MEASURES {
        return Err(QssError::Dimension(format!(
            "exact_branches limited to {MAX_BRANCH_MEASURES} measurements, circuit has {n_measures}"
        )));
    }
    let mut branches = vec![Branch {
        probability: 1.0,
        clbits: vec![None; circuit.n_clbits],
        dm: dm.clone(),
    }];
    for op in &circuit.ops {
        match op {
            CircuitOp::Gate { .. } => {
                let g = op.gate_spec().unwrap();
                for b in &mut branches {
                    b.dm.apply_gate(&g)?;
                }
            }
            CircuitOp::ControlledGate { controls, .. } => {
                let g = op.gate_spec().unwrap();
                for b in &mut branches {
                    b.dm.apply_gate_controlled(controls, &g)?;
                }
            }
            CircuitOp::Measure { qubit, clbit } => {
                let mut next = Vec::with_capacity(branches.len() * 2);
                for b in branches {
                    for value in 0..=1u8 {
                        let w = b.dm.branch_weight(*qubit, value)?;
                        if w < 1e-14 {
                            continue;
                        }
                        let mut dm = b.dm.clone();
                        dm.project_qubit(*qubit, value)?;
                        let mut clbits = b.clbits.clone();
                        clbits[*clbit] = Some(value);
                        next.push(Branch { probability: b.probability * w, clbits, dm });
                    }
                }
                branches = next;
            }
            CircuitOp::Reset { qubit } => {
                let fresh = DensityMatrix::basis(1, 0)?;
                for b in &mut branches {
                    b.dm = b.dm.replace_subset(&[*qubit], &fresh)?;
                }
            }
            CircuitOp::CondGate { clbit, value, .. } => {
                let g = op.gate_spec().unwrap();
                for b in &mut branches {
                    let bit = b.clbits[*clbit].ok_or_else(|| {
                        QssError::Dimension(format!("conditional reads unwritten clbit {clbit}"))
                    })?;
                    if bit == *value {
                        b.dm.apply_gate(&g)?;
                    }
                }
            }
        }
    }
    Ok(branches)
}

/// Circuit realizing `R_X(theta)` or `R_Y(theta)` with only `{R_Z, sqrt(X)}`
/// gates, exact up to global phase.
pub fn native_decomposition(axis: char, theta: f64) -> Result<Circuit> {
    use std::f64::consts::PI;
    let mut c = Circuit::new(1, 0);
    match axis {
        'X' | 'x' => {
            c.push_gate(GateKind::Rz, vec![1], vec![PI / 2.0]);
            c.push_gate(GateKind::Sx, vec![1], vec![]);
            c.push_gate(GateKind::Rz, vec![1], vec![theta + PI]);
            c.push_gate(GateKind::Sx, vec![1], vec![]);
            c.push_gate(GateKind::Rz, vec![1], vec![PI / 2.0]);
        }
        'Y' | 'y' => {
            c.push_gate(GateKind::Sx, vec![1], vec![]);
            c.push_gate(GateKind::Rz, vec![1], vec![theta + PI]);
            c.push_gate(GateKind::Sx, vec![1], vec![]);
            c.push_gate(GateKind::Rz, vec![1], vec![PI]);
        }
        other => {
            return Err(QssError::Parse(format!(
                "native_decomposition axis must be X or Y, got {other}"
            )))
        }
    }
    Ok(c)
}
