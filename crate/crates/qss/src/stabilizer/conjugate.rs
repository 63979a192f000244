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

//! Exact Clifford conjugation of signed Pauli strings.
//!
//! `conjugate_pauli(circuit, p)` computes `U p U^dag` where `U` is the
//! unitary of a measurement-free Clifford circuit, tracking the phase in
//! `{+1, +i, -1, -i}` exactly.

use crate::error::{QssError, Result};
use crate::qcore::{Circuit, CircuitOp, GateKind};

use super::pauli::{PauliLetter, PauliString};

/// Images of `X_q` and `Z_q` under conjugation by one Clifford gate,
/// expressed on the gate's qubits only (letters elsewhere identity).
fn gate_images(
    kind: GateKind,
    targets: &[usize],
    n: usize,
) -> Result<Vec<(PauliString, PauliString)>> {
    let single = |q: usize, l: PauliLetter| PauliString::single(n, q, l);
    let pair = |qa: usize, la: PauliLetter, qb: usize, lb: PauliLetter| -> Result<PauliString> {
        let mut p = PauliString::identity(n);
        p.set_letter(qa, la);
        p.set_letter(qb, lb);
        Ok(p)
    };
    use PauliLetter::{X, Y, Z};
    match kind {
        GateKind::H => {
            let q = targets[0];
            Ok(vec![(single(q, Z)?, single(q, X)?)])
        }
        GateKind::S => {
            let q = targets[0];
            Ok(vec![(single(q, Y)?, single(q, Z)?)])
        }
        GateKind::Sdg => {
            let q = targets[0];
            let mut img_x = single(q, Y)?;
            img_x.add_phase_exp(2);
            Ok(vec![(img_x, single(q, Z)?)])
        }
        GateKind::X => {
            let q = targets[0];
            let mut img_z = single(q, Z)?;
            img_z.add_phase_exp(2);
            Ok(vec![(single(q, X)?, img_z)])
        }
        GateKind::Y => {
            let q = targets[0];
            let mut img_x = single(q, X)?;
            img_x.add_phase_exp(2);
            let mut img_z = single(q, Z)?;
            img_z.add_phase_exp(2);
            Ok(vec![(img_x, img_z)])
        }
        GateKind::Z => {
            let q = targets[0];
            let mut img_x = single(q, X)?;
            img_x.add_phase_exp(2);
            Ok(vec![(img_x, single(q, Z)?)])
        }
        GateKind::Cx => {
            let (c, t) = (targets[0], targets[1]);
            Ok(vec![
                (pair(c, X, t, X)?, single(c, Z)?),
                (single(t, X)?, pair(c, Z, t, Z)?),
            ])
        }
        GateKind::Cz => {
            let (a, b) = (targets[0], targets[1]);
            Ok(vec![
                (pair(a, X, b, Z)?, single(a, Z)?),
                (pair(a, Z, b, X)?, single(b, Z)?),
            ])
        }
        GateKind::Swap => {
            let (a, b) = (targets[0], targets[1]);
            Ok(vec![
                (single(b, X)?, single(b, Z)?),
                (single(a, X)?, single(a, Z)?),
            ])
        }
        other => Err(QssError::Config(format!(
            "gate '{}' is not in the supported Clifford set",
            other.json_name()
        ))),
    }
}

/// Conjugate `p` by a single Clifford gate: returns `G p G^dag`.
fn conjugate_by_gate(kind: GateKind, targets: &[usize], p: &PauliString) -> Result<PauliString> {
    let n = p.n_qubits();
    let images = gate_images(kind, targets, n)?;

    // Split p into the part outside the gate's qubits and per-qubit
    // X^x Z^z factors on the gate's qubits; Y contributes i X Z.
    let mut rest = p.clone();
    let mut factors: Vec<(u8, u8)> = Vec::with_capacity(targets.len());
    for &q in targets {
        let letter = rest.letter(q);
        let (x, z) = letter.xz();
        if letter == PauliLetter::Y {
            rest.add_phase_exp(1);
        }
        rest.set_letter(q, PauliLetter::I);
        factors.push((x, z));
    }

    // Factors on distinct qubits commute, so their images commute; the
    // X-before-Z order within each qubit is preserved by the mul order.
    let mut out = rest;
    for (&(x, z), (img_x, img_z)) in factors.iter().zip(images.iter()) {
        if x == 1 {
            out = out.mul(img_x)?;
        }
        if z == 1 {
            out = out.mul(img_z)?;
        }
    }
    Ok(out)
}

/// Conjugate `p` through an entire circuit in time order:
/// for `U = G_k ... G_1` (gate 1 applied first) returns `U p U^dag`.
///
/// Every op must be a plain gate from the Clifford set
/// `{h, s, sdg, x, y, z, cx, cz, swap}`.
pub fn conjugate_pauli(circuit: &Circuit, p: &PauliString) -> Result<PauliString> {
    if p.n_qubits() != circuit.n_qubits {
        return Err(QssError::Dimension(format!(
            "Pauli on {} qubits vs circuit on {}",
            p.n_qubits(),
            circuit.n_qubits
        )));
    }
    let mut cur = p.clone();
    for op in &circuit.ops {
        match op {
            CircuitOp::Gate { name, targets, .. } => {
                cur = conjugate_by_gate(*name, targets, &cur)?;
            }
            other => {
                return Err(QssError::Config(format!(
                    "conjugation requires a measurement-free Clifford circuit, found {}",
                    other.kind_name()
                )));
            }
        }
    }
    Ok(cur)
}
