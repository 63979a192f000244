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

//! Encoding-circuit verification against a stored generator set.

use std::fmt;

use crate::error::{QssError, Result};
use crate::qcore::Circuit;

use super::conjugate::conjugate_pauli;
use super::pauli::{GeneratorSet, PauliLetter, PauliString};

/// One conjugation check: which Pauli was pushed through the encoder, what
/// came out, and what was expected.
#[derive(Debug, Clone)]
pub struct VerifyEntry {
    pub label: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

/// Outcome of [`verify_encoding`]; mismatches are report content, not errors.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub entries: Vec<VerifyEntry>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn mismatches(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }

    /// Mismatches among the generator rows only (logical rows excluded).
    pub fn generator_mismatches(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| !e.pass && e.label.starts_with("generator"))
            .count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "{}: expected {}, got {} [{}]",
                e.label,
                e.expected,
                e.got,
                if e.pass { "ok" } else { "MISMATCH" }
            )?;
        }
        Ok(())
    }
}

/// All `2^k` signed elements of the group generated by `gens` (phases exact).
fn stabilizer_group(gens: &[PauliString], n: usize) -> Result<Vec<PauliString>> {
    let mut elements = vec![PauliString::identity(n)];
    for g in gens {
        let mut next = Vec::with_capacity(elements.len() * 2);
        for e in &elements {
            next.push(e.clone());
            next.push(e.mul(g)?);
        }
        elements = next;
    }
    Ok(elements)
}

/// True iff `a` and `b` act identically on the code space stabilized by
/// `gens`: their quotient must be a stabilizer element with phase +1.
pub fn equivalent_on_code_space(
    a: &PauliString,
    b: &PauliString,
    gens: &GeneratorSet,
) -> Result<bool> {
    let quotient = a.mul(&b.adjoint())?;
    let group = stabilizer_group(&gens.generators, gens.n_qubits())?;
    Ok(group.contains(&quotient))
}

/// Verify that the encoding circuit maps single-qubit Z operators to the
/// stored generator set: `U Z_{a_i} U^dag` must equal generator `i` exactly
/// (phase +1 included) for each syndrome register `a_i`, and `U Z_s U^dag`
/// on the secret register must equal the stored logical Z. The stored
/// logical X is a coset representative fixed only up to stabilizer factors
/// and sign, so it is not an encoder-image check; its algebra is enforced
/// by [`GeneratorSet::validate`].
pub fn verify_encoding(
    encoding: &Circuit,
    gens: &GeneratorSet,
    syndrome_qubits: &[usize],
    secret_qubit: usize,
) -> Result<VerificationReport> {
    if syndrome_qubits.len() != gens.generators.len() {
        return Err(QssError::Dimension(
            "one syndrome register required per generator".into(),
        ));
    }
    let n = encoding.n_qubits;
    let mut entries = Vec::new();
    for (i, (&q, g)) in syndrome_qubits.iter().zip(gens.generators.iter()).enumerate() {
        let image = conjugate_pauli(encoding, &PauliString::single(n, q, PauliLetter::Z)?)?;
        entries.push(VerifyEntry {
            label: format!("generator {} (Z on register {q})", i + 1),
            expected: g.to_string(),
            got: image.to_string(),
            pass: image == *g,
        });
    }
    let z_image = conjugate_pauli(encoding, &PauliString::single(n, secret_qubit, PauliLetter::Z)?)?;
    entries.push(VerifyEntry {
        label: format!("logical Z (Z on register {secret_qubit})"),
        expected: gens.logical_z.to_string(),
        got: z_image.to_string(),
        pass: z_image == gens.logical_z,
    });
    Ok(VerificationReport { entries })
}
