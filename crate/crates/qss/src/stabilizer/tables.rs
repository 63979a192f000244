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

//! Correction tables for erasure subsets, derived by brute force over all
//! Pauli errors on the subset, plus GF(2) compilation into linear masks for
//! coherent feed-forward networks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::qcore::Circuit;

use super::conjugate::conjugate_pauli;
use super::pauli::{syndrome_key, syndrome_of, GeneratorSet, PauliLetter, PauliString};

/// Map from syndrome bit strings to the single-qubit correction applied to
/// the decoded secret qubit. Corrections are compared modulo global phase,
/// so a bare letter suffices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct CorrectionTable {
    /// Erased qubits, 1-based, ascending.
    pub subset: Vec<usize>,
    /// Syndrome key (generator 1 leftmost) to correction letter.
    pub rows: BTreeMap<String, PauliLetter>,
}

#[derive(Serialize, Deserialize)]
struct RowRepr {
    syndrome: String,
    correction: String,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    subset: Vec<usize>,
    rows: Vec<RowRepr>,
}

impl From<CorrectionTable> for TableRepr {
    fn from(t: CorrectionTable) -> Self {
        TableRepr {
            subset: t.subset,
            rows: t
                .rows
                .into_iter()
                .map(|(syndrome, letter)| RowRepr {
                    syndrome,
                    correction: letter.as_char().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<TableRepr> for CorrectionTable {
    type Error = QssError;

    fn try_from(repr: TableRepr) -> Result<Self> {
        let mut rows = BTreeMap::new();
        let mut width = None;
        for row in repr.rows {
            if !row.syndrome.chars().all(|c| c == '0' || c == '1') {
                return Err(QssError::Parse(format!(
                    "syndrome '{}' must be a bit string",
                    row.syndrome
                )));
            }
            match width {
                None => width = Some(row.syndrome.len()),
                Some(w) if w != row.syndrome.len() => {
                    return Err(QssError::Parse("mixed syndrome lengths in table".into()))
                }
                _ => {}
            }
            let mut chars = row.correction.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(c), None) => PauliLetter::from_char(c)?,
                _ => {
                    return Err(QssError::Parse(format!(
                        "correction '{}' must be a single Pauli letter",
                        row.correction
                    )))
                }
            };
            if rows.insert(row.syndrome.clone(), letter).is_some() {
                return Err(QssError::Parse(format!(
                    "duplicate syndrome '{}' in table",
                    row.syndrome
                )));
            }
        }
        Ok(CorrectionTable { subset: repr.subset, rows })
    }
}

impl CorrectionTable {
    pub fn lookup(&self, syndrome: &str) -> Option<PauliLetter> {
        self.rows.get(syndrome).copied()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// All `4^|subset|` Pauli strings supported on `subset`, identity elsewhere.
pub fn errors_on_subset(n: usize, subset: &[usize]) -> Vec<PauliString> {
    let letters = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];
    let count = 1usize << (2 * subset.len());
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let mut p = PauliString::identity(n);
        for (pos, &q) in subset.iter().enumerate() {
            p.set_letter(q, letters[(idx >> (2 * pos)) & 3]);
        }
        out.push(p);
    }
    out
}

fn validate_subset(n: usize, subset: &[usize]) -> Result<Vec<usize>> {
    let mut s: Vec<usize> = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() {
        return Err(QssError::Config(format!("subset {subset:?} has duplicates")));
    }
    for &q in &s {
        if q == 0 || q > n {
            return Err(QssError::Dimension(format!(
                "subset qubit {q} out of range 1..={n}"
            )));
        }
    }
    Ok(s)
}

/// Derive the correction table for erasing `subset`.
///
/// For each Pauli error `E` on the subset, the syndrome is the vector of
/// anticommutation bits against the generators, and the correction is the
/// secret-qubit letter of `U_dec E U_dec^dag` where `U_dec` is the decode
/// circuit's unitary. Two errors sharing a syndrome must agree on that
/// letter; otherwise the subset is not correctable and an error is returned.
///
/// `syndrome_qubits[i]` is the decoded register measured for generator `i`;
/// it is used to cross-check that the generator set is aligned with the
/// decode circuit (the residual must flip exactly the flagged registers).
pub fn derive_table(
    decode: &Circuit,
    gens: &GeneratorSet,
    secret_qubit: usize,
    syndrome_qubits: &[usize],
    subset: &[usize],
) -> Result<CorrectionTable> {
    let n = decode.n_qubits;
    if gens.n_qubits() != n {
        return Err(QssError::Dimension(format!(
            "generators on {} qubits vs circuit on {n}",
            gens.n_qubits()
        )));
    }
    if syndrome_qubits.len() != gens.generators.len() {
        return Err(QssError::Dimension(
            "one syndrome register required per generator".into(),
        ));
    }
    let subset = validate_subset(n, subset)?;

    let mut rows: BTreeMap<String, PauliLetter> = BTreeMap::new();
    let mut witness: BTreeMap<String, PauliString> = BTreeMap::new();
    for error in errors_on_subset(n, &subset) {
        let bits = syndrome_of(&error, gens)?;
        let key = syndrome_key(&bits);
        let residual = conjugate_pauli(decode, &error)?;
        for (i, &q) in syndrome_qubits.iter().enumerate() {
            let (x, _) = residual.letter(q).xz();
            if x != bits[i] {
                return Err(QssError::Consistency(format!(
                    "generator {i} not aligned with decode circuit: error {error} \
                     has syndrome bit {} but residual {residual} on register {q}",
                    bits[i]
                )));
            }
        }
        let letter = residual.letter(secret_qubit);
        match rows.get(&key) {
            None => {
                rows.insert(key.clone(), letter);
                witness.insert(key, error);
            }
            Some(&prev) if prev == letter => {}
            Some(&prev) => {
                return Err(QssError::Uncorrectable(format!(
                    "subset {subset:?} is not correctable: errors {} and {error} share \
                     syndrome {key} but need corrections {} and {}",
                    witness[&key],
                    prev.as_char(),
                    letter.as_char()
                )));
            }
        }
    }
    Ok(CorrectionTable { subset, rows })
}

/// One divergence between two tables for the same subset.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMismatch {
    pub syndrome: String,
    pub derived: Option<char>,
    pub stored: Option<char>,
}

/// Row-by-row comparison report.
#[derive(Debug, Clone)]
pub struct TableReport {
    pub subset_match: bool,
    pub mismatches: Vec<TableMismatch>,
}

impl TableReport {
    pub fn is_match(&self) -> bool {
        self.subset_match && self.mismatches.is_empty()
    }
}

/// Compare a derived table against a stored one, row by row.
pub fn table_consistency_check(derived: &CorrectionTable, stored: &CorrectionTable) -> TableReport {
    let mut mismatches = Vec::new();
    for (key, &d) in &derived.rows {
        match stored.rows.get(key) {
            Some(&s) if s == d => {}
            other => mismatches.push(TableMismatch {
                syndrome: key.clone(),
                derived: Some(d.as_char()),
                stored: other.map(|l| l.as_char()),
            }),
        }
    }
    for (key, &s) in &stored.rows {
        if !derived.rows.contains_key(key) {
            mismatches.push(TableMismatch {
                syndrome: key.clone(),
                derived: None,
                stored: Some(s.as_char()),
            });
        }
    }
    TableReport {
        subset_match: derived.subset == stored.subset,
        mismatches,
    }
}

/// GF(2)-linear form of a correction table: apply `X` to the secret qubit
/// iff `<x_mask, b> = 1` and `Z` iff `<z_mask, b> = 1` (both for `Y`).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMasks {
    pub x_mask: Vec<u8>,
    pub z_mask: Vec<u8>,
}

impl LinearMasks {
    /// Correction letter the masks assign to a syndrome.
    pub fn letter_for(&self, bits: &[u8]) -> PauliLetter {
        let dot = |mask: &[u8]| {
            mask.iter()
                .zip(bits.iter())
                .fold(0u8, |acc, (&m, &b)| acc ^ (m & b))
        };
        match (dot(&self.x_mask), dot(&self.z_mask)) {
            (0, 0) => PauliLetter::I,
            (1, 0) => PauliLetter::X,
            (0, _) => PauliLetter::Z,
            _ => PauliLetter::Y,
        }
    }
}

/// Solve `A u = b` over GF(2); free variables set to 0; `None` if
/// inconsistent.
fn gf2_solve(a: &[Vec<u8>], b: &[u8], m: usize) -> Option<Vec<u8>> {
    let mut rows: Vec<(Vec<u8>, u8)> = a.iter().cloned().zip(b.iter().copied()).collect();
    let mut pivot_of_col = vec![None; m];
    let mut rank = 0;
    for col in 0..m {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r].0[col] == 1) else {
            continue;
        };
        rows.swap(rank, pr);
        let (pivot_row, pivot_rhs) = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.0[col] == 1 {
                for c in 0..m {
                    row.0[c] ^= pivot_row[c];
                }
                row.1 ^= pivot_rhs;
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    // Zero rows with nonzero right-hand side mean no solution exists.
    for (row, rhs) in &rows {
        if row.iter().all(|&v| v == 0) && *rhs == 1 {
            return None;
        }
    }
    let mut u = vec![0u8; m];
    for col in 0..m {
        if let Some(r) = pivot_of_col[col] {
            u[col] = rows[r].1;
        }
    }
    Some(u)
}

/// Compile a table into linear masks, verifying every row. Fails when the
/// table is not a GF(2)-linear function of the syndrome.
pub fn compile_linear_masks(table: &CorrectionTable) -> Result<LinearMasks> {
    let Some(width) = table.rows.keys().next().map(|k| k.len()) else {
        return Err(QssError::Consistency("cannot compile an empty table".into()));
    };
    let mut a = Vec::with_capacity(table.rows.len());
    let mut bx = Vec::with_capacity(table.rows.len());
    let mut bz = Vec::with_capacity(table.rows.len());
    for (key, letter) in &table.rows {
        let bits: Vec<u8> = key.bytes().map(|c| c - b'0').collect();
        let (x, z) = letter.xz();
        a.push(bits);
        bx.push(x);
        bz.push(z);
    }
    let x_mask = gf2_solve(&a, &bx, width);
    let z_mask = gf2_solve(&a, &bz, width);
    let masks = match (x_mask, z_mask) {
        (Some(x_mask), Some(z_mask)) => LinearMasks { x_mask, z_mask },
        _ => {
            return Err(QssError::Consistency(
                "correction table is not a linear function of the syndrome".into(),
            ))
        }
    };
    // The solver only enforces a spanning subset; re-check every row.
    for (key, &letter) in &table.rows {
        let bits: Vec<u8> = key.bytes().map(|c| c - b'0').collect();
        if masks.letter_for(&bits) != letter {
            return Err(QssError::Consistency(
                "correction table is not a linear function of the syndrome".into(),
            ));
        }
    }
    Ok(masks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::GateKind;

    fn five_qubit_fixture() -> (Circuit, GeneratorSet) {
        let mut encode = Circuit::new(5, 0);
        for q in [4, 3, 2, 1] {
            encode.push_gate(GateKind::H, vec![q], vec![]);
        }
        for c in [4, 3, 2, 1] {
            encode.push_gate(GateKind::Cx, vec![c, 5], vec![]);
        }
        for (a, b) in [(5, 1), (4, 5), (3, 4), (2, 3), (1, 2)] {
            encode.push_gate(GateKind::Cz, vec![a, b], vec![]);
        }
        let gens = GeneratorSet {
            generators: vec![
                PauliString::parse("+YZIZY").unwrap(),
                PauliString::parse("+IXZZX").unwrap(),
                PauliString::parse("+ZZXIX").unwrap(),
                PauliString::parse("+ZIZYY").unwrap(),
            ],
            logical_z: PauliString::parse("+ZZZZZ").unwrap(),
            logical_x: PauliString::parse("+XXXXX").unwrap(),
        };
        (encode, gens)
    }

    #[test]
    fn five_qubit_subset_12_derives_consistently() {
        let (encode, gens) = five_qubit_fixture();
        let decode = encode.inverted().unwrap();
        let table = derive_table(&decode, &gens, 5, &[1, 2, 3, 4], &[1, 2]).unwrap();
        assert_eq!(table.len(), 16);
        assert_eq!(table.lookup("0000"), Some(PauliLetter::I));
        // Error X on qubit 1 has syndrome 1011; the correction must undo the
        // residual X Z = -iY, i.e. letter Y.
        assert_eq!(table.lookup("1011"), Some(PauliLetter::Y));

        let masks = compile_linear_masks(&table).unwrap();
        assert_eq!(masks.x_mask, vec![0, 0, 1, 0]);
        assert_eq!(masks.z_mask, vec![0, 0, 0, 1]);
    }

    #[test]
    fn repetition_code_subset_is_uncorrectable() {
        // Bit-flip repetition code: protects X errors only, so erasing a
        // qubit (arbitrary Pauli) is uncorrectable: X1 and Y1 share a
        // syndrome but leave different residuals.
        let mut encode = Circuit::new(3, 0);
        encode.push_gate(GateKind::Cx, vec![3, 1], vec![]);
        encode.push_gate(GateKind::Cx, vec![3, 2], vec![]);
        let gens = GeneratorSet {
            generators: vec![
                PauliString::parse("+ZIZ").unwrap(),
                PauliString::parse("+IZZ").unwrap(),
            ],
            logical_z: PauliString::parse("+IIZ").unwrap(),
            logical_x: PauliString::parse("+XXX").unwrap(),
        };
        gens.validate().unwrap();
        let decode = encode.inverted().unwrap();
        let err = derive_table(&decode, &gens, 3, &[1, 2], &[1]).unwrap_err();
        assert!(matches!(err, QssError::Uncorrectable(_)), "{err}");
    }

    #[test]
    fn consistency_check_reports_differences() {
        let (encode, gens) = five_qubit_fixture();
        let decode = encode.inverted().unwrap();
        let derived = derive_table(&decode, &gens, 5, &[1, 2, 3, 4], &[1, 2]).unwrap();

        let report = table_consistency_check(&derived, &derived.clone());
        assert!(report.is_match());

        let mut tampered = derived.clone();
        tampered.rows.insert("1011".into(), PauliLetter::X);
        let report = table_consistency_check(&derived, &tampered);
        assert!(!report.is_match());
        assert_eq!(report.mismatches.len(), 1);
        assert_eq!(report.mismatches[0].syndrome, "1011");

        let mut truncated = derived.clone();
        truncated.rows.remove("0001");
        let report = table_consistency_check(&derived, &truncated);
        assert_eq!(report.mismatches.len(), 1);
        assert_eq!(report.mismatches[0].stored, None);
    }

    #[test]
    fn table_json_roundtrip_matches_wire_format() {
        let (encode, gens) = five_qubit_fixture();
        let decode = encode.inverted().unwrap();
        let table = derive_table(&decode, &gens, 5, &[1, 2, 3, 4], &[1, 2]).unwrap();
        let json = serde_json::to_string(&table).unwrap();
        assert!(json.contains("\"subset\":[1,2]"));
        assert!(json.contains("\"syndrome\":\"0000\""));
        assert!(json.contains("\"correction\":\"I\""));
        let back: CorrectionTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, table);

        let bad = r#"{"subset":[1],"rows":[{"syndrome":"0a","correction":"X"}]}"#;
        assert!(serde_json::from_str::<CorrectionTable>(bad).is_err());
        let dup = r#"{"subset":[1],"rows":[
            {"syndrome":"00","correction":"X"},
            {"syndrome":"00","correction":"Y"}]}"#;
        assert!(serde_json::from_str::<CorrectionTable>(dup).is_err());
    }

    #[test]
    fn gf2_solver_handles_inconsistent_and_free_systems() {
        // x1 ^ x2 = 1, x1 = 1, x2 = 1 is inconsistent.
        let a = vec![vec![1, 1], vec![1, 0], vec![0, 1]];
        assert!(gf2_solve(&a, &[1, 1, 1], 2).is_none());
        // Single equation with a free variable solves with the free bit 0.
        let a = vec![vec![1, 1, 0]];
        let u = gf2_solve(&a, &[1], 3).unwrap();
        assert_eq!(u, vec![1, 0, 0]);

        let table = CorrectionTable {
            subset: vec![1],
            rows: [("00".to_string(), PauliLetter::I), ("11".to_string(), PauliLetter::X)]
                .into_iter()
                .collect(),
        };
        let masks = compile_linear_masks(&table).unwrap();
        assert_eq!(masks.letter_for(&[1, 1]), PauliLetter::X);

        // Affine-but-not-linear table must be rejected.
        let bad = CorrectionTable {
            subset: vec![1],
            rows: [("00".to_string(), PauliLetter::X), ("01".to_string(), PauliLetter::I)]
                .into_iter()
                .collect(),
        };
        assert!(compile_linear_masks(&bad).is_err());
    }
}
