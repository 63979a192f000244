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

//! Embedded code data and load-time validation.
//!
//! The registry ships the encoding circuits, stabilizer generators, and
//! correction tables for the three schemes as embedded JSON. `load` does not
//! trust that data: generators are checked for their commutation structure,
//! the encoding circuit is verified to map single-qubit Paulis onto the
//! claimed generators, correction tables are re-derived from scratch by
//! Clifford conjugation, and the shipped tables must agree with the derived
//! ones exactly. A corrupted data file fails loudly at load, never at decode.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::qcore::Circuit;
use crate::stabilizer::{
    compile_linear_masks, derive_table, table_consistency_check, verify_encoding, CorrectionTable,
    GeneratorSet, LinearMasks, PauliString,
};

const CODES_JSON: &str = include_str!("codes.json");

/// The three secret-sharing schemes shipped with this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Five shares of one qubit each; any three reconstruct one logical qubit.
    FiveQubit,
    /// Seven shares of one qubit each; five shares always reconstruct, and
    /// four shares suffice when the missing three form a correctable triple.
    Steane,
    /// Three shares of two qubits each (a qutrit embedded in a qubit pair);
    /// any two shares reconstruct one logical qutrit.
    Qutrit,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::FiveQubit, Scheme::Steane, Scheme::Qutrit];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::FiveQubit => "five_qubit",
            Scheme::Steane => "steane",
            Scheme::Qutrit => "qutrit",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = QssError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "five_qubit" | "5q" => Ok(Scheme::FiveQubit),
            "steane" => Ok(Scheme::Steane),
            "qutrit" => Ok(Scheme::Qutrit),
            other => Err(QssError::Parse(format!(
                "unknown scheme '{other}' (expected five_qubit, steane, or qutrit)"
            ))),
        }
    }
}

/// One share-recovery circuit for the qutrit scheme: with `erased_share`
/// missing, the circuit rebuilds the secret on `target_share` using only the
/// two `survivors`.
#[derive(Debug, Clone, Deserialize)]
pub struct QutritRecovery {
    pub erased_share: usize,
    pub survivors: Vec<usize>,
    pub target_share: usize,
    pub circuit: Circuit,
}

/// A fully validated secret-sharing code, ready for encode/decode work.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub name: Scheme,
    /// Physical qubits in the encoded state.
    pub n_physical: usize,
    /// Minimum distance of the underlying code (2 for the qutrit scheme,
    /// counted in qutrit units).
    pub distance: usize,
    /// Stabilizer data; `None` for the qutrit scheme.
    pub generators: Option<GeneratorSet>,
    /// Unitary that maps `|0..0> (x) |secret>` to the shared state.
    pub encoding: Circuit,
    /// Exact inverse of `encoding`.
    pub decoding: Circuit,
    /// After `decoding`, the qubit that holds the secret (for the qutrit
    /// scheme: the first qubit of the secret share's pair).
    pub secret_register: usize,
    /// After `decoding`, the qubits whose Z-basis values form the syndrome,
    /// ordered to match `generators` (empty for the qutrit scheme).
    pub syndrome_registers: Vec<usize>,
    /// Correction table per correctable erasure subset, derived at load.
    pub correction_tables: BTreeMap<Vec<usize>, CorrectionTable>,
    /// GF(2)-linear form of each correction table, for coherent correction.
    pub linear_masks: BTreeMap<Vec<usize>, LinearMasks>,
    /// Subsets whose tables ship with the code definition (all tables are
    /// re-derived at load; these are the published reference points and the
    /// default decoder choices for deliberate-mismatch studies).
    pub shipped_subsets: Vec<Vec<usize>>,
    /// Qubits of each share, 1-based share index = position + 1.
    pub shares: Vec<Vec<usize>>,
    /// Share-recovery circuits (qutrit scheme only).
    pub recoveries: Vec<QutritRecovery>,
}

#[derive(Deserialize)]
struct CodesFile {
    five_qubit: StabilizerBlock,
    steane: StabilizerBlock,
    qutrit: QutritBlock,
}

#[derive(Deserialize)]
struct StabilizerBlock {
    n_qubits: usize,
    secret_qubit: usize,
    syndrome_qubits: Vec<usize>,
    generators: Vec<PauliString>,
    logical_z: PauliString,
    logical_x: PauliString,
    encode: Circuit,
    stored_tables: Vec<CorrectionTable>,
}

#[derive(Deserialize)]
struct QutritBlock {
    n_qubits: usize,
    shares: Vec<Vec<usize>>,
    secret_share: usize,
    encode: Circuit,
    recoveries: Vec<QutritRecovery>,
}

/// All size-`k` subsets of `1..=n`, ascending within each subset.
fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for q in start..=n {
            cur.push(q);
            rec(q + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

fn load_stabilizer(name: Scheme, block: &StabilizerBlock, max_erasures: usize) -> Result<CodeSpec> {
    let gens = GeneratorSet {
        generators: block.generators.clone(),
        logical_z: block.logical_z.clone(),
        logical_x: block.logical_x.clone(),
    };
    gens.validate()?;
    if gens.n_qubits() != block.n_qubits {
        return Err(QssError::Consistency(format!(
            "{name}: generators act on {} qubits, circuit on {}",
            gens.n_qubits(),
            block.n_qubits
        )));
    }
    block.encode.validate()?;
    let decoding = block.encode.inverted()?;
    let report = verify_encoding(
        &block.encode,
        &gens,
        &block.syndrome_qubits,
        block.secret_qubit,
    )?;
    if !report.passed() {
        return Err(QssError::Consistency(format!(
            "{name}: encoding circuit does not realize the claimed stabilizers\n{report}"
        )));
    }

    // Re-derive every correctable erasure table from the circuit itself,
    // exhaustively over all subset sizes that could leave a working decoder
    // behind (an erasure of n-1 qubits would require a single qubit to hold
    // the secret alone, which privacy forbids). Sizes that admit no
    // consistent table simply contribute nothing.
    let mut correction_tables = BTreeMap::new();
    let mut linear_masks = BTreeMap::new();
    for k in 1..=max_erasures {
        for subset in subsets_of_size(block.n_qubits, k) {
            match derive_table(
                &decoding,
                &gens,
                block.secret_qubit,
                &block.syndrome_qubits,
                &subset,
            ) {
                Ok(table) => {
                    let masks = compile_linear_masks(&table)?;
                    correction_tables.insert(subset.clone(), table);
                    linear_masks.insert(subset, masks);
                }
                Err(QssError::Uncorrectable(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }

    // The shipped tables must agree with the derived ones row for row.
    for stored in &block.stored_tables {
        let derived = correction_tables.get(&stored.subset).ok_or_else(|| {
            QssError::Consistency(format!(
                "{name}: shipped table for subset {:?} is not derivable",
                stored.subset
            ))
        })?;
        let check = table_consistency_check(derived, stored);
        if !check.is_match() {
            return Err(QssError::Consistency(format!(
                "{name}: shipped table for subset {:?} disagrees with derivation: {} mismatches",
                stored.subset,
                check.mismatches.len()
            )));
        }
    }

    Ok(CodeSpec {
        name,
        n_physical: block.n_qubits,
        distance: 3,
        generators: Some(gens),
        encoding: block.encode.clone(),
        decoding,
        secret_register: block.secret_qubit,
        syndrome_registers: block.syndrome_qubits.clone(),
        correction_tables,
        linear_masks,
        shipped_subsets: block
            .stored_tables
            .iter()
            .map(|t| t.subset.clone())
            .collect(),
        shares: (1..=block.n_qubits).map(|q| vec![q]).collect(),
        recoveries: Vec::new(),
    })
}

fn load_qutrit(block: &QutritBlock) -> Result<CodeSpec> {
    if block.shares.len() != 3 {
        return Err(QssError::Consistency(
            "qutrit: expected exactly three shares".into(),
        ));
    }
    let mut seen = vec![false; block.n_qubits + 1];
    for pair in &block.shares {
        if pair.len() != 2 {
            return Err(QssError::Consistency(
                "qutrit: each share must hold a qubit pair".into(),
            ));
        }
        for &q in pair {
            if q == 0 || q > block.n_qubits || seen[q] {
                return Err(QssError::Consistency(format!(
                    "qutrit: share qubit {q} out of range or repeated"
                )));
            }
            seen[q] = true;
        }
    }
    if seen[1..].iter().any(|s| !s) {
        return Err(QssError::Consistency(
            "qutrit: shares do not cover all qubits".into(),
        ));
    }
    if block.secret_share == 0 || block.secret_share > 3 {
        return Err(QssError::Consistency(format!(
            "qutrit: secret share {} out of range",
            block.secret_share
        )));
    }
    block.encode.validate()?;

    if block.recoveries.len() != 3 {
        return Err(QssError::Consistency(
            "qutrit: expected one recovery per erasable share".into(),
        ));
    }
    for rec in &block.recoveries {
        rec.circuit.validate()?;
        let mut expect: Vec<usize> = (1..=3).filter(|&s| s != rec.erased_share).collect();
        expect.sort_unstable();
        let mut got = rec.survivors.clone();
        got.sort_unstable();
        if got != expect || !rec.survivors.contains(&rec.target_share) {
            return Err(QssError::Consistency(format!(
                "qutrit: recovery for erased share {} has inconsistent survivors/target",
                rec.erased_share
            )));
        }
    }

    Ok(CodeSpec {
        name: Scheme::Qutrit,
        n_physical: block.n_qubits,
        distance: 2,
        generators: None,
        encoding: block.encode.clone(),
        decoding: block.encode.inverted()?,
        secret_register: block.shares[block.secret_share - 1][0],
        syndrome_registers: Vec::new(),
        correction_tables: BTreeMap::new(),
        linear_masks: BTreeMap::new(),
        shipped_subsets: Vec::new(),
        shares: block.shares.clone(),
        recoveries: block.recoveries.clone(),
    })
}

fn load_uncached(scheme: Scheme) -> Result<CodeSpec> {
    let file: CodesFile = serde_json::from_str(CODES_JSON)
        .map_err(|e| QssError::Parse(format!("embedded code data: {e}")))?;
    match scheme {
        Scheme::FiveQubit => load_stabilizer(scheme, &file.five_qubit, 3),
        Scheme::Steane => load_stabilizer(scheme, &file.steane, 5),
        Scheme::Qutrit => load_qutrit(&file.qutrit),
    }
}

impl CodeSpec {
    /// Load (and fully validate) an embedded scheme. The result is cached,
    /// so repeated loads are free after the first.
    pub fn load(scheme: Scheme) -> Result<&'static CodeSpec> {
        static FIVE: OnceLock<CodeSpec> = OnceLock::new();
        static STEANE: OnceLock<CodeSpec> = OnceLock::new();
        static QUTRIT: OnceLock<CodeSpec> = OnceLock::new();
        let cell = match scheme {
            Scheme::FiveQubit => &FIVE,
            Scheme::Steane => &STEANE,
            Scheme::Qutrit => &QUTRIT,
        };
        if let Some(spec) = cell.get() {
            return Ok(spec);
        }
        let spec = load_uncached(scheme)?;
        Ok(cell.get_or_init(|| spec))
    }

    /// The correction tables exactly as shipped in the embedded code data,
    /// before re-derivation. Used to audit the published reference rows
    /// against what the circuits imply; the qutrit scheme ships none.
    pub fn shipped_tables(scheme: Scheme) -> Result<Vec<CorrectionTable>> {
        let file: CodesFile = serde_json::from_str(CODES_JSON)
            .map_err(|e| QssError::Parse(format!("embedded code data: {e}")))?;
        Ok(match scheme {
            Scheme::FiveQubit => file.five_qubit.stored_tables,
            Scheme::Steane => file.steane.stored_tables,
            Scheme::Qutrit => Vec::new(),
        })
    }

    /// The correction table for an erasure subset, if that erasure is
    /// correctable (subset order does not matter).
    pub fn table_for(&self, subset: &[usize]) -> Option<&CorrectionTable> {
        self.correction_tables.get(&sorted_dedup(subset))
    }

    /// The linear-mask form of `table_for(subset)`.
    pub fn masks_for(&self, subset: &[usize]) -> Option<&LinearMasks> {
        self.linear_masks.get(&sorted_dedup(subset))
    }

    /// Decoder used when an uncorrectable erasure is studied on purpose:
    /// the largest shipped table, i.e. the decoder an experimenter would
    /// have calibrated for the worst still-recoverable loss.
    pub fn fallback_table(&self) -> Option<&CorrectionTable> {
        self.shipped_subsets
            .iter()
            .max_by_key(|s| s.len())
            .and_then(|s| self.correction_tables.get(&sorted_dedup(s)))
    }

    /// For the qutrit scheme: which share (1-based) a qubit subset is, if it
    /// is exactly one share's pair.
    pub fn share_of(&self, subset: &[usize]) -> Option<usize> {
        let sub = sorted_dedup(subset);
        self.shares.iter().position(|pair| {
            let mut p = pair.clone();
            p.sort_unstable();
            p == sub
        }).map(|i| i + 1)
    }
}

pub(crate) fn sorted_dedup(subset: &[usize]) -> Vec<usize> {
    let mut v = subset.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_parse_roundtrip() {
        for s in Scheme::ALL {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
        }
        assert_eq!("FIVE-QUBIT".parse::<Scheme>().unwrap(), Scheme::FiveQubit);
        assert!("shor".parse::<Scheme>().is_err());
    }

    #[test]
    fn five_qubit_loads_with_all_small_erasure_tables() {
        let code = CodeSpec::load(Scheme::FiveQubit).unwrap();
        assert_eq!(code.n_physical, 5);
        assert_eq!(code.secret_register, 5);
        assert_eq!(code.syndrome_registers, vec![1, 2, 3, 4]);
        // Distance 3: every 1- and 2-qubit erasure is correctable, and no
        // 3-qubit erasure is (any three shares already reconstruct, so no
        // information survives outside them).
        assert_eq!(code.correction_tables.len(), 5 + 10);
        assert!(code.correction_tables.keys().all(|s| s.len() <= 2));
        for (subset, table) in &code.correction_tables {
            assert_eq!(&table.subset, subset);
            assert_eq!(table.len(), 1usize << (2 * subset.len().min(2)));
        }
        let t12 = code.table_for(&[2, 1]).unwrap();
        assert_eq!(t12.len(), 16);
        assert_eq!(t12.lookup("1011").unwrap().as_char(), 'Y');
    }

    #[test]
    fn steane_loads_with_correctable_triples() {
        let code = CodeSpec::load(Scheme::Steane).unwrap();
        assert_eq!(code.n_physical, 7);
        assert_eq!(code.secret_register, 1);
        assert_eq!(code.syndrome_registers, vec![2, 3, 4, 5, 6, 7]);
        let count_of = |k: usize| code.correction_tables.keys().filter(|s| s.len() == k).count();
        assert_eq!(count_of(1), 7);
        assert_eq!(count_of(2), 21);
        // 28 of the 35 triples are correctable; the 7 exceptions are exactly
        // the supports of the weight-3 logical operators.
        assert_eq!(count_of(3), 28);
        let triples: Vec<_> = code
            .correction_tables
            .keys()
            .filter(|s| s.len() == 3)
            .cloned()
            .collect();
        assert!(triples.contains(&vec![5, 6, 7]));
        let logical_triples = [
            [1, 2, 3],
            [1, 4, 5],
            [1, 6, 7],
            [2, 4, 6],
            [2, 5, 7],
            [3, 4, 7],
            [3, 5, 6],
        ];
        for t in logical_triples {
            assert!(!triples.contains(&t.to_vec()), "{t:?}");
        }
        // A 4-qubit erasure is correctable exactly when the erased set
        // contains no logical support, which happens for the 7 complements
        // of the triples above; no 5-qubit erasure is correctable.
        assert_eq!(count_of(4), 7);
        assert_eq!(count_of(5), 0);
        for t in logical_triples {
            let complement: Vec<usize> = (1..=7).filter(|q| !t.contains(q)).collect();
            assert!(
                code.correction_tables.contains_key(&complement),
                "{complement:?}"
            );
        }
        assert_eq!(code.table_for(&[5, 6, 7]).unwrap().len(), 64);
        assert_eq!(code.table_for(&[6, 7]).unwrap().len(), 16);
    }

    #[test]
    fn qutrit_loads_with_three_recoveries() {
        let code = CodeSpec::load(Scheme::Qutrit).unwrap();
        assert_eq!(code.n_physical, 6);
        assert_eq!(code.shares, vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
        assert_eq!(code.secret_register, 3);
        assert!(code.generators.is_none());
        assert_eq!(code.recoveries.len(), 3);
        assert_eq!(code.share_of(&[4, 3]), Some(2));
        assert_eq!(code.share_of(&[2, 3]), None);
        for rec in &code.recoveries {
            assert!(rec.survivors.contains(&rec.target_share));
            assert!(!rec.survivors.contains(&rec.erased_share));
        }
    }

    #[test]
    fn subsets_enumeration_counts() {
        assert_eq!(subsets_of_size(5, 2).len(), 10);
        assert_eq!(subsets_of_size(7, 3).len(), 35);
        assert_eq!(subsets_of_size(4, 4), vec![vec![1, 2, 3, 4]]);
    }
}
