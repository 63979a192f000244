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

//! Full state tomography over the `3^n` Pauli measurement settings: counts
//! collection, linear-inversion reconstruction, and projection to the
//! nearest physical state.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::linalg;
use crate::metrics::nearest_probability;
use crate::qcore::{measure_all, Counts, DensityMatrix, GateKind, GateSpec, State};

/// Measurement records for every Pauli basis setting of an `n`-qubit state.
/// Setting labels are strings over `{X,Y,Z}` with qubit 1 leftmost; outcome
/// keys are bitstrings in the same order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TomographyData {
    #[serde(rename = "n")]
    pub n_qubits: usize,
    pub shots: u64,
    pub settings: BTreeMap<String, Counts>,
}

impl TomographyData {
    /// Check completeness: exactly `3^n` well-formed settings, every
    /// outcome a width-`n` bitstring, every setting totalling `shots`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        let want = 3usize.pow(n as u32);
        if self.settings.len() != want {
            return Err(QssError::Config(format!(
                "tomography data has {} settings, expected {want}",
                self.settings.len()
            )));
        }
        for (setting, counts) in &self.settings {
            if setting.len() != n || !setting.chars().all(|c| "XYZ".contains(c)) {
                return Err(QssError::Config(format!(
                    "bad setting label {setting:?} for {n} qubit(s)"
                )));
            }
            let mut total = 0u64;
            for (outcome, &k) in counts {
                if outcome.len() != n || !outcome.chars().all(|c| c == '0' || c == '1') {
                    return Err(QssError::Config(format!(
                        "bad outcome {outcome:?} under setting {setting}"
                    )));
                }
                total += k;
            }
            if total != self.shots {
                return Err(QssError::Config(format!(
                    "setting {setting} totals {total}, expected {}",
                    self.shots
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: TomographyData = serde_json::from_str(text)?;
        data.validate()?;
        Ok(data)
    }
}

/// All `3^n` setting labels in lexicographic order.
pub fn tomography_settings(n_qubits: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n_qubits {
        let mut next = Vec::with_capacity(out.len() * 3);
        for prefix in &out {
            for c in ['X', 'Y', 'Z'] {
                next.push(format!("{prefix}{c}"));
            }
        }
        out = next;
    }
    out
}

/// Rotate `dm` so that measuring the computational basis realizes the given
/// Pauli setting: `H` maps the X basis to Z, `S^dag` then `H` maps Y to Z.
fn rotated_for(dm: &DensityMatrix, setting: &str) -> Result<DensityMatrix> {
    let mut out = dm.clone();
    for (pos, letter) in setting.chars().enumerate() {
        let q = pos + 1;
        match letter {
            'X' => out.apply_gate(&GateSpec::simple(GateKind::H, vec![q])?)?,
            'Y' => {
                out.apply_gate(&GateSpec::simple(GateKind::Sdg, vec![q])?)?;
                out.apply_gate(&GateSpec::simple(GateKind::H, vec![q])?)?;
            }
            'Z' => {}
            other => {
                return Err(QssError::Config(format!("unknown basis letter {other:?}")));
            }
        }
    }
    Ok(out)
}

/// Sample `shots` outcomes in every Pauli basis setting.
pub fn tomography_collect<R: Rng>(
    dm: &DensityMatrix,
    shots: u64,
    rng: &mut R,
) -> Result<TomographyData> {
    if shots == 0 {
        return Err(QssError::Config("tomography needs shots >= 1".into()));
    }
    let n = dm.n_qubits();
    let mut settings = BTreeMap::new();
    for setting in tomography_settings(n) {
        let rotated = rotated_for(dm, &setting)?;
        let counts = measure_all(&State::Mixed(rotated), shots, rng)?;
        settings.insert(setting, counts);
    }
    Ok(TomographyData { n_qubits: n, shots, settings })
}

/// The exact Born probabilities of every setting, the infinite-shot limit
/// of [`tomography_collect`].
pub fn tomography_exact_probabilities(
    dm: &DensityMatrix,
) -> Result<BTreeMap<String, BTreeMap<String, f64>>> {
    let n = dm.n_qubits();
    let mut out = BTreeMap::new();
    for setting in tomography_settings(n) {
        let rotated = rotated_for(dm, &setting)?;
        let probs = rotated.probabilities();
        let mut map = BTreeMap::new();
        for (idx, p) in probs.iter().enumerate() {
            map.insert(crate::qcore::index_to_bitstring(idx, n), *p);
        }
        out.insert(setting, map);
    }
    Ok(out)
}

/// Reconstruct a state from sampled counts: normalize each setting and run
/// the linear-inversion estimator.
pub fn tomography_reconstruct(data: &TomographyData) -> Result<DensityMatrix> {
    data.validate()?;
    let mut probs = BTreeMap::new();
    for (setting, counts) in &data.settings {
        let total = data.shots as f64;
        let map: BTreeMap<String, f64> = counts
            .iter()
            .map(|(k, &v)| (k.clone(), v as f64 / total))
            .collect();
        probs.insert(setting.clone(), map);
    }
    tomography_reconstruct_probabilities(data.n_qubits, &probs)
}

/// Linear inversion from per-setting outcome distributions, averaging every
/// compatible setting's estimate of each Pauli expectation, followed by
/// projection of the eigenvalues onto the probability simplex (the closest
/// positive semidefinite unit-trace matrix in the Frobenius norm).
pub fn tomography_reconstruct_probabilities(
    n_qubits: usize,
    settings: &BTreeMap<String, BTreeMap<String, f64>>,
) -> Result<DensityMatrix> {
    let n = n_qubits;
    let want = 3usize.pow(n as u32);
    if settings.len() != want {
        return Err(QssError::Config(format!(
            "expected {want} settings for {n} qubit(s), got {}",
            settings.len()
        )));
    }
    // Pre-digest outcomes: (bits-as-index, probability), normalized.
    let mut digested: Vec<(&str, Vec<(usize, f64)>)> = Vec::with_capacity(want);
    for (setting, outcomes) in settings {
        if setting.len() != n || !setting.chars().all(|c| "XYZ".contains(c)) {
            return Err(QssError::Config(format!("bad setting label {setting:?}")));
        }
        let mut total = 0.0;
        let mut rows = Vec::with_capacity(outcomes.len());
        for (outcome, &p) in outcomes {
            if outcome.len() != n || !outcome.chars().all(|c| c == '0' || c == '1') {
                return Err(QssError::Config(format!(
                    "bad outcome {outcome:?} under setting {setting}"
                )));
            }
            let idx = usize::from_str_radix(outcome, 2)
                .map_err(|e| QssError::Parse(format!("outcome {outcome:?}: {e}")))?;
            total += p;
            rows.push((idx, p));
        }
        if total <= 0.0 || !total.is_finite() {
            return Err(QssError::Config(format!(
                "setting {setting} has non-positive total weight {total}"
            )));
        }
        for row in rows.iter_mut() {
            row.1 /= total;
        }
        digested.push((setting.as_str(), rows));
    }

    let dim = 1usize << n;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    let letters = [b'I', b'X', b'Y', b'Z'];
    for code in 0..4usize.pow(n as u32) {
        // Letter of qubit q (1-based): base-4 digit with qubit 1 most
        // significant.
        let digit = |q: usize| (code / 4usize.pow((n - q) as u32)) % 4;
        let support: Vec<usize> = (1..=n).filter(|&q| digit(q) != 0).collect();
        let expectation = if support.is_empty() {
            1.0
        } else {
            let mut sum = 0.0;
            let mut hits = 0usize;
            for (setting, rows) in &digested {
                let bytes = setting.as_bytes();
                if support.iter().any(|&q| bytes[q - 1] != letters[digit(q)]) {
                    continue;
                }
                let mut est = 0.0;
                for &(idx, p) in rows {
                    let ones: u32 = support
                        .iter()
                        .map(|&q| ((idx >> (n - q)) & 1) as u32)
                        .sum();
                    est += if ones % 2 == 0 { p } else { -p };
                }
                sum += est;
                hits += 1;
            }
            sum / hits as f64
        };
        if expectation == 0.0 {
            continue;
        }
        // Accumulate expectation/2^n * sigma_code, one nonzero per row.
        let coeff = expectation / dim as f64;
        let mut xmask = 0usize;
        for &q in &support {
            if digit(q) == 1 || digit(q) == 2 {
                xmask |= 1 << (n - q);
            }
        }
        for r in 0..dim {
            let mut val = Complex64::new(coeff, 0.0);
            for &q in &support {
                let bit = (r >> (n - q)) & 1;
                val *= match (digit(q), bit) {
                    (1, _) => Complex64::new(1.0, 0.0),
                    (2, 0) => Complex64::new(0.0, -1.0),
                    (2, _) => Complex64::new(0.0, 1.0),
                    (3, 0) => Complex64::new(1.0, 0.0),
                    (3, _) => Complex64::new(-1.0, 0.0),
                    _ => unreachable!("identity letters are outside the support"),
                };
            }
            entries[r * dim + (r ^ xmask)] += val;
        }
    }

    // Nearest physical state: project the eigenvalue vector onto the
    // probability simplex and rebuild.
    let (values, vectors) = linalg::eigh(&entries, dim)?;
    let projected = nearest_probability(&values)?;
    let mut phys = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (lambda, v) in projected.iter().zip(vectors.iter()) {
        if *lambda == 0.0 {
            continue;
        }
        for r in 0..dim {
            for c in 0..dim {
                phys[r * dim + c] += *lambda * v[r] * v[c].conj();
            }
        }
    }
    DensityMatrix::from_entries(n, phys)
}
