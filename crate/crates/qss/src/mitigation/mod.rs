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

//! Readout-error injection and matrix-free measurement-error mitigation.
//!
//! The readout model is uncorrelated: each qubit has its own 2x2
//! column-stochastic confusion matrix, and the full-register confusion
//! matrix is their tensor product, evaluated entrywise on demand and never
//! materialized. Mitigation solves the confusion system restricted to the
//! observed bitstrings, directly for small supports and with an iterative
//! residual-minimizing method for large ones, yielding a quasi-probability
//! distribution whose weights may be negative but sum to one.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::linalg;
use crate::metrics::{nearest_probability, SIMPLEX_SUM_TOLERANCE};
use crate::qcore::Counts;

/// Observed supports at or below this size are solved with a dense LU
/// factorization; larger ones use the matrix-free iterative path.
pub const DIRECT_SOLVE_LIMIT: usize = 10;

/// Convergence tolerance of the iterative restricted solver.
pub const ITERATIVE_TOLERANCE: f64 = 1e-8;

/// Iteration cap of the iterative restricted solver.
pub const ITERATIVE_MAX_STEPS: usize = 200;

/// Single-qubit readout error rates: `p01` is the probability of reading 1
/// when 0 was prepared, `p10` of reading 0 when 1 was prepared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitReadout {
    pub p01: f64,
    pub p10: f64,
}

impl QubitReadout {
    /// Confusion matrix entry `P(measured | prepared)`.
    fn confusion(&self, measured: usize, prepared: usize) -> f64 {
        match (measured, prepared) {
            (0, 0) => 1.0 - self.p01,
            (1, 0) => self.p01,
            (0, 1) => self.p10,
            (1, 1) => 1.0 - self.p10,
            _ => unreachable!("bits are 0 or 1"),
        }
    }
}

/// Per-qubit readout confusion matrices for a register, qubit 1 first.
///
/// Wire format: `{"qubits": [{"p01": 0.01, "p10": 0.03}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutCalibration {
    pub qubits: Vec<QubitReadout>,
}

impl ReadoutCalibration {
    /// Calibration with the given per-qubit rates, validated.
    pub fn new(qubits: Vec<QubitReadout>) -> Result<Self> {
        let calib = ReadoutCalibration { qubits };
        calib.validate()?;
        Ok(calib)
    }

    /// Perfect readout on `n` qubits.
    pub fn identity(n_qubits: usize) -> Self {
        ReadoutCalibration {
            qubits: vec![QubitReadout { p01: 0.0, p10: 0.0 }; n_qubits],
        }
    }

    /// The same error rates on every qubit.
    pub fn uniform(n_qubits: usize, p01: f64, p10: f64) -> Result<Self> {
        Self::new(vec![QubitReadout { p01, p10 }; n_qubits])
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    /// Check that every per-qubit confusion matrix is column-stochastic
    /// with entries in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        if self.qubits.is_empty() {
            return Err(QssError::Config("calibration covers no qubits".into()));
        }
        for (pos, q) in self.qubits.iter().enumerate() {
            for prepared in 0..2 {
                let mut col = 0.0;
                for measured in 0..2 {
                    let entry = q.confusion(measured, prepared);
                    if !(0.0..=1.0).contains(&entry) || !entry.is_finite() {
                        return Err(QssError::Config(format!(
                            "qubit {} confusion entry {entry} outside [0, 1]",
                            pos + 1
                        )));
                    }
                    col += entry;
                }
                if (col - 1.0).abs() > 1e-12 {
                    return Err(QssError::Config(format!(
                        "qubit {} confusion column sums to {col}",
                        pos + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Tensor-product confusion entry `P(measure bitstring s | prepared t)`
    /// for width-`n` basis indexes, evaluated entrywise without forming the
    /// full matrix.
    fn entry(&self, measured: usize, prepared: usize) -> f64 {
        let n = self.qubits.len();
        let mut p = 1.0;
        for (pos, q) in self.qubits.iter().enumerate() {
            let m = (measured >> (n - 1 - pos)) & 1;
            let t = (prepared >> (n - 1 - pos)) & 1;
            p *= q.confusion(m, t);
        }
        p
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let calib: ReadoutCalibration = serde_json::from_str(text)?;
        calib.validate()?;
        Ok(calib)
    }
}

/// A signed measurement distribution: weights may be negative but sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiDistribution {
    weights: BTreeMap<String, f64>,
}

impl QuasiDistribution {
    /// Wrap a weight map, requiring the total to be 1 within tolerance.
    pub fn new(weights: BTreeMap<String, f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(QssError::Config("quasi-distribution is empty".into()));
        }
        let total: f64 = weights.values().sum();
        if !total.is_finite() || (total - 1.0).abs() > SIMPLEX_SUM_TOLERANCE {
            return Err(QssError::Consistency(format!(
                "quasi-distribution weights sum to {total}, expected 1"
            )));
        }
        Ok(QuasiDistribution { weights })
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }

    /// The closest probability distribution in the L2 norm over the
    /// observed support.
    pub fn to_probabilities(&self) -> Result<BTreeMap<String, f64>> {
        let values: Vec<f64> = self.weights.values().copied().collect();
        let projected = nearest_probability(&values)?;
        Ok(self
            .weights
            .keys()
            .cloned()
            .zip(projected)
            .collect())
    }
}

/// Check that every key is a width-`n` bitstring and convert it to a basis
/// index.
fn bit_index(key: &str, n: usize) -> Result<usize> {
    if key.len() != n || !key.chars().all(|c| c == '0' || c == '1') {
        return Err(QssError::Dimension(format!(
            "outcome {key:?} is not a width-{n} bitstring"
        )));
    }
    usize::from_str_radix(key, 2).map_err(|e| QssError::Parse(format!("outcome {key:?}: {e}")))
}

/// Sample `shots` outcomes from an ideal distribution and push each through
/// the per-qubit confusion matrices.
pub fn corrupt_counts<R: Rng>(
    ideal: &BTreeMap<String, f64>,
    calib: &ReadoutCalibration,
    shots: u64,
    rng: &mut R,
) -> Result<Counts> {
    calib.validate()?;
    let n = calib.n_qubits();
    if ideal.is_empty() {
        return Err(QssError::Config("ideal distribution is empty".into()));
    }
    if shots == 0 {
        return Err(QssError::Config("corrupt_counts needs shots >= 1".into()));
    }
    let mut outcomes: Vec<(usize, f64)> = Vec::with_capacity(ideal.len());
    let mut total = 0.0;
    for (key, &p) in ideal {
        let idx = bit_index(key, n)?;
        if p < 0.0 || !p.is_finite() {
            return Err(QssError::Config(format!(
                "ideal probability of {key:?} is {p}"
            )));
        }
        total += p;
        outcomes.push((idx, p));
    }
    if total <= 0.0 {
        return Err(QssError::Config(format!(
            "ideal distribution totals {total}"
        )));
    }
    let mut counts = Counts::new();
    for _ in 0..shots {
        let mut u = rng.gen::<f64>() * total;
        let mut drawn = outcomes[outcomes.len() - 1].0;
        for &(idx, p) in &outcomes {
            if u < p {
                drawn = idx;
                break;
            }
            u -= p;
        }
        let mut read = 0usize;
        for (pos, q) in calib.qubits.iter().enumerate() {
            let truth = (drawn >> (n - 1 - pos)) & 1;
            let flip_prob = if truth == 0 { q.p01 } else { q.p10 };
            let bit = if rng.gen::<f64>() < flip_prob { 1 - truth } else { truth };
            read |= bit << (n - 1 - pos);
        }
        *counts
            .entry(crate::qcore::index_to_bitstring(read, n))
            .or_insert(0) += 1;
    }
    Ok(counts)
}

/// Invert the readout confusion system restricted to the observed
/// bitstrings, from raw counts.
pub fn mitigate(counts: &Counts, calib: &ReadoutCalibration) -> Result<QuasiDistribution> {
    if counts.is_empty() {
        return Err(QssError::Config("no counts to mitigate".into()));
    }
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(QssError::Config("counts total zero shots".into()));
    }
    let freqs: BTreeMap<String, f64> = counts
        .iter()
        .map(|(k, &v)| (k.clone(), v as f64 / total as f64))
        .collect();
    mitigate_frequencies(&freqs, calib)
}

/// Invert the readout confusion system restricted to the observed support
/// of a frequency map. Solves `A x = y` where `A` is the tensor-product
/// confusion matrix sampled entrywise on the observed rows and columns:
/// dense LU up to [`DIRECT_SOLVE_LIMIT`] observed strings, otherwise an
/// unpreconditioned conjugate-gradient iteration on the normal equations.
/// The solution is renormalized to total weight 1.
pub fn mitigate_frequencies(
    freqs: &BTreeMap<String, f64>,
    calib: &ReadoutCalibration,
) -> Result<QuasiDistribution> {
    calib.validate()?;
    let n = calib.n_qubits();
    if freqs.is_empty() {
        return Err(QssError::Config("no frequencies to mitigate".into()));
    }
    let mut support = Vec::with_capacity(freqs.len());
    let mut y = Vec::with_capacity(freqs.len());
    for (key, &f) in freqs {
        if f < 0.0 || !f.is_finite() {
            return Err(QssError::Config(format!("frequency of {key:?} is {f}")));
        }
        support.push(bit_index(key, n)?);
        y.push(f);
    }
    let m = support.len();
    let a = |row: usize, col: usize| calib.entry(support[row], support[col]);

    let x = if m <= DIRECT_SOLVE_LIMIT {
        let mut dense = vec![0.0; m * m];
        for r in 0..m {
            for c in 0..m {
                dense[r * m + c] = a(r, c);
            }
        }
        linalg::solve_real(&dense, &y, m)?
    } else {
        solve_cgnr(&a, &y, m)?
    };

    let total: f64 = x.iter().sum();
    if !total.is_finite() || total.abs() < 1e-9 {
        return Err(QssError::Consistency(format!(
            "restricted confusion system is singular (weights total {total})"
        )));
    }
    let weights: BTreeMap<String, f64> = freqs
        .keys()
        .cloned()
        .zip(x.iter().map(|w| w / total))
        .collect();
    QuasiDistribution::new(weights)
}

/// Conjugate gradient on the normal equations `A^T A x = A^T y`, with `A`
/// available only entrywise. Minimizes the residual of the restricted
/// system without ever materializing it.
fn solve_cgnr(a: &dyn Fn(usize, usize) -> f64, y: &[f64], m: usize) -> Result<Vec<f64>> {
    let matvec = |x: &[f64], transpose: bool| -> Vec<f64> {
        let mut out = vec![0.0; m];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (c, xv) in x.iter().enumerate() {
                acc += if transpose { a(c, r) } else { a(r, c) } * xv;
            }
            *slot = acc;
        }
        out
    };
    let mut x = y.to_vec();
    let ax = matvec(&x, false);
    let mut r: Vec<f64> = y.iter().zip(&ax).map(|(yi, ai)| yi - ai).collect();
    let mut z = matvec(&r, true);
    let mut p = z.clone();
    let mut z_norm2: f64 = z.iter().map(|v| v * v).sum();
    for _ in 0..ITERATIVE_MAX_STEPS {
        if z_norm2.sqrt() <= ITERATIVE_TOLERANCE {
            return Ok(x);
        }
        let ap = matvec(&p, false);
        let ap_norm2: f64 = ap.iter().map(|v| v * v).sum();
        if ap_norm2 <= f64::EPSILON * f64::EPSILON {
            break;
        }
        let alpha = z_norm2 / ap_norm2;
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        z = matvec(&r, true);
        let z_next: f64 = z.iter().map(|v| v * v).sum();
        let beta = z_next / z_norm2;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
        z_norm2 = z_next;
    }
    if z_norm2.sqrt() <= ITERATIVE_TOLERANCE {
        Ok(x)
    } else {
        Err(QssError::Consistency(format!(
            "iterative mitigation stalled with residual {}",
            z_norm2.sqrt()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn total_variation(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
        let mut keys: Vec<&String> = a.keys().collect();
        for k in b.keys() {
            if !a.contains_key(k) {
                keys.push(k);
            }
        }
        0.5 * keys
            .iter()
            .map(|k| {
                (a.get(*k).copied().unwrap_or(0.0) - b.get(*k).copied().unwrap_or(0.0)).abs()
            })
            .sum::<f64>()
    }

    /// Exact expected frequencies after pushing `ideal` through the full
    /// confusion matrix.
    fn forward_expectation(
        ideal: &BTreeMap<String, f64>,
        calib: &ReadoutCalibration,
    ) -> BTreeMap<String, f64> {
        let n = calib.n_qubits();
        let dim = 1usize << n;
        let mut out = BTreeMap::new();
        for measured in 0..dim {
            let mut p = 0.0;
            for (key, &w) in ideal {
                let prepared = usize::from_str_radix(key, 2).unwrap();
                p += calib.entry(measured, prepared) * w;
            }
            if p > 0.0 {
                out.insert(crate::qcore::index_to_bitstring(measured, n), p);
            }
        }
        out
    }

    #[test]
    fn calibration_json_and_validation() {
        let calib = ReadoutCalibration::uniform(2, 0.01, 0.03).unwrap();
        let text = calib.to_json().unwrap();
        assert!(text.contains("\"p01\": 0.01"));
        assert_eq!(ReadoutCalibration::from_json(&text).unwrap(), calib);

        assert!(ReadoutCalibration::uniform(1, 1.2, 0.0).is_err());
        assert!(ReadoutCalibration::uniform(1, -0.1, 0.0).is_err());
        assert!(ReadoutCalibration::new(vec![]).is_err());
    }

    #[test]
    fn identity_calibration_samples_the_ideal_distribution() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let calib = ReadoutCalibration::identity(2);
        let ideal: BTreeMap<String, f64> = [("00".to_string(), 1.0)].into();
        let counts = corrupt_counts(&ideal, &calib, 512, &mut rng).unwrap();
        assert_eq!(counts["00"], 512);
    }

    #[test]
    fn certain_flip_pins_a_bit() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let calib = ReadoutCalibration::new(vec![
            QubitReadout { p01: 0.0, p10: 1.0 },
            QubitReadout { p01: 0.0, p10: 0.0 },
        ])
        .unwrap();
        let ideal: BTreeMap<String, f64> =
            [("10".to_string(), 0.5), ("11".to_string(), 0.5)].into();
        let counts = corrupt_counts(&ideal, &calib, 256, &mut rng).unwrap();
        for key in counts.keys() {
            assert!(key.starts_with('0'), "qubit 1 read {key:?} despite p10 = 1");
        }
    }

    #[test]
    fn symmetric_flips_match_the_expected_rate() {
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let calib = ReadoutCalibration::uniform(2, 0.05, 0.05).unwrap();
        let ideal: BTreeMap<String, f64> = [("00".to_string(), 1.0)].into();
        let shots = 4096u64;
        let counts = corrupt_counts(&ideal, &calib, shots, &mut rng).unwrap();
        let p = 0.95f64 * 0.95;
        let sigma = (p * (1.0 - p) / shots as f64).sqrt();
        let rate = counts["00"] as f64 / shots as f64;
        assert!(
            (rate - p).abs() <= 3.0 * sigma,
            "observed {rate}, expected {p} within {}",
            3.0 * sigma
        );
    }

    #[test]
    fn identity_calibration_mitigation_normalizes_counts() {
        let calib = ReadoutCalibration::identity(2);
        let counts: Counts = [("00".to_string(), 300u64), ("11".to_string(), 100u64)].into();
        let quasi = mitigate(&counts, &calib).unwrap();
        assert!((quasi.weights()["00"] - 0.75).abs() < 1e-12);
        assert!((quasi.weights()["11"] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn exact_expectation_inverts_to_the_ideal() {
        // 7 qubits, full 128-string support, iterative path.
        let calib = ReadoutCalibration::uniform(7, 0.02, 0.04).unwrap();
        let ideal: BTreeMap<String, f64> = [
            ("0000000".to_string(), 0.5),
            ("1010101".to_string(), 0.3),
            ("1111111".to_string(), 0.2),
        ]
        .into();
        let expected = forward_expectation(&ideal, &calib);
        let quasi = mitigate_frequencies(&expected, &calib).unwrap();
        for (key, &w) in quasi.weights() {
            let want = ideal.get(key).copied().unwrap_or(0.0);
            assert!(
                (w - want).abs() < 1e-6,
                "weight of {key} is {w}, expected {want}"
            );
        }
    }

    #[test]
    fn iterative_path_matches_the_dense_oracle() {
        // 4 qubits, 16 observed strings: above the direct-solve limit, so
        // the iterative solver runs; compare it against an explicit LU
        // solve of the same restricted system.
        let calib = ReadoutCalibration::uniform(4, 0.03, 0.06).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(44);
        let dim = 16usize;
        let mut ideal = BTreeMap::new();
        let mut total = 0.0;
        for idx in 0..dim {
            let w: f64 = rng.gen::<f64>();
            ideal.insert(crate::qcore::index_to_bitstring(idx, 4), w);
            total += w;
        }
        for w in ideal.values_mut() {
            *w /= total;
        }
        let expected = forward_expectation(&ideal, &calib);
        assert_eq!(expected.len(), dim);
        let quasi = mitigate_frequencies(&expected, &calib).unwrap();

        let support: Vec<usize> = (0..dim).collect();
        let mut dense = vec![0.0; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                dense[r * dim + c] = calib.entry(support[r], support[c]);
            }
        }
        let y: Vec<f64> = expected.values().copied().collect();
        let oracle = linalg::solve_real(&dense, &y, dim).unwrap();
        let oracle_total: f64 = oracle.iter().sum();
        for (pos, (_, &w)) in quasi.weights().iter().enumerate() {
            assert!(
                (w - oracle[pos] / oracle_total).abs() < 1e-8,
                "iterative and dense solutions disagree at index {pos}"
            );
        }
    }

    #[test]
    fn mitigation_shrinks_total_variation() {
        let calib = ReadoutCalibration::uniform(3, 0.03, 0.03).unwrap();
        let ideal: BTreeMap<String, f64> =
            [("000".to_string(), 0.5), ("111".to_string(), 0.5)].into();
        let mut wins = 0;
        let trials = 20;
        for trial in 0..trials {
            let mut rng = ChaCha12Rng::seed_from_u64(4500 + trial);
            let counts = corrupt_counts(&ideal, &calib, 1024, &mut rng).unwrap();
            let total: u64 = counts.values().sum();
            let raw: BTreeMap<String, f64> = counts
                .iter()
                .map(|(k, &v)| (k.clone(), v as f64 / total as f64))
                .collect();
            let mitigated = mitigate(&counts, &calib).unwrap().to_probabilities().unwrap();
            if total_variation(&mitigated, &ideal) < total_variation(&raw, &ideal) {
                wins += 1;
            }
        }
        assert!(wins >= 18, "mitigation improved only {wins}/{trials} trials");
    }

    #[test]
    fn quasi_projection_matches_the_simplex_examples() {
        let quasi = QuasiDistribution::new(
            [("00".to_string(), 1.05), ("11".to_string(), -0.05)].into(),
        )
        .unwrap();
        let probs = quasi.to_probabilities().unwrap();
        assert!((probs["00"] - 1.0).abs() < 1e-12);
        assert!(probs["11"].abs() < 1e-12);

        let flat = QuasiDistribution::new(
            [("0".to_string(), 0.5), ("1".to_string(), 0.5)].into(),
        )
        .unwrap();
        assert_eq!(flat.to_probabilities().unwrap(), *flat.weights());
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let calib = ReadoutCalibration::identity(1);
        assert!(mitigate(&Counts::new(), &calib).is_err());

        // p01 = p10 = 0.5 collapses both columns to the same vector.
        let singular = ReadoutCalibration::uniform(1, 0.5, 0.5).unwrap();
        let counts: Counts = [("0".to_string(), 50u64), ("1".to_string(), 50u64)].into();
        assert!(mitigate(&counts, &singular).is_err());

        let wide: Counts = [("00".to_string(), 1u64)].into();
        assert!(mitigate(&wide, &calib).is_err());

        assert!(QuasiDistribution::new([("0".to_string(), 0.5)].into()).is_err());
    }
}
