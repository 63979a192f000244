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

//! The secret-in to secret-out channel of a full share-and-recover pipeline:
//! encode, optionally depolarize after every multi-qubit gate, erase a qubit
//! subset, decode. The channel is reconstructed exactly from its Choi matrix
//! by feeding every secret-space matrix unit through the (linear) pipeline.

use num_complex::Complex64;

use crate::channels::Channel;
use crate::codes::ops::apply_ops_dm;
use crate::codes::{CodeSpec, DecodeMode, DecodeOptions, Scheme};
use crate::error::{QssError, Result};
use crate::qcore::DensityMatrix;

/// Knobs for [`pipeline_channel`].
#[derive(Debug, Clone, Copy, Default)]
pub struct PipelineOptions {
    /// Depolarizing strength applied to the qubits of every multi-qubit
    /// unitary in the encode and decode circuits (0 disables noise).
    pub gate_depolarizing: f64,
    /// Study an uncorrectable erasure instead of rejecting it: the decode
    /// falls back to the code's largest shipped correction table, the
    /// decoder an experimenter would have calibrated for the worst
    /// recoverable loss. Qutrit erasures have no such fallback.
    pub allow_uncorrectable: bool,
}

/// Extract the end-to-end channel on the secret space (dimension 2 for the
/// stabilizer schemes, the secret pair's dimension 4 for the qutrit scheme)
/// for the pipeline `encode -> erase(subset) -> decode(mode)`.
pub fn pipeline_channel(
    code: &CodeSpec,
    erased: &[usize],
    mode: DecodeMode,
    opts: &PipelineOptions,
) -> Result<Channel> {
    let block = code.secret_block().to_vec();
    let b = block.len();
    let d = 1usize << b;
    let n = code.n_physical;
    let p = opts.gate_depolarizing;

    // Resolve the decoder before touching any state so misconfiguration
    // fails fast and identically for every matrix unit.
    let mut decode_opts = DecodeOptions {
        table: None,
        // Under gate noise, syndromes outside the erasure-reachable set are
        // expected physics rather than decoder bugs.
        missing_syndrome_identity: p > 0.0,
        gate_depolarizing: p,
    };
    if code.name == Scheme::Qutrit {
        if code.share_of(erased).is_none() {
            return Err(QssError::Config(format!(
                "qutrit erasures must be exactly one share's qubit pair, got {erased:?}"
            )));
        }
    } else if code.table_for(erased).is_none() {
        if !opts.allow_uncorrectable {
            return Err(QssError::Uncorrectable(format!(
                "erasure {erased:?} is not correctable for {}; enable the \
                 uncorrectable-study option to run it against a fallback decoder",
                code.name
            )));
        }
        let fallback = code.fallback_table().ok_or_else(|| {
            QssError::Config(format!("{} ships no fallback decoder table", code.name))
        })?;
        decode_opts.table = Some(fallback);
        decode_opts.missing_syndrome_identity = true;
    }

    let dim = 1usize << n;
    let shifts: Vec<usize> = block.iter().map(|&q| n - q).collect();
    let row_of = |i: usize| -> usize {
        let mut r = 0usize;
        for (k, &sh) in shifts.iter().enumerate() {
            r |= ((i >> (b - 1 - k)) & 1) << sh;
        }
        r
    };

    let fresh = DensityMatrix::basis(erased.len(), 0)?;
    let cd = d * d;
    let mut choi = vec![Complex64::new(0.0, 0.0); cd * cd];
    for i in 0..d {
        for j in 0..d {
            // The matrix unit |i><j| on the secret block, zeros elsewhere.
            // Everything downstream is linear, so propagating units is
            // exact even though off-diagonal units are not states.
            let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
            entries[row_of(i) * dim + row_of(j)] = Complex64::new(1.0, 0.0);
            let mut unit = DensityMatrix::from_entries(n, entries)?;
            apply_ops_dm(&mut unit, &code.encoding, p)?;
            let erased_dm = unit.replace_subset(erased, &fresh)?;
            let out = code
                .decode_unrecorded(&erased_dm, erased, mode, &decode_opts)?
                .state;
            if out.dim() != d {
                return Err(QssError::Dimension(format!(
                    "decode returned dimension {}, expected {d}",
                    out.dim()
                )));
            }
            for m in 0..d {
                for l in 0..d {
                    choi[(i * d + m) * cd + (j * d + l)] = out.entry(m, l);
                }
            }
        }
    }
    Channel::from_choi(d, d, &choi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{prepare_secret, SecretSpec};

    /// Identity on the first `emb` basis levels: embedded matrix units must
    /// come back exactly, including zero weight outside the embedded block.
    /// (The qutrit pipeline promises nothing about the unused |11> level.)
    fn assert_identity_channel(ch: &Channel, emb: usize, tol: f64) {
        let d = ch.dim_in();
        for i in 0..emb {
            for j in 0..emb {
                let mut unit = vec![Complex64::new(0.0, 0.0); d * d];
                unit[i * d + j] = Complex64::new(1.0, 0.0);
                let out = ch.apply_dense(&unit).unwrap();
                for m in 0..d {
                    for l in 0..d {
                        let want = if (m, l) == (i, j) { 1.0 } else { 0.0 };
                        assert!(
                            (out[m * d + l] - want).norm() < tol,
                            "unit ({i},{j}) image deviates at ({m},{l})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn noiseless_correctable_pipelines_are_identity() {
        let cases = [
            (Scheme::FiveQubit, vec![1usize, 2], 2usize),
            (Scheme::Steane, vec![5, 6, 7], 2),
            // Derived rather than shipped table.
            (Scheme::Steane, vec![4, 5, 6], 2),
            (Scheme::Qutrit, vec![3, 4], 3),
        ];
        for (scheme, erased, emb) in cases {
            let code = CodeSpec::load(scheme).unwrap();
            for mode in [DecodeMode::Mcm, DecodeMode::Dcm] {
                let ch = pipeline_channel(
                    code,
                    &erased,
                    mode,
                    &PipelineOptions::default(),
                )
                .unwrap();
                assert_identity_channel(&ch, emb, 1e-9);
            }
        }
    }

    #[test]
    fn uncorrectable_requires_opt_in_and_gives_constant_output() {
        let code = CodeSpec::load(Scheme::Steane).unwrap();
        let erased = [2usize, 4, 6];
        let strict = pipeline_channel(
            code,
            &erased,
            DecodeMode::Mcm,
            &PipelineOptions::default(),
        );
        assert!(matches!(strict, Err(QssError::Uncorrectable(_))));

        let opts = PipelineOptions { allow_uncorrectable: true, ..Default::default() };
        let ch = pipeline_channel(code, &erased, DecodeMode::Mcm, &opts).unwrap();
        // The survivors cannot reconstruct: the output is one fixed state,
        // whatever the input.
        let zero = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let plus = [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ];
        let a = ch.apply_dense(&zero).unwrap();
        let b = ch.apply_dense(&plus).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).norm() < 1e-9, "output depends on input");
        }
    }

    #[test]
    fn noisy_pipeline_is_a_valid_non_identity_channel() {
        let code = CodeSpec::load(Scheme::FiveQubit).unwrap();
        let opts = PipelineOptions { gate_depolarizing: 0.05, ..Default::default() };
        for mode in [DecodeMode::Mcm, DecodeMode::Dcm] {
            // Construction already enforces complete positivity and trace
            // preservation; check it visibly degrades a pure input.
            let ch = pipeline_channel(code, &[1, 2], mode, &opts).unwrap();
            let zero = [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ];
            let out = ch.apply_dense(&zero).unwrap();
            let survival = out[0].re;
            assert!(survival < 1.0 - 1e-3, "noise must reduce survival");
            assert!(survival > 0.5, "moderate noise must not scramble fully");
            assert!((out[0].re + out[3].re - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn qutrit_pipeline_preserves_embedded_secrets() {
        let code = CodeSpec::load(Scheme::Qutrit).unwrap();
        let ch = pipeline_channel(
            code,
            &[5, 6],
            DecodeMode::Mcm,
            &PipelineOptions::default(),
        )
        .unwrap();
        assert_eq!(ch.dim_in(), 4);
        let secret = prepare_secret(&SecretSpec::Qutrit { theta1: 0.9, theta2: 1.3 }).unwrap();
        let rho = secret.to_density_matrix();
        let out = ch.apply_dense(rho.entries()).unwrap();
        for (got, want) in out.iter().zip(rho.entries().iter()) {
            assert!((got - want).norm() < 1e-9);
        }

        assert!(pipeline_channel(
            code,
            &[3, 4, 5, 6],
            DecodeMode::Mcm,
            &PipelineOptions { allow_uncorrectable: true, ..Default::default() },
        )
        .is_err());
    }
}
