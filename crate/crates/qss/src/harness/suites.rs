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

//! The individual experiment suites behind [`super::run_suite`].
//!
//! Every suite derives its randomness from per-job streams of the master
//! seed (see [`super::job_rng`]), so jobs can run concurrently and in any
//! order without changing the report. Sampled metrics carry a shot-level
//! bootstrap interval; deterministic metrics collapse the interval to the
//! point value.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::channels::{pipeline_channel, PipelineOptions};
use crate::codes::{
    prepare_secret, probe_secrets, sorted_dedup, CodeSpec, DecodeMode, Scheme,
};
use crate::error::{QssError, Result};
use crate::metrics::{
    choi_state, entanglement_fidelity, maximally_entangled_state, swap_test_states,
    tomography_exact_probabilities, tomography_reconstruct_probabilities,
};
use crate::mitigation::{corrupt_counts, mitigate, ReadoutCalibration};
use crate::qcore::{Circuit, Counts, DensityMatrix, State, StateVector};
use crate::stabilizer::{compile_linear_masks, table_consistency_check};

use super::{
    angles_deg, job_rng, round12, sample_angles, subset_label, ExperimentConfig, ResultRecord,
    BOOTSTRAP_CONFIDENCE, BOOTSTRAP_RESAMPLES,
};

fn pipeline_opts(config: &ExperimentConfig) -> PipelineOptions {
    PipelineOptions {
        gate_depolarizing: config.noise.two_qubit_depolarizing,
        allow_uncorrectable: config.allow_uncorrectable,
    }
}

/// Run jobs in parallel and return their rows in job order.
fn par_jobs<F>(jobs: usize, run: F) -> Result<Vec<ResultRecord>>
where
    F: Fn(usize) -> Result<Vec<ResultRecord>> + Sync,
{
    let mut per_job: Vec<(usize, Vec<ResultRecord>)> = (0..jobs)
        .into_par_iter()
        .map(|j| run(j).map(|rows| (j, rows)))
        .collect::<Result<Vec<_>>>()?;
    per_job.sort_by_key(|(j, _)| *j);
    Ok(per_job.into_iter().flat_map(|(_, rows)| rows).collect())
}

/// Assemble a row, rounding every value to report resolution and widening
/// the interval so it contains the recorded point estimates.
#[allow(clippy::too_many_arguments)]
fn make_record(
    config: &ExperimentConfig,
    subset: &str,
    decoder: &str,
    job: usize,
    angles: Option<(f64, f64)>,
    metric: f64,
    metric_mitigated: Option<f64>,
    interval: (f64, f64),
) -> ResultRecord {
    let metric = round12(metric);
    let metric_mitigated = metric_mitigated.map(round12);
    let mut lo = round12(interval.0).min(metric);
    let mut hi = round12(interval.1).max(metric);
    if let Some(mm) = metric_mitigated {
        lo = lo.min(mm);
        hi = hi.max(mm);
    }
    ResultRecord {
        suite: config.suite.as_str().to_string(),
        scheme: config.scheme.as_str().to_string(),
        subset: subset.to_string(),
        decoder: decoder.to_string(),
        job,
        theta_deg: angles.map(|a| a.0),
        phi_deg: angles.map(|a| a.1),
        metric,
        metric_mitigated,
        ci_low: lo,
        ci_high: hi,
        seed: config.seed,
    }
}

/// 99% percentile bounds of a sorted replica list.
fn percentile_bounds(sorted: &[f64]) -> (f64, f64) {
    let alpha = 0.5 * (1.0 - BOOTSTRAP_CONFIDENCE);
    let last = sorted.len() - 1;
    let lo = sorted[(alpha * last as f64).floor() as usize];
    let hi = sorted[(((1.0 - alpha) * last as f64).ceil() as usize).min(last)];
    (lo, hi)
}

/// Shot-level bootstrap of a Bernoulli pass rate: resample the shot count
/// from the empirical rate and take the percentile interval.
fn bootstrap_rate<R: Rng>(hits: u64, shots: u64, rng: &mut R) -> (f64, f64) {
    let p = hits as f64 / shots as f64;
    if hits == 0 || hits == shots {
        return (p, p);
    }
    let dist = Binomial::new(shots, p).expect("rate strictly inside (0, 1)");
    let mut rates: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| dist.sample(rng) as f64 / shots as f64)
        .collect();
    rates.sort_unstable_by(f64::total_cmp);
    percentile_bounds(&rates)
}

/// Multinomial resample of one setting's counts, returned as frequencies.
/// Sequential binomial thinning draws an exact multinomial sample.
fn resample_frequencies<R: Rng>(counts: &Counts, rng: &mut R) -> BTreeMap<String, f64> {
    let total: u64 = counts.values().sum();
    let mut remaining = total;
    let mut tail = total;
    let mut out = BTreeMap::new();
    let items: Vec<(&String, u64)> = counts.iter().map(|(k, &v)| (k, v)).collect();
    for (i, (key, c)) in items.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let k = if i + 1 == items.len() {
            remaining
        } else {
            let p = (*c as f64 / tail as f64).min(1.0);
            Binomial::new(remaining, p).expect("valid probability").sample(rng)
        };
        if k > 0 {
            out.insert((*key).clone(), k as f64 / total as f64);
        }
        remaining -= k;
        tail -= c;
    }
    out
}

/// Measured pass data of one job: raw hit count plus the mitigated rate.
struct PassSample {
    hits: u64,
    mitigated: Option<f64>,
}

/// Draw `shots` ancilla outcomes of a test whose exact pass probability is
/// `p0`, pushing each shot through the configured readout corruption; when
/// mitigation is on, also record the cleaned pass rate.
fn sample_pass_rate<R: Rng>(
    p0: f64,
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<PassSample> {
    let p0 = p0.clamp(0.0, 1.0);
    match &config.noise.readout {
        None => {
            let mut hits = 0u64;
            for _ in 0..config.shots {
                if rng.gen::<f64>() < p0 {
                    hits += 1;
                }
            }
            Ok(PassSample { hits, mitigated: None })
        }
        Some(ro) => {
            let calib = ReadoutCalibration::uniform(1, ro.p01, ro.p10)?;
            let ideal: BTreeMap<String, f64> =
                [("0".to_string(), p0), ("1".to_string(), 1.0 - p0)].into();
            let counts = corrupt_counts(&ideal, &calib, config.shots, rng)?;
            let hits = counts.get("0").copied().unwrap_or(0);
            let mitigated = if config.mitigate {
                let probs = mitigate(&counts, &calib)?.to_probabilities()?;
                Some(probs.get("0").copied().unwrap_or(0.0))
            } else {
                None
            };
            Ok(PassSample { hits, mitigated })
        }
    }
}

/// SWAP suite: one row per job. Sample a secret, push it through the
/// erasure pipeline's exact channel, and SWAP-test the recovered state
/// against an ideal copy; the metric is the measured pass rate.
pub(super) fn run_swap(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let code = CodeSpec::load(config.scheme)?;
    let channel = pipeline_channel(code, &config.erased, config.decoder, &pipeline_opts(config))?;
    let label = subset_label(&sorted_dedup(&config.erased));
    let block_len = code.secret_block().len();

    par_jobs(config.jobs, |job| {
        let mut rng = job_rng(config.seed, job);
        let spec = sample_angles(config.scheme, &mut rng);
        let psi = prepare_secret(&spec)?;
        let out = channel.apply_dense(psi.to_density_matrix().entries())?;
        let decoded = DensityMatrix::from_entries(block_len, out)?;

        let exact = swap_test_states(
            &State::Pure(psi.clone()),
            &State::Mixed(decoded.clone()),
            None,
            &mut rng,
        )?
        .exact_p0;
        // With perfect readout, sample through the decomposed circuit so its
        // consistency guard runs; corrupted readout draws the shots directly
        // from the exact rate while flipping each recorded bit.
        let sample = if config.noise.readout.is_none() {
            let res = swap_test_states(
                &State::Pure(psi.clone()),
                &State::Mixed(decoded),
                Some(config.shots),
                &mut rng,
            )?;
            let rate = res.sampled_rate.expect("shots were requested");
            PassSample {
                hits: (rate * config.shots as f64).round() as u64,
                mitigated: None,
            }
        } else {
            sample_pass_rate(exact, config, &mut rng)?
        };
        let metric = sample.hits as f64 / config.shots as f64;
        let interval = bootstrap_rate(sample.hits, config.shots, &mut rng);
        Ok(vec![make_record(
            config,
            &label,
            config.decoder_label(),
            job,
            Some(angles_deg(&spec)),
            metric,
            sample.mitigated,
            interval,
        )])
    })
}

/// Entanglement-fidelity suite: one row per job. The metric is the exact
/// fidelity of the pipeline channel; the mitigated column holds this job's
/// tomography estimate of the same quantity, sampled from the channel's
/// maximally-entangled reference state under the configured readout
/// treatment.
pub(super) fn run_entfid(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let code = CodeSpec::load(config.scheme)?;
    let channel = pipeline_channel(code, &config.erased, config.decoder, &pipeline_opts(config))?;
    let label = subset_label(&sorted_dedup(&config.erased));
    let d = if config.scheme == Scheme::Qutrit { 3 } else { 2 };
    let exact = entanglement_fidelity(&channel, d)?;
    let choi = choi_state(&channel, d)?;
    let reference = maximally_entangled_state(d)?;
    let n = choi.n_qubits();
    let setting_probs = tomography_exact_probabilities(&choi)?;
    let calib = match &config.noise.readout {
        Some(ro) => ReadoutCalibration::uniform(n, ro.p01, ro.p10)?,
        None => ReadoutCalibration::identity(n),
    };

    let estimate = |freqs: &BTreeMap<String, BTreeMap<String, f64>>| -> Result<f64> {
        let recon = tomography_reconstruct_probabilities(n, freqs)?;
        Ok(recon.expectation_pure(&reference)?.clamp(0.0, 1.0))
    };

    par_jobs(config.jobs, |job| {
        let mut rng = job_rng(config.seed, job);
        let mut counts_by_setting: BTreeMap<String, Counts> = BTreeMap::new();
        for (setting, probs) in &setting_probs {
            counts_by_setting
                .insert(setting.clone(), corrupt_counts(probs, &calib, config.shots, &mut rng)?);
        }

        let sampled = if config.mitigate {
            let mut cleaned = BTreeMap::new();
            for (setting, counts) in &counts_by_setting {
                cleaned
                    .insert(setting.clone(), mitigate(counts, &calib)?.to_probabilities()?);
            }
            estimate(&cleaned)?
        } else {
            let mut raw = BTreeMap::new();
            for (setting, counts) in &counts_by_setting {
                let total: u64 = counts.values().sum();
                raw.insert(
                    setting.clone(),
                    counts
                        .iter()
                        .map(|(k, &v)| (k.clone(), v as f64 / total as f64))
                        .collect(),
                );
            }
            estimate(&raw)?
        };

        // Bootstrap the raw (unmitigated) estimator; mitigation shifts the
        // point estimate well inside this statistical width.
        let mut replicas = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
        for _ in 0..BOOTSTRAP_RESAMPLES {
            let mut resampled = BTreeMap::new();
            for (setting, counts) in &counts_by_setting {
                resampled.insert(setting.clone(), resample_frequencies(counts, &mut rng));
            }
            replicas.push(estimate(&resampled)?);
        }
        replicas.sort_unstable_by(f64::total_cmp);
        let interval = percentile_bounds(&replicas);

        Ok(vec![make_record(
            config,
            &label,
            config.decoder_label(),
            job,
            None,
            exact,
            Some(sampled),
            interval,
        )])
    })
}

/// Privacy suite: one row per job. The metric is the largest trace distance
/// between the erased subset's reduced states over a probe set of canonical
/// plus job-sampled secrets; zero (at report resolution) means the subset
/// reveals nothing.
pub(super) fn run_privacy(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let code = CodeSpec::load(config.scheme)?;
    let subset = sorted_dedup(&config.erased);
    let label = subset_label(&subset);
    let shared_probes = probe_secrets(config.scheme);

    par_jobs(config.jobs, |job| {
        let mut rng = job_rng(config.seed, job);
        let mut specs = shared_probes.clone();
        for _ in 0..4 {
            specs.push(sample_angles(config.scheme, &mut rng));
        }
        let marginals: Vec<DensityMatrix> = specs
            .iter()
            .map(|spec| {
                let shared = code.encode(&prepare_secret(spec)?)?;
                shared.to_density_matrix().partial_trace(&subset)
            })
            .collect::<Result<_>>()?;
        let mut spread = 0.0f64;
        for (i, a) in marginals.iter().enumerate() {
            for b in marginals.iter().skip(i + 1) {
                spread = spread.max(a.trace_distance(b)?);
            }
        }
        Ok(vec![make_record(
            config,
            &label,
            "",
            job,
            None,
            spread,
            None,
            (spread, spread),
        )])
    })
}

/// Tables suite: one row per shipped correction table, metric 1 when the
/// re-derived table matches it row for row (and 0 otherwise).
pub(super) fn run_tables(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let code = CodeSpec::load(config.scheme)?;
    let shipped = CodeSpec::shipped_tables(config.scheme)?;
    let mut rows = Vec::with_capacity(shipped.len());
    for (i, stored) in shipped.iter().enumerate() {
        let consistent = code
            .table_for(&stored.subset)
            .map(|derived| table_consistency_check(derived, stored).is_match())
            .unwrap_or(false);
        let metric = if consistent { 1.0 } else { 0.0 };
        rows.push(make_record(
            config,
            &subset_label(&stored.subset),
            "",
            i,
            None,
            metric,
            None,
            (metric, metric),
        ));
    }
    Ok(rows)
}

/// Paired-decoder suite: two rows per job, identical secret and erasure,
/// differing only in the correction style. The metric is the fidelity of
/// the recovered state against the ideal secret.
pub(super) fn run_mcm_vs_dcm(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let code = CodeSpec::load(config.scheme)?;
    let opts = pipeline_opts(config);
    let mcm = pipeline_channel(code, &config.erased, DecodeMode::Mcm, &opts)?;
    let dcm = pipeline_channel(code, &config.erased, DecodeMode::Dcm, &opts)?;
    let label = subset_label(&sorted_dedup(&config.erased));
    let block_len = code.secret_block().len();

    par_jobs(config.jobs, |job| {
        let mut rng = job_rng(config.seed, job);
        let spec = sample_angles(config.scheme, &mut rng);
        let psi = prepare_secret(&spec)?;
        let rho_in = psi.to_density_matrix();
        let mut rows = Vec::with_capacity(2);
        for (name, channel) in [("mcm", &mcm), ("dcm", &dcm)] {
            let decoded =
                DensityMatrix::from_entries(block_len, channel.apply_dense(rho_in.entries())?)?;
            let fid = decoded.expectation_pure(&psi)?.clamp(0.0, 1.0);
            rows.push(make_record(
                config,
                &label,
                name,
                job,
                Some(angles_deg(&spec)),
                fid,
                None,
                (fid, fid),
            ));
        }
        Ok(rows)
    })
}

/// How many multi-qubit unitaries the pipeline executes for this
/// configuration: encode plus decode (plus the coherent correction network
/// when decoding deferred); recovery circuit instead of table decode for
/// the qutrit scheme. This is the gate-noise budget an idle baseline must
/// match.
pub fn baseline_gate_count(
    code: &CodeSpec,
    erased: &[usize],
    mode: DecodeMode,
    allow_uncorrectable: bool,
) -> Result<usize> {
    let count =
        |c: &Circuit| c.ops.iter().filter(|op| op.is_multi_qubit_unitary()).count();
    let mut m = count(&code.encoding);
    if code.name == Scheme::Qutrit {
        let share = code.share_of(erased).ok_or_else(|| {
            QssError::Config(format!(
                "qutrit erasures are whole shares; {erased:?} is not one"
            ))
        })?;
        let rec = code
            .recoveries
            .iter()
            .find(|r| r.erased_share == share)
            .ok_or_else(|| {
                QssError::Consistency(format!("no recovery for erased share {share}"))
            })?;
        m += count(&rec.circuit);
    } else {
        let table = match code.table_for(erased) {
            Some(t) => t,
            None if allow_uncorrectable => code.fallback_table().ok_or_else(|| {
                QssError::Consistency("code ships no fallback table".into())
            })?,
            None => {
                return Err(QssError::Uncorrectable(format!(
                    "erasure of qubits {:?} is not correctable for {}",
                    sorted_dedup(erased),
                    code.name
                )))
            }
        };
        m += count(&code.decoding);
        if mode == DecodeMode::Dcm {
            let masks = compile_linear_masks(table)?;
            m += masks
                .x_mask
                .iter()
                .chain(masks.z_mask.iter())
                .map(|&b| b as usize)
                .sum::<usize>();
        }
    }
    Ok(m)
}

/// Baseline suite: one row per job. The bare secret (padded with a scratch
/// qubit for the one-qubit schemes) idles through as many two-qubit
/// depolarizing slots as the real pipeline has noisy gates, then is
/// SWAP-tested against an untouched copy under the same readout treatment
/// as the swap suite.
pub(super) fn run_baseline(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let code = CodeSpec::load(config.scheme)?;
    let gates = baseline_gate_count(
        code,
        &config.erased,
        config.decoder,
        config.allow_uncorrectable,
    )?;
    let label = subset_label(&sorted_dedup(&config.erased));
    let p = config.noise.two_qubit_depolarizing;

    par_jobs(config.jobs, |job| {
        let mut rng = job_rng(config.seed, job);
        let spec = sample_angles(config.scheme, &mut rng);
        let psi = prepare_secret(&spec)?;
        let idle = if psi.n_qubits() == 1 {
            psi.tensor(&StateVector::zero(1)?)?
        } else {
            psi
        };
        let mut rho = idle.to_density_matrix();
        for _ in 0..gates {
            rho = rho.depolarized_on(&[1, 2], p)?;
        }

        let exact = swap_test_states(
            &State::Pure(idle.clone()),
            &State::Mixed(rho.clone()),
            None,
            &mut rng,
        )?
        .exact_p0;
        let sample = if config.noise.readout.is_none() {
            let res = swap_test_states(
                &State::Pure(idle.clone()),
                &State::Mixed(rho),
                Some(config.shots),
                &mut rng,
            )?;
            let rate = res.sampled_rate.expect("shots were requested");
            PassSample {
                hits: (rate * config.shots as f64).round() as u64,
                mitigated: None,
            }
        } else {
            sample_pass_rate(exact, config, &mut rng)?
        };
        let metric = sample.hits as f64 / config.shots as f64;
        let interval = bootstrap_rate(sample.hits, config.shots, &mut rng);
        Ok(vec![make_record(
            config,
            &label,
            config.decoder_label(),
            job,
            Some(angles_deg(&spec)),
            metric,
            sample.mitigated,
            interval,
        )])
    })
}

impl ExperimentConfig {
    /// Decoder column value: the decoder name for suites that decode,
    /// empty otherwise.
    pub(super) fn decoder_label(&self) -> &'static str {
        if !self.suite.uses_decoder() {
            return "";
        }
        match self.decoder {
            DecodeMode::Mcm => "mcm",
            DecodeMode::Dcm => "dcm",
        }
    }
}
