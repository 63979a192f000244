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

//! Reproducible experiment suites over the three sharing schemes, plus the
//! report plumbing behind the `qss` command line tool.
//!
//! A run is described by an [`ExperimentConfig`]; [`run_suite`] executes its
//! jobs (in parallel, each on an independent random stream derived from the
//! master seed, so results never depend on worker count) and returns one
//! [`ResultRecord`] per measurement row. [`render`] serializes records to
//! CSV or a JSON mirror of the same values; identical config and seed give
//! byte-identical output.

mod suites;

use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{DecodeMode, Scheme, SecretSpec};
use crate::error::{QssError, Result};

pub use suites::baseline_gate_count;

/// Default shots per job.
pub const DEFAULT_SHOTS: u64 = 1024;

/// Default number of jobs per run.
pub const DEFAULT_JOBS: usize = 10;

/// Bootstrap resamples behind each confidence interval.
pub const BOOTSTRAP_RESAMPLES: usize = 10_000;

/// Confidence level of the reported intervals.
pub const BOOTSTRAP_CONFIDENCE: f64 = 0.99;

/// The experiment suites the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Recover a sampled secret through the erasure pipeline and SWAP-test
    /// it against an ideal copy; the metric is the measured pass rate.
    Swap,
    /// Entanglement fidelity of the pipeline channel: the metric is the
    /// exact value, the mitigated column its sampled tomography estimate.
    Entfid,
    /// Largest secret-dependence (trace distance) visible in the erased
    /// subset's reduced state, probed over canonical and sampled secrets.
    Privacy,
    /// Audit every shipped correction table against re-derivation.
    Tables,
    /// Paired decodes differing only in the correction style; the metric is
    /// recovery fidelity against the ideal secret.
    McmVsDcm,
    /// Idle reference: the bare secret under the same number of noisy
    /// multi-qubit gate slots as the real pipeline, SWAP-tested against an
    /// untouched copy.
    Baseline,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Swap,
        Suite::Entfid,
        Suite::Privacy,
        Suite::Tables,
        Suite::McmVsDcm,
        Suite::Baseline,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Swap => "swap",
            Suite::Entfid => "entfid",
            Suite::Privacy => "privacy",
            Suite::Tables => "tables",
            Suite::McmVsDcm => "mcm-vs-dcm",
            Suite::Baseline => "baseline",
        }
    }

    /// True when the suite interprets `--erase`.
    pub fn uses_erasure(self) -> bool {
        self != Suite::Tables
    }

    /// True when the suite's rows depend on the decoder choice.
    pub fn uses_decoder(self) -> bool {
        matches!(self, Suite::Swap | Suite::Entfid | Suite::Baseline | Suite::McmVsDcm)
    }
}

impl FromStr for Suite {
    type Err = QssError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| QssError::Parse(format!("unknown suite '{s}'")))
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Report serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = QssError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(QssError::Parse(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// Uniform per-qubit readout error rates: `p01` is the probability of
/// reading 1 when 0 was prepared, `p10` the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutNoise {
    pub p01: f64,
    pub p10: f64,
}

/// Noise applied during a run.
///
/// Wire format: `{"two_qubit_depolarizing": 0.01, "readout": {"p01": 0.03,
/// "p10": 0.03}}`; both fields optional, defaulting to noiseless.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    /// Depolarizing strength applied to the qubits of every multi-qubit
    /// unitary in the encode and decode circuits.
    pub two_qubit_depolarizing: f64,
    /// Readout corruption applied to measured counts (`None` = perfect
    /// readout).
    pub readout: Option<ReadoutNoise>,
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |label: &str, v: f64| -> Result<()> {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(QssError::Config(format!("{label} = {v} outside [0, 1]")));
            }
            Ok(())
        };
        check("two_qubit_depolarizing", self.two_qubit_depolarizing)?;
        if let Some(ro) = &self.readout {
            check("readout.p01", ro.p01)?;
            check("readout.p10", ro.p10)?;
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let noise: NoiseConfig = serde_json::from_str(text)?;
        noise.validate()?;
        Ok(noise)
    }
}

/// Full description of one harness run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub scheme: Scheme,
    /// Erased qubit subset (1-based); ignored by the tables suite.
    pub erased: Vec<usize>,
    /// Correction style for the suites that decode.
    pub decoder: DecodeMode,
    pub shots: u64,
    pub jobs: usize,
    /// Master seed; job `j` runs on stream `j + 1` of this seed.
    pub seed: u64,
    pub noise: NoiseConfig,
    /// Apply readout mitigation to measured counts (requires a `readout`
    /// section in the noise config).
    pub mitigate: bool,
    /// Let the swap/entfid/baseline suites study an uncorrectable erasure
    /// with the code's fallback decoder instead of rejecting it.
    pub allow_uncorrectable: bool,
}

impl ExperimentConfig {
    /// A run with the default protocol scale: 10 jobs of 1024 shots,
    /// noiseless, seed 0.
    pub fn new(suite: Suite, scheme: Scheme) -> Self {
        ExperimentConfig {
            suite,
            scheme,
            erased: Vec::new(),
            decoder: DecodeMode::Mcm,
            shots: DEFAULT_SHOTS,
            jobs: DEFAULT_JOBS,
            seed: 0,
            noise: NoiseConfig::default(),
            mitigate: false,
            allow_uncorrectable: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(QssError::Config("shots must be >= 1".into()));
        }
        if self.jobs == 0 {
            return Err(QssError::Config("jobs must be >= 1".into()));
        }
        self.noise.validate()?;
        if self.suite.uses_erasure() && self.erased.is_empty() {
            return Err(QssError::Config(format!(
                "the {} suite needs --erase",
                self.suite
            )));
        }
        if self.mitigate && self.noise.readout.is_none() {
            return Err(QssError::Config(
                "--mitigate needs a readout section in the noise config".into(),
            ));
        }
        Ok(())
    }
}

/// One report row. Metrics are rounded to 12 decimal places on creation so
/// the CSV and JSON serializations carry bit-identical values.
///
/// Angle columns hold whole degrees: `theta_deg` is the `[0, 180]` angle
/// and `phi_deg` the `[0, 360]` one (for the qutrit scheme those are
/// `theta2` and `theta1` respectively); suites whose metric does not depend
/// on a sampled secret leave them empty. `metric_mitigated` is the
/// readout-mitigated variant where one applies (for the entfid suite, the
/// sampled tomography estimate of the exact `metric`). `ci_low..ci_high`
/// is a bootstrap confidence interval and always contains the point
/// estimate; deterministic metrics collapse it to the point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub suite: String,
    pub scheme: String,
    pub subset: String,
    pub decoder: String,
    pub job: usize,
    pub theta_deg: Option<f64>,
    pub phi_deg: Option<f64>,
    pub metric: f64,
    pub metric_mitigated: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

/// Round to 12 decimal places (report resolution).
pub(crate) fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Encode a subset for the report: `[1, 2] -> "1+2"`.
pub(crate) fn subset_label(subset: &[usize]) -> String {
    subset
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join("+")
}

/// The random stream of job `job` under a master seed. Jobs use distinct
/// streams of the same generator, so any subset of jobs can run in any
/// order, or concurrently, and still draw identical values.
pub fn job_rng(master_seed: u64, job: usize) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(job as u64 + 1);
    rng
}

/// Draw a secret from the whole-degree grids: the `[0, pi]` angle from the
/// 181-point grid and the `[0, 2 pi]` angle from the 361-point grid, both
/// endpoints included. The qutrit scheme draws `theta1` (361 points) before
/// `theta2` (181 points); the qubit schemes draw `theta` before `phi`.
pub fn sample_angles<R: rand::Rng>(scheme: Scheme, rng: &mut R) -> SecretSpec {
    match scheme {
        Scheme::Qutrit => {
            let theta1 = rng.gen_range(0..=360u32) as f64;
            let theta2 = rng.gen_range(0..=180u32) as f64;
            SecretSpec::Qutrit {
                theta1: theta1.to_radians(),
                theta2: theta2.to_radians(),
            }
        }
        _ => {
            let theta = rng.gen_range(0..=180u32) as f64;
            let phi = rng.gen_range(0..=360u32) as f64;
            SecretSpec::Qubit {
                theta: theta.to_radians(),
                phi: phi.to_radians(),
            }
        }
    }
}

/// Report angle columns of a sampled secret, in whole degrees.
pub(crate) fn angles_deg(spec: &SecretSpec) -> (f64, f64) {
    match *spec {
        SecretSpec::Qubit { theta, phi } => (theta.to_degrees().round(), phi.to_degrees().round()),
        SecretSpec::Qutrit { theta1, theta2 } => {
            (theta2.to_degrees().round(), theta1.to_degrees().round())
        }
    }
}

/// Execute a run and return its rows sorted by job index (row order within
/// a job is fixed by the suite).
pub fn run_suite(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    match config.suite {
        Suite::Swap => suites::run_swap(config),
        Suite::Entfid => suites::run_entfid(config),
        Suite::Privacy => suites::run_privacy(config),
        Suite::Tables => suites::run_tables(config),
        Suite::McmVsDcm => suites::run_mcm_vs_dcm(config),
        Suite::Baseline => suites::run_baseline(config),
    }
}

fn format_opt(x: Option<f64>, decimals: bool) -> String {
    match x {
        None => String::new(),
        Some(v) if decimals => format!("{v:.12}"),
        Some(v) => format!("{v}"),
    }
}

/// CSV serialization: a fixed header plus one line per record.
pub fn render_csv(records: &[ResultRecord]) -> String {
    let mut out = String::from(
        "suite,scheme,subset,decoder,job,theta_deg,phi_deg,metric,metric_mitigated,ci_low,ci_high,seed\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:.12},{},{:.12},{:.12},{}\n",
            r.suite,
            r.scheme,
            r.subset,
            r.decoder,
            r.job,
            format_opt(r.theta_deg, false),
            format_opt(r.phi_deg, false),
            r.metric,
            format_opt(r.metric_mitigated, true),
            r.ci_low,
            r.ci_high,
            r.seed,
        ));
    }
    out
}

/// JSON mirror of the CSV: `{"records": [...]}` with identical values.
pub fn render_json(records: &[ResultRecord]) -> Result<String> {
    #[derive(Serialize)]
    struct Report<'a> {
        records: &'a [ResultRecord],
    }
    let mut text = serde_json::to_string_pretty(&Report { records })?;
    text.push('\n');
    Ok(text)
}

/// Serialize records in the requested format.
pub fn render(records: &[ResultRecord], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(render_csv(records)),
        OutputFormat::Json => render_json(records),
    }
}

/// Write a report file. Output depends only on the records, so identical
/// config and seed produce byte-identical files.
pub fn emit(records: &[ResultRecord], format: OutputFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render(records, format)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_and_format_names_roundtrip() {
        for suite in Suite::ALL {
            assert_eq!(suite.as_str().parse::<Suite>().unwrap(), suite);
        }
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
        assert!("swaps".parse::<Suite>().is_err());
    }

    #[test]
    fn noise_config_wire_format() {
        let noise = NoiseConfig::from_json(
            r#"{"two_qubit_depolarizing": 0.01, "readout": {"p01": 0.02, "p10": 0.03}}"#,
        )
        .unwrap();
        assert_eq!(noise.two_qubit_depolarizing, 0.01);
        assert_eq!(noise.readout.unwrap().p10, 0.03);

        let empty = NoiseConfig::from_json("{}").unwrap();
        assert_eq!(empty, NoiseConfig::default());

        assert!(NoiseConfig::from_json(r#"{"two_qubit_depolarizing": 1.5}"#).is_err());
        assert!(NoiseConfig::from_json(r#"{"depolarizing": 0.1}"#).is_err());
    }

    #[test]
    fn config_validation_rules() {
        let mut config = ExperimentConfig::new(Suite::Swap, Scheme::FiveQubit);
        assert!(config.validate().is_err(), "swap without --erase must fail");
        config.erased = vec![1, 2];
        config.validate().unwrap();

        config.mitigate = true;
        assert!(config.validate().is_err(), "mitigate needs readout noise");
        config.noise.readout = Some(ReadoutNoise { p01: 0.01, p10: 0.01 });
        config.validate().unwrap();

        config.shots = 0;
        assert!(config.validate().is_err());
        config.shots = 1;
        config.jobs = 0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn job_streams_are_independent_and_stable() {
        use rand::RngCore;
        let mut a = job_rng(7, 0);
        let mut a2 = job_rng(7, 0);
        let mut b = job_rng(7, 1);
        let draws_a: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let draws_a2: Vec<u64> = (0..4).map(|_| a2.next_u64()).collect();
        let draws_b: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        assert_eq!(draws_a, draws_a2);
        assert_ne!(draws_a, draws_b);
    }

    #[test]
    fn angle_grids_are_inclusive_whole_degrees() {
        use std::collections::BTreeSet;
        let mut rng = job_rng(11, 0);
        let mut thetas = BTreeSet::new();
        let mut phis = BTreeSet::new();
        for _ in 0..20_000 {
            let spec = sample_angles(Scheme::FiveQubit, &mut rng);
            let (t, p) = angles_deg(&spec);
            assert_eq!(t, t.round());
            assert_eq!(p, p.round());
            assert!((0.0..=180.0).contains(&t));
            assert!((0.0..=360.0).contains(&p));
            thetas.insert(t as u32);
            phis.insert(p as u32);
        }
        // Endpoints reachable; 20k draws hit every point of both grids with
        // overwhelming probability.
        assert_eq!(thetas.len(), 181);
        assert_eq!(phis.len(), 361);

        let spec = sample_angles(Scheme::Qutrit, &mut rng);
        let (t2, t1) = angles_deg(&spec);
        assert!((0.0..=180.0).contains(&t2));
        assert!((0.0..=360.0).contains(&t1));
    }

    #[test]
    fn csv_and_json_mirror_the_same_values() {
        let records = vec![ResultRecord {
            suite: "swap".into(),
            scheme: "five_qubit".into(),
            subset: "1+2".into(),
            decoder: "mcm".into(),
            job: 0,
            theta_deg: Some(90.0),
            phi_deg: Some(45.0),
            metric: round12(0.123456789012345),
            metric_mitigated: None,
            ci_low: round12(0.1),
            ci_high: round12(0.2),
            seed: 7,
        }];
        let csv = render_csv(&records);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "suite,scheme,subset,decoder,job,theta_deg,phi_deg,metric,metric_mitigated,ci_low,ci_high,seed"
        );
        let row = lines.next().unwrap();
        assert_eq!(
            row,
            "swap,five_qubit,1+2,mcm,0,90,45,0.123456789012,,0.100000000000,0.200000000000,7"
        );

        let json = render_json(&records).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let rec = &value["records"][0];
        let csv_metric: f64 = row.split(',').nth(7).unwrap().parse().unwrap();
        assert_eq!(rec["metric"].as_f64().unwrap(), csv_metric);
        assert!(rec["metric_mitigated"].is_null());
    }
}
