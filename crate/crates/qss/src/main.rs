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

//! Command line front end of the experiment harness.
//!
//! Exit codes: 0 on success, 2 on configuration or I/O errors, 3 when a
//! consistency check fails (a stored table mismatch, or an uncorrectable
//! erasure requested without `--allow-uncorrectable`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qss::codes::{DecodeMode, Scheme};
use qss::harness::{
    emit, render, run_suite, ExperimentConfig, NoiseConfig, OutputFormat, Suite, DEFAULT_JOBS,
    DEFAULT_SHOTS,
};
use qss::QssError;

/// Run a quantum secret sharing experiment suite and report one CSV/JSON
/// row per measurement.
#[derive(Parser)]
#[command(name = "qss", version, about, long_about = None)]
struct Cli {
    /// Suite to run: swap, entfid, privacy, tables, mcm-vs-dcm, or baseline
    suite: Suite,

    /// Sharing scheme: five_qubit, steane, or qutrit
    #[arg(long)]
    scheme: Scheme,

    /// Erased qubits, 1-based, comma separated (e.g. `--erase 1,2`);
    /// ignored by the tables suite
    #[arg(long, value_delimiter = ',', value_name = "QUBITS")]
    erase: Vec<usize>,

    /// Correction style for the suites that decode: mcm (measured syndrome)
    /// or dcm (coherent correction network)
    #[arg(long, default_value = "mcm")]
    decoder: DecodeMode,

    /// Shots per job
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    shots: u64,

    /// Number of independent jobs
    #[arg(long, default_value_t = DEFAULT_JOBS)]
    jobs: usize,

    /// Master seed; job j draws from stream j+1 of this seed
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Noise config JSON file, e.g.
    /// `{"two_qubit_depolarizing": 0.01, "readout": {"p01": 0.03, "p10": 0.03}}`
    #[arg(long, value_name = "FILE")]
    noise: Option<PathBuf>,

    /// Apply readout mitigation (requires a readout section in --noise)
    #[arg(long)]
    mitigate: bool,

    /// Study an uncorrectable erasure with the fallback decoder instead of
    /// rejecting it
    #[arg(long)]
    allow_uncorrectable: bool,

    /// Report file; without it the report goes to stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Report format
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

fn run(cli: &Cli) -> Result<u8, QssError> {
    let noise = match &cli.noise {
        Some(path) => NoiseConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => NoiseConfig::default(),
    };
    let mut erased = cli.erase.clone();
    erased.sort_unstable();
    erased.dedup();

    let mut config = ExperimentConfig::new(cli.suite, cli.scheme);
    config.erased = erased;
    config.decoder = cli.decoder;
    config.shots = cli.shots;
    config.jobs = cli.jobs;
    config.seed = cli.seed;
    config.noise = noise;
    config.mitigate = cli.mitigate;
    config.allow_uncorrectable = cli.allow_uncorrectable;

    let records = run_suite(&config)?;
    match &cli.out {
        Some(path) => emit(&records, cli.format, path)?,
        None => print!("{}", render(&records, cli.format)?),
    }

    if cli.suite == Suite::Tables && records.iter().any(|r| r.metric != 1.0) {
        eprintln!("error: stored correction table(s) disagree with re-derivation");
        return Ok(3);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                QssError::Consistency(_) | QssError::Uncorrectable(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
