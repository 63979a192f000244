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

//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the simulation, verification, and harness layers.
#[derive(Debug, Error)]
pub enum QssError {
    /// A register index, dimension, or qubit count is out of range.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Text could not be parsed (Pauli strings, syndrome keys, CLI values).
    #[error("parse error: {0}")]
    Parse(String),

    /// A configuration file or flag combination is invalid.
    #[error("config error: {0}")]
    Config(String),

    /// An internal consistency check failed (tables, encodings, channels).
    #[error("consistency error: {0}")]
    Consistency(String),

    /// A requested erasure pattern has no consistent correction table.
    #[error("uncorrectable erasure: {0}")]
    Uncorrectable(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Underlying JSON failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenient crate-wide result alias.
pub type Result<T> = std::result::Result<T, QssError>;
