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

//! Exact simulation, verification, and benchmarking of quantum secret
//! sharing (QSS) codes.
//!
//! The crate implements three threshold schemes on dense state vectors and
//! density matrices:
//!
//! * the ((3,5)) scheme built on the five-qubit code,
//! * the ((5,7)) scheme built on the seven-qubit CSS code, and
//! * the ((2,3)) qutrit scheme embedded in pairs of qubits.
//!
//! Modules are layered bottom-up: [`qcore`] provides gates, states, and
//! circuits; [`stabilizer`] provides Pauli algebra, syndrome extraction, and
//! correction tables; [`codes`] packages the three schemes; [`channels`] and
//! [`metrics`] provide noise models and figures of merit; [`mitigation`]
//! inverts readout error; [`harness`] drives reproducible experiment suites
//! for the `qss` command line tool.

pub mod channels;
pub mod codes;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod mitigation;
pub mod qcore;
pub mod stabilizer;

pub use error::QssError;
