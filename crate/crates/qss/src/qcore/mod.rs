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

//! Exact dense simulation of qubit registers: gates, circuits, measurement,
//! partial trace, and native-gate decomposition identities.

pub mod circuit;
pub mod gate;
pub mod state;

pub use circuit::{
    apply_circuit, exact_branches, native_decomposition, Branch, Circuit, CircuitOp, ClbitRecord,
};
pub use gate::{GateKind, GateSpec};
pub use state::{
    fidelity, index_to_bitstring, measure_all, Control, Counts, DensityMatrix, State, StateVector,
    MAX_QUBITS,
};
