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

//! Signed Pauli-string algebra, Clifford conjugation, syndrome computation,
//! encoding verification, and brute-force derivation of correction tables.

mod conjugate;
mod pauli;
mod tables;
mod verify;

pub use conjugate::conjugate_pauli;
pub use pauli::{syndrome_key, syndrome_of, GeneratorSet, PauliLetter, PauliString};
pub use tables::{
    compile_linear_masks, derive_table, errors_on_subset, table_consistency_check,
    CorrectionTable, LinearMasks, TableMismatch, TableReport,
};
pub use verify::{equivalent_on_code_space, verify_encoding, VerificationReport, VerifyEntry};
