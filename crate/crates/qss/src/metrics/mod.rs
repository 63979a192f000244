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

//! Figure-of-merit estimators: SWAP-test overlaps, entanglement fidelity of
//! recovery channels, full state tomography, and simplex projection for
//! turning quasi-distributions back into probabilities.

mod entfid;
mod simplex;
mod swap;
mod tomography;

pub use entfid::{choi_state, entanglement_fidelity, maximally_entangled_state};
pub use simplex::{nearest_probability, SIMPLEX_SUM_TOLERANCE};
pub use swap::{swap_test, swap_test_circuit, swap_test_states, SwapTestResult};
pub use tomography::{
    tomography_collect, tomography_exact_probabilities, tomography_reconstruct,
    tomography_reconstruct_probabilities, tomography_settings, TomographyData,
};
