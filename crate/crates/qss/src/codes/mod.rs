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

//! Secret-sharing code registry and the operations defined on a loaded code:
//! secret preparation, encoding, erasure, decoding, share recovery, and
//! access-structure classification.

mod classify;
pub(crate) mod ops;
mod registry;
mod secret;

pub use classify::SubsetClass;
pub use ops::{erase_to_fresh, DecodeMode, DecodeOptions, DecodeOutcome, SharePair};
pub use registry::{CodeSpec, QutritRecovery, Scheme};
pub use secret::{prepare_secret, SecretSpec};

pub(crate) use classify::probe_secrets;
pub(crate) use registry::sorted_dedup;
