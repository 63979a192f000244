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

//! Euclidean projection onto the probability simplex.

use crate::error::{QssError, Result};

/// How far the input may deviate from summing to 1.
pub const SIMPLEX_SUM_TOLERANCE: f64 = 1e-9;

/// Map a quasi-probability vector (entries sum to 1, possibly negative) to
/// the closest probability vector in the L2 norm, via sort and threshold:
/// find the largest prefix of the descending sort whose shifted entries stay
/// positive, then clamp everything below the shift to zero.
pub fn nearest_probability(quasi: &[f64]) -> Result<Vec<f64>> {
    if quasi.is_empty() {
        return Err(QssError::Config("nearest_probability: empty input".into()));
    }
    if quasi.iter().any(|x| !x.is_finite()) {
        return Err(QssError::Config(
            "nearest_probability: input has non-finite entries".into(),
        ));
    }
    let sum: f64 = quasi.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_SUM_TOLERANCE {
        return Err(QssError::Config(format!(
            "nearest_probability: input sums to {sum}, expected 1"
        )));
    }
    let mut sorted = quasi.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut prefix = 0.0;
    let mut shift = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        prefix += u;
        let t = (1.0 - prefix) / (k + 1) as f64;
        if u + t > 0.0 {
            shift = t;
        }
    }
    Ok(quasi.iter().map(|&x| (x + shift).max(0.0)).collect())
}
