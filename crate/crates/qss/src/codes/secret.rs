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

//! Parametrized secret states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::qcore::StateVector;

/// Angles describing the secret to share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SecretSpec {
    /// One qubit on the Bloch sphere:
    /// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`,
    /// `theta` in `[0, pi]`, `phi` in `[0, 2 pi]`.
    Qubit { theta: f64, phi: f64 },
    /// One qutrit with real amplitudes
    /// `cos(theta2/2)|0> + sin(theta2/2) cos(theta1)|1> + sin(theta2/2) sin(theta1)|2>`,
    /// embedded in a qubit pair as `|0>=|00>`, `|1>=|01>`, `|2>=|10>`;
    /// `theta1` in `[0, 2 pi]`, `theta2` in `[0, pi]`.
    Qutrit { theta1: f64, theta2: f64 },
}

impl SecretSpec {
    /// Number of physical qubits the prepared secret occupies.
    pub fn n_qubits(&self) -> usize {
        match self {
            SecretSpec::Qubit { .. } => 1,
            SecretSpec::Qutrit { .. } => 2,
        }
    }

    fn check_range(label: &str, value: f64, hi: f64) -> Result<()> {
        if !value.is_finite() || !(0.0..=hi).contains(&value) {
            return Err(QssError::Config(format!(
                "{label} = {value} outside [0, {hi}]"
            )));
        }
        Ok(())
    }
}

/// Build the secret state from its angles. Amplitudes are written directly,
/// so the construction is exact up to floating-point evaluation of the
/// trigonometric functions; the qutrit embedding leaves the `|11>` amplitude
/// identically zero.
pub fn prepare_secret(spec: &SecretSpec) -> Result<StateVector> {
    match *spec {
        SecretSpec::Qubit { theta, phi } => {
            SecretSpec::check_range("theta", theta, std::f64::consts::PI)?;
            SecretSpec::check_range("phi", phi, 2.0 * std::f64::consts::PI)?;
            let half = 0.5 * theta;
            let amps = vec![
                Complex64::new(half.cos(), 0.0),
                Complex64::from_polar(half.sin(), phi),
            ];
            StateVector::from_amplitudes(1, amps)
        }
        SecretSpec::Qutrit { theta1, theta2 } => {
            SecretSpec::check_range("theta1", theta1, 2.0 * std::f64::consts::PI)?;
            SecretSpec::check_range("theta2", theta2, std::f64::consts::PI)?;
            let half = 0.5 * theta2;
            let amps = vec![
                Complex64::new(half.cos(), 0.0),
                Complex64::new(half.sin() * theta1.cos(), 0.0),
                Complex64::new(half.sin() * theta1.sin(), 0.0),
                Complex64::new(0.0, 0.0),
            ];
            StateVector::from_amplitudes(2, amps)
        }
    }
}
