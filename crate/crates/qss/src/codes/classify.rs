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

//! Access-structure classification of share subsets.
//!
//! A subset of shares is **authorized** exactly when erasing its complement
//! is a correctable erasure (the survivors can rebuild the secret). For
//! unauthorized subsets we distinguish whether the subset's reduced state
//! carries any trace of the secret: **private** subsets have a marginal that
//! is independent of the secret, **leaky** subsets do not. Privacy is probed
//! numerically with a family of fixed and seeded-random secrets; a private
//! marginal is secret-independent to machine precision, so the 1e-9 test
//! threshold separates the two cases by many orders of magnitude.
//!
//! The three shipped schemes never produce a leaky verdict: their encoded
//! states are pure and their codes are pure, so every subset either
//! commands a full logical operator pair (authorized) or sees a marginal
//! with no secret dependence at all (private). The leaky class is detected
//! anyway rather than assumed away, which keeps the classifier honest for
//! any future scheme whose unauthorized marginals do retain information.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::qcore::DensityMatrix;
use crate::stabilizer::derive_table;

use super::registry::{sorted_dedup, CodeSpec, Scheme};
use super::secret::{prepare_secret, SecretSpec};

const PRIVACY_TOLERANCE: f64 = 1e-9;
const PROBE_SEED: u64 = 0x51ac3;
const N_RANDOM_PROBES: usize = 8;

/// Where a share subset sits in the access structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetClass {
    /// The subset can reconstruct the secret.
    Authorized,
    /// The subset's reduced state is independent of the secret.
    UnauthorizedPrivate,
    /// The subset cannot reconstruct the secret, but its reduced state still
    /// depends on it.
    UnauthorizedLeaky,
}

impl SubsetClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SubsetClass::Authorized => "authorized",
            SubsetClass::UnauthorizedPrivate => "unauthorized_private",
            SubsetClass::UnauthorizedLeaky => "unauthorized_leaky",
        }
    }
}

impl fmt::Display for SubsetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Secrets used to probe whether a marginal depends on the secret: a fixed
/// spread of basis and superposition states plus seeded random angles.
pub(crate) fn probe_secrets(scheme: Scheme) -> Vec<SecretSpec> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
    let mut rng = ChaCha12Rng::seed_from_u64(PROBE_SEED);
    let mut probes = Vec::with_capacity(4 + N_RANDOM_PROBES);
    match scheme {
        Scheme::Qutrit => {
            let uniform_theta2 = 2.0 * (1.0f64 / 3.0f64.sqrt()).acos();
            probes.push(SecretSpec::Qutrit { theta1: 0.0, theta2: 0.0 });
            probes.push(SecretSpec::Qutrit { theta1: 0.0, theta2: PI });
            probes.push(SecretSpec::Qutrit { theta1: FRAC_PI_2, theta2: PI });
            probes.push(SecretSpec::Qutrit { theta1: FRAC_PI_4, theta2: uniform_theta2 });
            for _ in 0..N_RANDOM_PROBES {
                probes.push(SecretSpec::Qutrit {
                    theta1: 2.0 * PI * rng.gen::<f64>(),
                    theta2: PI * rng.gen::<f64>(),
                });
            }
        }
        _ => {
            probes.push(SecretSpec::Qubit { theta: 0.0, phi: 0.0 });
            probes.push(SecretSpec::Qubit { theta: PI, phi: 0.0 });
            probes.push(SecretSpec::Qubit { theta: FRAC_PI_2, phi: 0.0 });
            probes.push(SecretSpec::Qubit { theta: FRAC_PI_2, phi: FRAC_PI_2 });
            for _ in 0..N_RANDOM_PROBES {
                // Uniform on the Bloch sphere.
                probes.push(SecretSpec::Qubit {
                    theta: (1.0 - 2.0 * rng.gen::<f64>()).acos(),
                    phi: 2.0 * PI * rng.gen::<f64>(),
                });
            }
        }
    }
    probes
}

impl CodeSpec {
    /// The largest pairwise trace distance between the subset's marginals
    /// over the probe secrets. Zero (to machine precision) means the subset
    /// learns nothing about the secret.
    pub fn probe_marginal_spread(&self, subset: &[usize]) -> Result<f64> {
        let marginals: Vec<DensityMatrix> = probe_secrets(self.name)
            .iter()
            .map(|spec| {
                let shared = self.encode(&prepare_secret(spec)?)?;
                shared.to_density_matrix().partial_trace(subset)
            })
            .collect::<Result<_>>()?;
        let mut max = 0.0f64;
        for (i, a) in marginals.iter().enumerate() {
            for b in marginals.iter().skip(i + 1) {
                max = max.max(a.trace_distance(b)?);
            }
        }
        Ok(max)
    }

    /// Classify a subset of qubits against the access structure. For the
    /// qutrit scheme the subset must be a union of whole shares.
    pub fn classify_subset(&self, subset: &[usize]) -> Result<SubsetClass> {
        let sub = sorted_dedup(subset);
        if sub.is_empty() {
            return Err(QssError::Config("cannot classify an empty subset".into()));
        }
        if sub.iter().any(|&q| q == 0 || q > self.n_physical) {
            return Err(QssError::Dimension(format!(
                "subset {sub:?} outside 1..={}",
                self.n_physical
            )));
        }

        let authorized = if self.name == Scheme::Qutrit {
            let held: Vec<usize> = self
                .shares
                .iter()
                .enumerate()
                .filter(|(_, pair)| pair.iter().all(|q| sub.contains(q)))
                .map(|(i, _)| i + 1)
                .collect();
            let covered: usize = held.iter().map(|&s| self.shares[s - 1].len()).sum();
            if covered != sub.len() {
                return Err(QssError::Config(format!(
                    "qutrit subsets are unions of whole shares; {sub:?} splits a pair"
                )));
            }
            // Two survivors admit a recovery circuit; one share does not.
            held.len() >= 2
        } else if sub.len() == self.n_physical {
            true
        } else {
            let complement: Vec<usize> =
                (1..=self.n_physical).filter(|q| !sub.contains(q)).collect();
            let gens = self
                .generators
                .as_ref()
                .expect("stabilizer schemes carry generators");
            match derive_table(
                &self.decoding,
                gens,
                self.secret_register,
                &self.syndrome_registers,
                &complement,
            ) {
                Ok(_) => true,
                Err(QssError::Uncorrectable(_)) => false,
                Err(e) => return Err(e),
            }
        };

        if authorized {
            return Ok(SubsetClass::Authorized);
        }
        if self.probe_marginal_spread(&sub)? < PRIVACY_TOLERANCE {
            Ok(SubsetClass::UnauthorizedPrivate)
        } else {
            Ok(SubsetClass::UnauthorizedLeaky)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_qubit_threshold_structure() {
        let code = CodeSpec::load(Scheme::FiveQubit).unwrap();
        // Any three or more shares reconstruct; any two or fewer see nothing.
        assert_eq!(code.classify_subset(&[1, 2, 3]).unwrap(), SubsetClass::Authorized);
        assert_eq!(code.classify_subset(&[2, 4, 5]).unwrap(), SubsetClass::Authorized);
        assert_eq!(code.classify_subset(&[1, 2, 3, 4]).unwrap(), SubsetClass::Authorized);
        assert_eq!(
            code.classify_subset(&[4, 5]).unwrap(),
            SubsetClass::UnauthorizedPrivate
        );
        assert_eq!(
            code.classify_subset(&[3]).unwrap(),
            SubsetClass::UnauthorizedPrivate
        );
    }

    #[test]
    fn steane_mixed_structure() {
        let code = CodeSpec::load(Scheme::Steane).unwrap();
        // {1,2,3,4} survives the correctable erasure {5,6,7}.
        assert_eq!(
            code.classify_subset(&[1, 2, 3, 4]).unwrap(),
            SubsetClass::Authorized
        );
        assert_eq!(
            code.classify_subset(&[1, 3, 5, 7]).unwrap(),
            SubsetClass::UnauthorizedPrivate
        );
        // {2,4,6} supports representatives of both logical operator types,
        // so erasing its complement {1,3,5,7} is a correctable erasure and
        // the triple reconstructs on its own. Its marginal accordingly
        // depends on the secret, which is what makes the complement private
        // rather than the triple: no-cloning forbids both at once.
        assert_eq!(
            code.classify_subset(&[2, 4, 6]).unwrap(),
            SubsetClass::Authorized
        );
        assert!(code.probe_marginal_spread(&[2, 4, 6]).unwrap() > 0.1);
        assert_eq!(
            code.classify_subset(&[1, 2]).unwrap(),
            SubsetClass::UnauthorizedPrivate
        );
        // The other minimal authorized triples share the same pattern.
        assert_eq!(
            code.classify_subset(&[1, 6, 7]).unwrap(),
            SubsetClass::Authorized
        );
        assert_eq!(
            code.classify_subset(&[5, 6, 7]).unwrap(),
            SubsetClass::UnauthorizedPrivate
        );
    }

    #[test]
    fn complements_are_never_both_authorized() {
        // No-cloning: a subset and its complement cannot both rebuild the
        // secret. Checked over every proper subset of both stabilizer codes.
        for scheme in [Scheme::FiveQubit, Scheme::Steane] {
            let code = CodeSpec::load(scheme).unwrap();
            let n = code.n_physical;
            let mut class_of = vec![SubsetClass::Authorized; 1 << n];
            for mask in 1..(1usize << n) - 1 {
                let sub: Vec<usize> = (1..=n).filter(|q| mask >> (q - 1) & 1 == 1).collect();
                class_of[mask] = code.classify_subset(&sub).unwrap();
                // Purity of these codes: unauthorized always means private.
                assert_ne!(
                    class_of[mask],
                    SubsetClass::UnauthorizedLeaky,
                    "{scheme} subset {sub:?} leaks"
                );
            }
            let full = (1usize << n) - 1;
            for mask in 1..full {
                assert!(
                    class_of[mask] != SubsetClass::Authorized
                        || class_of[full ^ mask] != SubsetClass::Authorized,
                    "{scheme} mask {mask:#b} and its complement are both authorized"
                );
            }
        }
    }

    #[test]
    fn qutrit_share_structure() {
        let code = CodeSpec::load(Scheme::Qutrit).unwrap();
        assert_eq!(
            code.classify_subset(&[1, 2, 3, 4]).unwrap(),
            SubsetClass::Authorized
        );
        assert_eq!(
            code.classify_subset(&[1, 2, 3, 4, 5, 6]).unwrap(),
            SubsetClass::Authorized
        );
        assert_eq!(
            code.classify_subset(&[5, 6]).unwrap(),
            SubsetClass::UnauthorizedPrivate
        );
        assert!(code.classify_subset(&[2, 3]).is_err());
    }

    #[test]
    fn subset_validation() {
        let code = CodeSpec::load(Scheme::FiveQubit).unwrap();
        assert!(code.classify_subset(&[]).is_err());
        assert!(code.classify_subset(&[6]).is_err());
        assert_eq!(
            code.classify_subset(&[1, 2, 3, 4, 5]).unwrap(),
            SubsetClass::Authorized
        );
    }
}
