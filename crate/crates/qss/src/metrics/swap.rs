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

//! The SWAP test: an ancilla-controlled interference circuit whose
//! ancilla-0 probability is `(1 + overlap) / 2`, evaluated both exactly and
//! by sampling the circuit.

use std::f64::consts::FRAC_PI_4;

use rand::Rng;

use crate::codes::ops::apply_ops_state;
use crate::error::{QssError, Result};
use crate::qcore::{Circuit, DensityMatrix, GateKind, State, StateVector};

/// Outcome of a SWAP test between two states.
#[derive(Debug, Clone, Copy)]
pub struct SwapTestResult {
    /// `(1 + overlap) / 2` where overlap is `|<psi|phi>|^2` for pure inputs
    /// and `tr(rho sigma)` in general.
    pub exact_p0: f64,
    /// Fraction of sampled circuit shots that measured the ancilla as 0.
    pub sampled_rate: Option<f64>,
}

/// The SWAP-test circuit for two `n`-qubit registers: qubit 1 is the
/// ancilla, qubits `2..=n+1` hold the first state, `n+2..=2n+1` the second.
/// Controlled SWAPs are decomposed into CNOTs and a six-CNOT Toffoli so the
/// circuit stays within the native gate set.
pub fn swap_test_circuit(n: usize) -> Circuit {
    let mut c = Circuit::new(2 * n + 1, 0);
    c.push_gate(GateKind::H, vec![1], vec![]);
    for k in 0..n {
        let a = 2 + k;
        let b = 2 + n + k;
        push_cswap(&mut c, 1, a, b);
    }
    c.push_gate(GateKind::H, vec![1], vec![]);
    c
}

/// `CSWAP(ctrl; a, b) = CX(b,a) CCX(ctrl,a,b) CX(b,a)`.
fn push_cswap(c: &mut Circuit, ctrl: usize, a: usize, b: usize) {
    c.push_gate(GateKind::Cx, vec![b, a], vec![]);
    push_ccx(c, ctrl, a, b);
    c.push_gate(GateKind::Cx, vec![b, a], vec![]);
}

/// Toffoli from six CNOTs, two Hadamards, and seven `rz(+-pi/4)` rotations
/// (equal to the textbook T-gate network up to a global phase).
fn push_ccx(c: &mut Circuit, c1: usize, c2: usize, t: usize) {
    let tee = |c: &mut Circuit, q: usize| c.push_gate(GateKind::Rz, vec![q], vec![FRAC_PI_4]);
    let tdg = |c: &mut Circuit, q: usize| c.push_gate(GateKind::Rz, vec![q], vec![-FRAC_PI_4]);
    c.push_gate(GateKind::H, vec![t], vec![]);
    c.push_gate(GateKind::Cx, vec![c2, t], vec![]);
    tdg(c, t);
    c.push_gate(GateKind::Cx, vec![c1, t], vec![]);
    tee(c, t);
    c.push_gate(GateKind::Cx, vec![c2, t], vec![]);
    tdg(c, t);
    c.push_gate(GateKind::Cx, vec![c1, t], vec![]);
    tee(c, c2);
    tee(c, t);
    c.push_gate(GateKind::H, vec![t], vec![]);
    c.push_gate(GateKind::Cx, vec![c1, c2], vec![]);
    tee(c, c1);
    tdg(c, c2);
    c.push_gate(GateKind::Cx, vec![c1, c2], vec![]);
}

/// `tr(rho sigma)`, real by symmetry of the Hilbert-Schmidt pairing.
fn overlap_dm(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let dim = a.dim();
    let (ea, eb) = (a.entries(), b.entries());
    let mut acc = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            acc += (ea[r * dim + c] * eb[c * dim + r]).re;
        }
    }
    acc
}

/// SWAP test between two pure states.
pub fn swap_test<R: Rng>(
    psi: &StateVector,
    phi: &StateVector,
    shots: Option<u64>,
    rng: &mut R,
) -> Result<SwapTestResult> {
    swap_test_states(
        &State::Pure(psi.clone()),
        &State::Pure(phi.clone()),
        shots,
        rng,
    )
}

/// SWAP test between two states of equal width, pure or mixed. The exact
/// probability uses the closed form; the sampled rate runs the decomposed
/// circuit and draws `shots` ancilla measurements from its distribution.
pub fn swap_test_states<R: Rng>(
    a: &State,
    b: &State,
    shots: Option<u64>,
    rng: &mut R,
) -> Result<SwapTestResult> {
    let n = a.n_qubits();
    if b.n_qubits() != n {
        return Err(QssError::Dimension(format!(
            "swap test needs equal widths, got {n} and {} qubits",
            b.n_qubits()
        )));
    }
    let overlap = match (a, b) {
        (State::Pure(x), State::Pure(y)) => x.inner(y)?.norm_sqr(),
        _ => overlap_dm(&a.to_density_matrix(), &b.to_density_matrix()),
    };
    let exact_p0 = 0.5 * (1.0 + overlap);

    let sampled_rate = match shots {
        None => None,
        Some(0) => {
            return Err(QssError::Config("swap test shots must be >= 1".into()));
        }
        Some(s) => {
            let circuit = swap_test_circuit(n);
            let mut joint = match (a, b) {
                (State::Pure(x), State::Pure(y)) => {
                    State::Pure(StateVector::zero(1)?.tensor(x)?.tensor(y)?)
                }
                _ => {
                    let anc = DensityMatrix::basis(1, 0)?;
                    State::Mixed(
                        anc.tensor(&a.to_density_matrix())?
                            .tensor(&b.to_density_matrix())?,
                    )
                }
            };
            apply_ops_state(&mut joint, &circuit)?;
            let p0 = 1.0
                - match &joint {
                    State::Pure(sv) => sv.prob_one(1)?,
                    State::Mixed(dm) => dm.prob_one(1)?,
                };
            // The decomposed circuit realizes the closed form exactly; a gap
            // here means the simulation itself is broken.
            if (p0 - exact_p0).abs() > 1e-10 {
                return Err(QssError::Consistency(format!(
                    "swap circuit p0 {p0} disagrees with closed form {exact_p0}"
                )));
            }
            let hits = (0..s).filter(|_| rng.gen::<f64>() < p0).count();
            Some(hits as f64 / s as f64)
        }
    };
    Ok(SwapTestResult { exact_p0, sampled_rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn plus() -> StateVector {
        StateVector::from_amplitudes(
            1,
            vec![
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn closed_form_values() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let zero = StateVector::zero(1).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let same = swap_test(&zero, &zero, None, &mut rng).unwrap();
        assert!((same.exact_p0 - 1.0).abs() < 1e-14);
        let orth = swap_test(&zero, &one, None, &mut rng).unwrap();
        assert!((orth.exact_p0 - 0.5).abs() < 1e-14);
        // |<0|+>|^2 = 1/2, p0 = 3/4.
        let part = swap_test(&zero, &plus(), None, &mut rng).unwrap();
        assert!((part.exact_p0 - 0.75).abs() < 1e-14);
    }

    #[test]
    fn circuit_agrees_with_closed_form_and_samples_near_it() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let res = swap_test(&StateVector::zero(1).unwrap(), &plus(), Some(4096), &mut rng)
            .unwrap();
        let rate = res.sampled_rate.unwrap();
        let sigma = (0.75f64 * 0.25 / 4096.0).sqrt();
        assert!((rate - 0.75).abs() < 4.0 * sigma, "rate {rate} too far from 0.75");
    }

    #[test]
    fn works_on_mixed_states_with_trace_overlap() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        let pure = State::Pure(StateVector::zero(1).unwrap());
        let res = swap_test_states(&State::Mixed(mixed), &pure, Some(512), &mut rng).unwrap();
        // tr((I/2) |0><0|) = 1/2, p0 = 3/4.
        assert!((res.exact_p0 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn two_qubit_registers_swap_pairwise() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let mut bell = StateVector::zero(2).unwrap();
        bell.apply_gate(&crate::qcore::GateSpec::simple(GateKind::H, vec![1]).unwrap())
            .unwrap();
        bell.apply_gate(&crate::qcore::GateSpec::simple(GateKind::Cx, vec![1, 2]).unwrap())
            .unwrap();
        let res = swap_test(&bell, &bell, Some(256), &mut rng).unwrap();
        assert!((res.exact_p0 - 1.0).abs() < 1e-12);
        let other = StateVector::zero(2).unwrap();
        let res = swap_test(&bell, &other, None, &mut rng).unwrap();
        assert!((res.exact_p0 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn decomposed_toffoli_matches_dense_controlled_swap() {
        // Compare the 3-qubit circuit block (one CSWAP) against the exact
        // controlled-SWAP unitary, modulo global phase.
        let mut c = Circuit::new(3, 0);
        push_cswap(&mut c, 1, 2, 3);
        let got = c.unitary().unwrap();
        let mut want = vec![Complex64::new(0.0, 0.0); 64];
        for i in 0..8usize {
            // Control = bit of qubit 1 (MSB); swap qubits 2 and 3.
            let j = if i & 4 != 0 {
                (i & 4) | ((i & 1) << 1) | ((i & 2) >> 1)
            } else {
                i
            };
            want[j * 8 + i] = Complex64::new(1.0, 0.0);
        }
        // Strip the global phase using the largest entry.
        let k = (0..64).max_by(|&x, &y| got[x].norm().partial_cmp(&got[y].norm()).unwrap())
            .unwrap();
        let phase = got[k] / want[k];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - phase * w).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_mismatched_widths_and_zero_shots() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let a = StateVector::zero(1).unwrap();
        let b = StateVector::zero(2).unwrap();
        assert!(swap_test(&a, &b, None, &mut rng).is_err());
        assert!(swap_test(&a, &a, Some(0), &mut rng).is_err());
    }
}
