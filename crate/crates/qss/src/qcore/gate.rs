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

//! Gate vocabulary and matrices.
//!
//! Qubit convention used crate-wide: qubit 1 is the leftmost letter of a
//! Pauli string and the most significant bit of every basis index and
//! bitstring. For multi-qubit gates, `targets[0]` is the most significant
//! bit of the gate's own matrix basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Gate names. `Sdg` is the adjoint of `S`; `Sx` is the square root of `X`;
/// `Cx` is the controlled-NOT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    Sx,
    Rx,
    Ry,
    Rz,
    Cx,
    Cz,
    Swap,
}

impl GateKind {
    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz | GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// Number of angle parameters the gate takes.
    pub fn param_arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            _ => 0,
        }
    }

    /// Lowercase text name used in circuit JSON.
    pub fn json_name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Sx => "sx",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
        }
    }

    /// Parse a lowercase JSON gate name.
    pub fn from_json_name(name: &str) -> Result<Self> {
        Ok(match name {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "sx" => GateKind::Sx,
            "rx" => GateKind::Rx,
            "ry" => GateKind::Ry,
            "rz" => GateKind::Rz,
            "cx" => GateKind::Cx,
            "cz" => GateKind::Cz,
            "swap" => GateKind::Swap,
            other => return Err(QssError::Parse(format!("unknown gate name '{other}'"))),
        })
    }
}

/// A concrete gate application: name, angle parameters, 1-based targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub name: GateKind,
    #[serde(default)]
    pub params: Vec<f64>,
    pub targets: Vec<usize>,
}

impl GateSpec {
    /// Build and validate arity immediately.
    pub fn new(name: GateKind, targets: Vec<usize>, params: Vec<f64>) -> Result<Self> {
        let spec = GateSpec { name, params, targets };
        spec.validate_arity()?;
        Ok(spec)
    }

    /// Parameter-free gate shorthand.
    pub fn simple(name: GateKind, targets: Vec<usize>) -> Result<Self> {
        GateSpec::new(name, targets, Vec::new())
    }

    /// Check param and target arity and target distinctness.
    pub fn validate_arity(&self) -> Result<()> {
        if self.targets.len() != self.name.arity() {
            return Err(QssError::Dimension(format!(
                "gate {:?} expects {} target(s), got {}",
                self.name,
                self.name.arity(),
                self.targets.len()
            )));
        }
        if self.params.len() != self.name.param_arity() {
            return Err(QssError::Dimension(format!(
                "gate {:?} expects {} param(s), got {}",
                self.name,
                self.name.param_arity(),
                self.params.len()
            )));
        }
        if self.targets.len() == 2 && self.targets[0] == self.targets[1] {
            return Err(QssError::Dimension(format!(
                "gate {:?} targets must be distinct",
                self.name
            )));
        }
        Ok(())
    }

    /// Check targets fit a register of `n_qubits` (1-based indices).
    pub fn validate_for(&self, n_qubits: usize) -> Result<()> {
        self.validate_arity()?;
        for &t in &self.targets {
            if t == 0 || t > n_qubits {
                return Err(QssError::Dimension(format!(
                    "gate {:?} target {t} out of range 1..={n_qubits}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Row-major unitary matrix, dimension `2^arity`.
    pub fn matrix(&self) -> Vec<Complex64> {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self.name {
            GateKind::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                vec![h, h, h, -h]
            }
            GateKind::X => vec![z, one, one, z],
            GateKind::Y => vec![z, -i, i, z],
            GateKind::Z => vec![one, z, z, -one],
            GateKind::S => vec![one, z, z, i],
            GateKind::Sdg => vec![one, z, z, -i],
            GateKind::Sx => {
                let a = Complex64::new(0.5, 0.5);
                let b = Complex64::new(0.5, -0.5);
                vec![a, b, b, a]
            }
            GateKind::Rx => {
                let t = self.params[0] / 2.0;
                let c = Complex64::new(t.cos(), 0.0);
                let s = Complex64::new(0.0, -t.sin());
                vec![c, s, s, c]
            }
            GateKind::Ry => {
                let t = self.params[0] / 2.0;
                let c = Complex64::new(t.cos(), 0.0);
                let s = Complex64::new(t.sin(), 0.0);
                vec![c, -s, s, c]
            }
            GateKind::Rz => {
                let t = self.params[0] / 2.0;
                vec![Complex64::from_polar(1.0, -t), z, z, Complex64::from_polar(1.0, t)]
            }
            GateKind::Cx => vec![
                one, z, z, z, //
                z, one, z, z, //
                z, z, z, one, //
                z, z, one, z,
            ],
            GateKind::Cz => vec![
                one, z, z, z, //
                z, one, z, z, //
                z, z, one, z, //
                z, z, z, -one,
            ],
            GateKind::Swap => vec![
                one, z, z, z, //
                z, z, one, z, //
                z, one, z, z, //
                z, z, z, one,
            ],
        }
    }

    /// Inverse gate, up to global phase (`Sx` inverts to `Rx(-pi/2)`).
    pub fn inverse(&self) -> GateSpec {
        match self.name {
            GateKind::S => GateSpec { name: GateKind::Sdg, params: vec![], targets: self.targets.clone() },
            GateKind::Sdg => GateSpec { name: GateKind::S, params: vec![], targets: self.targets.clone() },
            GateKind::Sx => GateSpec {
                name: GateKind::Rx,
                params: vec![-std::f64::consts::FRAC_PI_2],
                targets: self.targets.clone(),
            },
            GateKind::Rx | GateKind::Ry | GateKind::Rz => GateSpec {
                name: self.name,
                params: vec![-self.params[0]],
                targets: self.targets.clone(),
            },
            // H, X, Y, Z, CX, CZ, SWAP are involutions.
            _ => self.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_unitary(m: &[Complex64], dim: usize) -> bool {
        let mut max_dev = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                let mut dot = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    dot += m[k * dim + r].conj() * m[k * dim + c];
                }
                let want = if r == c { 1.0 } else { 0.0 };
                max_dev = max_dev.max((dot - want).norm());
            }
        }
        max_dev < 1e-12
    }

    #[test]
    fn all_gates_are_unitary() {
        let one_q: Vec<GateSpec> = [
            GateKind::H,
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::S,
            GateKind::Sdg,
            GateKind::Sx,
        ]
        .iter()
        .map(|&k| GateSpec::simple(k, vec![1]).unwrap())
        .collect();
        for g in one_q {
            assert!(is_unitary(&g.matrix(), 2), "{:?} not unitary", g.name);
        }
        for k in [GateKind::Rx, GateKind::Ry, GateKind::Rz] {
            let g = GateSpec::new(k, vec![1], vec![0.7713]).unwrap();
            assert!(is_unitary(&g.matrix(), 2), "{k:?} not unitary");
        }
        for k in [GateKind::Cx, GateKind::Cz, GateKind::Swap] {
            let g = GateSpec::simple(k, vec![1, 2]).unwrap();
            assert!(is_unitary(&g.matrix(), 4), "{k:?} not unitary");
        }
    }

    #[test]
    fn sx_squares_to_x() {
        let sx = GateSpec::simple(GateKind::Sx, vec![1]).unwrap().matrix();
        let x = GateSpec::simple(GateKind::X, vec![1]).unwrap().matrix();
        for r in 0..2 {
            for c in 0..2 {
                let mut dot = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    dot += sx[r * 2 + k] * sx[k * 2 + c];
                }
                assert!((dot - x[r * 2 + c]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_is_inverse() {
        let cases = vec![
            GateSpec::simple(GateKind::H, vec![1]).unwrap(),
            GateSpec::simple(GateKind::S, vec![1]).unwrap(),
            GateSpec::simple(GateKind::Sx, vec![1]).unwrap(),
            GateSpec::new(GateKind::Rz, vec![1], vec![1.234]).unwrap(),
            GateSpec::new(GateKind::Ry, vec![1], vec![-0.4]).unwrap(),
        ];
        for g in cases {
            let m = g.matrix();
            let mi = g.inverse().matrix();
            // Product must be the identity up to global phase.
            let mut prod = vec![Complex64::new(0.0, 0.0); 4];
            for r in 0..2 {
                for c in 0..2 {
                    for k in 0..2 {
                        prod[r * 2 + c] += m[r * 2 + k] * mi[k * 2 + c];
                    }
                }
            }
            let phase = prod[0];
            assert!((phase.norm() - 1.0).abs() < 1e-12);
            assert!((prod[3] - phase).norm() < 1e-12, "{:?}", g.name);
            assert!(prod[1].norm() < 1e-12 && prod[2].norm() < 1e-12);
        }
    }

    #[test]
    fn arity_violations_rejected() {
        assert!(GateSpec::new(GateKind::H, vec![1, 2], vec![]).is_err());
        assert!(GateSpec::new(GateKind::Rx, vec![1], vec![]).is_err());
        assert!(GateSpec::new(GateKind::Cx, vec![2, 2], vec![]).is_err());
        assert!(GateSpec::new(GateKind::H, vec![1], vec![0.1]).is_err());
    }
}
