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

//! Signed Pauli strings and stabilizer generator sets.
//!
//! Text format: optional phase prefix (`+`, `-`, `i`, `+i`, `-i`) followed
//! by letters over `{I, X, Y, Z}`, qubit 1 leftmost, e.g. `-XZZXI`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        Ok(match c {
            'I' => PauliLetter::I,
            'X' => PauliLetter::X,
            'Y' => PauliLetter::Y,
            'Z' => PauliLetter::Z,
            other => return Err(QssError::Parse(format!("invalid Pauli letter '{other}'"))),
        })
    }

    /// Symplectic (x, z) bits; `Y = i X Z` carries an extra `i`.
    pub fn xz(self) -> (u8, u8) {
        match self {
            PauliLetter::I => (0, 0),
            PauliLetter::X => (1, 0),
            PauliLetter::Y => (1, 1),
            PauliLetter::Z => (0, 1),
        }
    }

    /// Product of two letters: resulting letter and the power of `i`
    /// acquired (`X * Y = i Z` gives exponent 1).
    pub fn mul(self, other: PauliLetter) -> (PauliLetter, u8) {
        use PauliLetter::*;
        match (self, other) {
            (I, p) => (p, 0),
            (p, I) => (p, 0),
            (X, X) | (Y, Y) | (Z, Z) => (I, 0),
            (X, Y) => (Z, 1),
            (Y, X) => (Z, 3),
            (Y, Z) => (X, 1),
            (Z, Y) => (X, 3),
            (Z, X) => (Y, 1),
            (X, Z) => (Y, 3),
        }
    }

    /// 2x2 matrix.
    pub fn matrix(self) -> [Complex64; 4] {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliLetter::I => [one, z, z, one],
            PauliLetter::X => [z, one, one, z],
            PauliLetter::Y => [z, -i, i, z],
            PauliLetter::Z => [one, z, z, -one],
        }
    }
}

/// A phase in `{+1, +i, -1, -i}` times a tensor product of Pauli letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    /// Power of `i`: the phase is `i^phase_exp`.
    phase_exp: u8,
    letters: Vec<PauliLetter>,
}

impl PauliString {
    /// Identity string on `n` qubits with phase +1.
    pub fn identity(n: usize) -> Self {
        PauliString { phase_exp: 0, letters: vec![PauliLetter::I; n] }
    }

    /// Single-letter string `letter` on 1-based `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, letter: PauliLetter) -> Result<Self> {
        if qubit == 0 || qubit > n {
            return Err(QssError::Dimension(format!(
                "qubit {qubit} out of range 1..={n}"
            )));
        }
        let mut letters = vec![PauliLetter::I; n];
        letters[qubit - 1] = letter;
        Ok(PauliString { phase_exp: 0, letters })
    }

    pub fn from_letters(phase_exp: u8, letters: Vec<PauliLetter>) -> Self {
        PauliString { phase_exp: phase_exp % 4, letters }
    }

    /// Parse the text format, e.g. `-XZZXI`, `+iYZ`, `XX`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rest = text.trim();
        let mut phase_exp = 0u8;
        if let Some(r) = rest.strip_prefix("+i") {
            phase_exp = 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix("-i") {
            phase_exp = 3;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('i') {
            phase_exp = 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            phase_exp = 2;
            rest = r;
        }
        if rest.is_empty() {
            return Err(QssError::Parse(format!("empty Pauli string '{text}'")));
        }
        let letters: Result<Vec<PauliLetter>> =
            rest.chars().map(PauliLetter::from_char).collect();
        Ok(PauliString { phase_exp, letters: letters? })
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    /// The phase as a complex number `i^phase_exp`.
    pub fn phase(&self) -> Complex64 {
        match self.phase_exp {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    /// Letter at 1-based `qubit`.
    pub fn letter(&self, qubit: usize) -> PauliLetter {
        self.letters[qubit - 1]
    }

    pub fn set_letter(&mut self, qubit: usize, letter: PauliLetter) {
        self.letters[qubit - 1] = letter;
    }

    pub fn add_phase_exp(&mut self, exp: u8) {
        self.phase_exp = (self.phase_exp + exp) % 4;
    }

    /// True when all letters are identity (phase ignored).
    pub fn is_identity_letters(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    /// Product `self * other` with exact phase.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.letters.len() != other.letters.len() {
            return Err(QssError::Dimension("Pauli product: length mismatch".into()));
        }
        let mut phase_exp = (self.phase_exp + other.phase_exp) % 4;
        let mut letters = Vec::with_capacity(self.letters.len());
        for (&a, &b) in self.letters.iter().zip(other.letters.iter()) {
            let (l, dp) = a.mul(b);
            phase_exp = (phase_exp + dp) % 4;
            letters.push(l);
        }
        Ok(PauliString { phase_exp, letters })
    }

    /// Hermitian adjoint (letters unchanged, phase conjugated).
    pub fn adjoint(&self) -> PauliString {
        PauliString {
            phase_exp: (4 - self.phase_exp) % 4,
            letters: self.letters.clone(),
        }
    }

    /// True iff the two strings commute (phases irrelevant).
    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        if self.letters.len() != other.letters.len() {
            return Err(QssError::Dimension("commutation: length mismatch".into()));
        }
        let mut anti = 0u32;
        for (&a, &b) in self.letters.iter().zip(other.letters.iter()) {
            let (ax, az) = a.xz();
            let (bx, bz) = b.xz();
            anti += u32::from(ax & bz != 0) + u32::from(az & bx != 0);
        }
        Ok(anti % 2 == 0)
    }

    /// Dense matrix including the phase, row-major `2^n x 2^n`.
    pub fn to_matrix(&self) -> Vec<Complex64> {
        let mut mat = vec![self.phase()];
        for &letter in &self.letters {
            let lm = letter.matrix();
            let dim = (mat.len() as f64).sqrt() as usize;
            let new_dim = dim * 2;
            let mut next = vec![Complex64::new(0.0, 0.0); new_dim * new_dim];
            for r in 0..dim {
                for c in 0..dim {
                    let v = mat[r * dim + c];
                    if v.norm_sqr() == 0.0 {
                        continue;
                    }
                    for lr in 0..2 {
                        for lc in 0..2 {
                            next[(r * 2 + lr) * new_dim + (c * 2 + lc)] = v * lm[lr * 2 + lc];
                        }
                    }
                }
            }
            mat = next;
        }
        mat
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_exp {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        PauliString::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Stabilizer generators plus the logical Pauli pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub generators: Vec<PauliString>,
    pub logical_z: PauliString,
    pub logical_x: PauliString,
}

impl GeneratorSet {
    /// Validate commutation structure.
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.generators.iter().enumerate() {
            for b in self.generators.iter().skip(i + 1) {
                if !a.commutes_with(b)? {
                    return Err(QssError::Consistency(format!(
                        "generators {a} and {b} anticommute"
                    )));
                }
            }
        }
        for g in &self.generators {
            if !self.logical_z.commutes_with(g)? {
                return Err(QssError::Consistency(format!(
                    "logical Z {} anticommutes with generator {g}",
                    self.logical_z
                )));
            }
            if !self.logical_x.commutes_with(g)? {
                return Err(QssError::Consistency(format!(
                    "logical X {} anticommutes with generator {g}",
                    self.logical_x
                )));
            }
        }
        if self.logical_z.commutes_with(&self.logical_x)? {
            return Err(QssError::Consistency(
                "logical Z and logical X must anticommute".into(),
            ));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.logical_z.n_qubits()
    }
}

/// Syndrome of `error` against the generators: bit `i` is 1 iff the error
/// anticommutes with generator `i`.
pub fn syndrome_of(error: &PauliString, gens: &GeneratorSet) -> Result<Vec<u8>> {
    let mut bits = Vec::with_capacity(gens.generators.len());
    for g in &gens.generators {
        bits.push(u8::from(!error.commutes_with(g)?));
    }
    Ok(bits)
}

/// Render syndrome bits as a string key, generator 1 leftmost.
pub fn syndrome_key(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_roundtrip() {
        for text in ["+XZZXI", "-XZZXI", "+iYZ", "-iII", "+ZZZZZ"] {
            let p = PauliString::parse(text).unwrap();
            assert_eq!(p.to_string(), text);
        }
        // Prefix-free and bare-i forms parse too.
        assert_eq!(PauliString::parse("XZ").unwrap().to_string(), "+XZ");
        assert_eq!(PauliString::parse("iXZ").unwrap().to_string(), "+iXZ");
        assert!(PauliString::parse("XQ").is_err());
        assert!(PauliString::parse("").is_err());
        assert!(PauliString::parse("-").is_err());
    }

    #[test]
    fn product_phases_are_exact() {
        let x = PauliString::parse("X").unwrap();
        let y = PauliString::parse("Y").unwrap();
        let z = PauliString::parse("Z").unwrap();
        assert_eq!(x.mul(&y).unwrap().to_string(), "+iZ");
        assert_eq!(y.mul(&x).unwrap().to_string(), "-iZ");
        assert_eq!(z.mul(&x).unwrap().to_string(), "+iY");
        assert_eq!(x.mul(&z).unwrap().to_string(), "-iY");
        assert_eq!(y.mul(&y).unwrap().to_string(), "+I");
        // Phase composition: (iZ)(iZ) = -I.
        let iz = PauliString::parse("iZ").unwrap();
        assert_eq!(iz.mul(&iz).unwrap().to_string(), "-I");
    }

    #[test]
    fn product_matches_matrix_product() {
        let cases = [("XY", "ZZ"), ("YZ", "XY"), ("ZX", "YY"), ("XI", "IZ")];
        for (a, b) in cases {
            let pa = PauliString::parse(a).unwrap();
            let pb = PauliString::parse(b).unwrap();
            let prod = pa.mul(&pb).unwrap();
            let ma = pa.to_matrix();
            let mb = pb.to_matrix();
            let mp = prod.to_matrix();
            let dim = 4;
            for r in 0..dim {
                for c in 0..dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..dim {
                        acc += ma[r * dim + k] * mb[k * dim + c];
                    }
                    assert!((acc - mp[r * dim + c]).norm() < 1e-14, "{a} * {b}");
                }
            }
        }
    }

    #[test]
    fn commutation_is_symplectic() {
        let a = PauliString::parse("XZZXI").unwrap();
        let b = PauliString::parse("IXZZX").unwrap();
        assert!(a.commutes_with(&b).unwrap());
        let x = PauliString::parse("XIIII").unwrap();
        let z = PauliString::parse("ZIIII").unwrap();
        assert!(!x.commutes_with(&z).unwrap());
    }

    #[test]
    fn adjoint_conjugates_phase() {
        let p = PauliString::parse("+iXZ").unwrap();
        assert_eq!(p.adjoint().to_string(), "-iXZ");
        let q = PauliString::parse("-YY").unwrap();
        assert_eq!(q.adjoint().to_string(), "-YY");
    }

    #[test]
    fn five_qubit_generator_set_is_valid() {
        let gens = GeneratorSet {
            generators: vec![
                PauliString::parse("+YZIZY").unwrap(),
                PauliString::parse("+IXZZX").unwrap(),
                PauliString::parse("+ZZXIX").unwrap(),
                PauliString::parse("+ZIZYY").unwrap(),
            ],
            logical_z: PauliString::parse("+ZZZZZ").unwrap(),
            logical_x: PauliString::parse("+XXXXX").unwrap(),
        };
        gens.validate().unwrap();
        // Identity error: all-zero syndrome.
        let id = PauliString::identity(5);
        assert_eq!(syndrome_of(&id, &gens).unwrap(), vec![0, 0, 0, 0]);
    }
}
