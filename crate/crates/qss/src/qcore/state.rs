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

//! Dense state vectors and density matrices.
//!
//! Qubit 1 is the most significant bit of every basis index; the bit of
//! qubit `q` inside an `n`-qubit index `i` is `(i >> (n - q)) & 1`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{QssError, Result};
use crate::linalg;
use crate::qcore::gate::GateSpec;

/// Measurement outcome multiset: bitstring (qubit 1 leftmost) to count.
pub type Counts = BTreeMap<String, u64>;

/// Hard cap on register width; dense simulation beyond this is out of scope.
pub const MAX_QUBITS: usize = 14;

/// A classical control for a coherent controlled gate: the 1-based qubit
/// must be in the given computational-basis value for the gate to act.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub value: u8,
}

fn check_n_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(QssError::Dimension(format!(
            "register width {n_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Apply a `2^k x 2^k` matrix `mat` to the amplitudes in `data` (length
/// `2^nbits`), acting on bit positions `positions` (0-based from the least
/// significant bit; `positions[0]` is the most significant bit of the gate's
/// own basis). `controls` are (bit position, required bit) pairs; orbits
/// whose control bits mismatch are left untouched.
fn apply_kernel(
    data: &mut [Complex64],
    positions: &[u32],
    controls: &[(u32, u8)],
    mat: &[Complex64],
) {
    let k = positions.len();
    let sub_dim = 1usize << k;
    debug_assert_eq!(mat.len(), sub_dim * sub_dim);
    let target_mask: usize = positions.iter().map(|&p| 1usize << p).sum();
    let mut gathered = vec![Complex64::new(0.0, 0.0); sub_dim];
    let len = data.len();
    for base in 0..len {
        if base & target_mask != 0 {
            continue;
        }
        if controls
            .iter()
            .any(|&(p, v)| ((base >> p) & 1) as u8 != v)
        {
            continue;
        }
        for s in 0..sub_dim {
            let mut idx = base;
            for (j, &p) in positions.iter().enumerate() {
                if (s >> (k - 1 - j)) & 1 == 1 {
                    idx |= 1usize << p;
                }
            }
            gathered[s] = data[idx];
        }
        for s in 0..sub_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for (t, g) in gathered.iter().enumerate() {
                acc += mat[s * sub_dim + t] * g;
            }
            let mut idx = base;
            for (j, &p) in positions.iter().enumerate() {
                if (s >> (k - 1 - j)) & 1 == 1 {
                    idx |= 1usize << p;
                }
            }
            data[idx] = acc;
        }
    }
}

/// Pure state on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_n_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(QssError::Dimension(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// All-zero state `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        StateVector::basis(n_qubits, 0)
    }

    /// Build from explicit amplitudes; must be normalized within 1e-10.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_n_qubits(n_qubits)?;
        if amps.len() != 1usize << n_qubits {
            return Err(QssError::Dimension(format!(
                "expected {} amplitudes, got {}",
                1usize << n_qubits,
                amps.len()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(QssError::Dimension(format!(
                "state not normalized: |psi|^2 = {norm}"
            )));
        }
        Ok(StateVector { n_qubits, amps })
    }

    /// Tensor product `self (x) other`, with `other`'s qubits appended as
    /// the least significant block.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_n_qubits(self.n_qubits + other.n_qubits)?;
        let mut amps =
            Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { n_qubits: self.n_qubits + other.n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn bit_position(&self, qubit: usize) -> u32 {
        (self.n_qubits - qubit) as u32
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit == 0 || qubit > self.n_qubits {
            return Err(QssError::Dimension(format!(
                "qubit {qubit} out of range 1..={}",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Apply a gate in place.
    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        self.apply_gate_controlled(&[], gate)
    }

    /// Apply a gate restricted to basis states where every control qubit
    /// holds its required value.
    pub fn apply_gate_controlled(&mut self, controls: &[Control], gate: &GateSpec) -> Result<()> {
        gate.validate_for(self.n_qubits)?;
        let positions: Vec<u32> = gate.targets.iter().map(|&q| self.bit_position(q)).collect();
        let mut ctrl = Vec::with_capacity(controls.len());
        for c in controls {
            self.check_qubit(c.qubit)?;
            if c.value > 1 {
                return Err(QssError::Dimension(format!("control value {} not a bit", c.value)));
            }
            if gate.targets.contains(&c.qubit) {
                return Err(QssError::Dimension(format!(
                    "control qubit {} overlaps gate targets",
                    c.qubit
                )));
            }
            ctrl.push((self.bit_position(c.qubit), c.value));
        }
        apply_kernel(&mut self.amps, &positions, &ctrl, &gate.matrix());
        Ok(())
    }

    /// Born-rule probabilities over the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that `qubit` reads 1.
    pub fn prob_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let p = self.bit_position(qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> p) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projectively measure one qubit, collapsing the state.
    pub fn measure_qubit<R: Rng>(&mut self, qubit: usize, rng: &mut R) -> Result<u8> {
        let p1 = self.prob_one(qubit)?;
        let outcome = u8::from(rng.gen::<f64>() < p1);
        self.project_qubit(qubit, outcome)?;
        Ok(outcome)
    }

    /// Project onto `qubit = value` and renormalize.
    pub fn project_qubit(&mut self, qubit: usize, value: u8) -> Result<()> {
        self.check_qubit(qubit)?;
        let p = self.bit_position(qubit);
        let mut norm = 0.0f64;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i >> p) & 1) as u8 != value {
                *a = Complex64::new(0.0, 0.0);
            } else {
                norm += a.norm_sqr();
            }
        }
        if norm < 1e-300 {
            return Err(QssError::Consistency(format!(
                "projection of qubit {qubit} onto {value} has zero probability"
            )));
        }
        let scale = norm.sqrt().recip();
        for a in self.amps.iter_mut() {
            *a *= scale;
        }
        Ok(())
    }

    /// Measure then flip to `|0>` if needed (trajectory reset).
    pub fn reset_qubit<R: Rng>(&mut self, qubit: usize, rng: &mut R) -> Result<()> {
        let outcome = self.measure_qubit(qubit, rng)?;
        if outcome == 1 {
            let p = self.bit_position(qubit);
            let mask = 1usize << p;
            // X flip: swap amplitude pairs.
            for i in 0..self.amps.len() {
                if i & mask == 0 {
                    self.amps.swap(i, i | mask);
                }
            }
        }
        Ok(())
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(QssError::Dimension("inner: qubit count mismatch".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Promote to a density matrix `|psi><psi|`.
    pub fn to_density_matrix(&self) -> DensityMatrix {
        let dim = self.amps.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            if self.amps[r].norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..dim {
                entries[r * dim + c] = self.amps[r] * self.amps[c].conj();
            }
        }
        DensityMatrix { n_qubits: self.n_qubits, entries }
    }
}

/// Mixed state on `n_qubits` qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// `|index><index|`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        Ok(StateVector::basis(n_qubits, index)?.to_density_matrix())
    }

    /// Maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_n_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        let w = 1.0 / dim as f64;
        for r in 0..dim {
            entries[r * dim + r] = Complex64::new(w, 0.0);
        }
        Ok(DensityMatrix { n_qubits, entries })
    }

    /// Kronecker product `self (x) other`; `other`'s qubits are appended
    /// after (i.e. numbered higher than) `self`'s.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        check_n_qubits(n)?;
        let (da, db) = (self.dim(), other.dim());
        let dim = da * db;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for ra in 0..da {
            for ca in 0..da {
                let a = self.entries[ra * da + ca];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        entries[(ra * db + rb) * dim + (ca * db + cb)] =
                            a * other.entries[rb * db + cb];
                    }
                }
            }
        }
        Ok(DensityMatrix { n_qubits: n, entries })
    }

    /// Build from explicit row-major entries (validated lazily by
    /// `validate`; construction only checks the dimension).
    pub fn from_entries(n_qubits: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_n_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if entries.len() != dim * dim {
            return Err(QssError::Dimension(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(DensityMatrix { n_qubits, entries })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.entries, self.dim())
    }

    /// Check Hermiticity, unit trace, and eigenvalue floor.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        for r in 0..dim {
            for c in 0..=r {
                let d = self.entries[r * dim + c] - self.entries[c * dim + r].conj();
                if d.norm() > 1e-12 {
                    return Err(QssError::Consistency(format!(
                        "density matrix not Hermitian at ({r},{c}): {:.3e}",
                        d.norm()
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(QssError::Consistency(format!("trace = {tr} != 1")));
        }
        let (values, _) = linalg::eigh(&self.entries, dim)?;
        if let Some(min) = values.first() {
            if *min < -1e-10 {
                return Err(QssError::Consistency(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }

    fn row_bit(&self, qubit: usize) -> u32 {
        (2 * self.n_qubits - qubit) as u32
    }

    fn col_bit(&self, qubit: usize) -> u32 {
        (self.n_qubits - qubit) as u32
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit == 0 || qubit > self.n_qubits {
            return Err(QssError::Dimension(format!(
                "qubit {qubit} out of range 1..={}",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Apply a unitary gate: `rho -> U rho U^dag`.
    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        self.apply_gate_controlled(&[], gate)
    }

    /// Controlled version of [`DensityMatrix::apply_gate`].
    pub fn apply_gate_controlled(&mut self, controls: &[Control], gate: &GateSpec) -> Result<()> {
        gate.validate_for(self.n_qubits)?;
        for c in controls {
            self.check_qubit(c.qubit)?;
            if c.value > 1 {
                return Err(QssError::Dimension(format!("control value {} not a bit", c.value)));
            }
            if gate.targets.contains(&c.qubit) {
                return Err(QssError::Dimension(format!(
                    "control qubit {} overlaps gate targets",
                    c.qubit
                )));
            }
        }
        let mat = gate.matrix();
        let conj: Vec<Complex64> = mat.iter().map(|z| z.conj()).collect();
        let row_pos: Vec<u32> = gate.targets.iter().map(|&q| self.row_bit(q)).collect();
        let row_ctrl: Vec<(u32, u8)> =
            controls.iter().map(|c| (self.row_bit(c.qubit), c.value)).collect();
        apply_kernel(&mut self.entries, &row_pos, &row_ctrl, &mat);
        let col_pos: Vec<u32> = gate.targets.iter().map(|&q| self.col_bit(q)).collect();
        let col_ctrl: Vec<(u32, u8)> =
            controls.iter().map(|c| (self.col_bit(c.qubit), c.value)).collect();
        apply_kernel(&mut self.entries, &col_pos, &col_ctrl, &conj);
        Ok(())
    }

    /// Apply an arbitrary (not necessarily unitary) matrix `K` on the given
    /// target qubits: `rho -> K rho K^dag`. Used for Kraus terms.
    pub fn apply_matrix_both_sides(&mut self, targets: &[usize], mat: &[Complex64]) -> Result<()> {
        for &q in targets {
            self.check_qubit(q)?;
        }
        let conj: Vec<Complex64> = mat.iter().map(|z| z.conj()).collect();
        let row_pos: Vec<u32> = targets.iter().map(|&q| self.row_bit(q)).collect();
        apply_kernel(&mut self.entries, &row_pos, &[], mat);
        let col_pos: Vec<u32> = targets.iter().map(|&q| self.col_bit(q)).collect();
        apply_kernel(&mut self.entries, &col_pos, &[], &conj);
        Ok(())
    }

    /// Add `other` scaled by `w` into `self` (used to accumulate branches).
    pub fn add_scaled(&mut self, other: &DensityMatrix, w: f64) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(QssError::Dimension("add_scaled: qubit count mismatch".into()));
        }
        for (a, b) in self.entries.iter_mut().zip(other.entries.iter()) {
            *a += w * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, w: f64) {
        for a in self.entries.iter_mut() {
            *a *= w;
        }
    }

    /// Zero matrix of the same shape (accumulator seed).
    pub fn zero_like(&self) -> DensityMatrix {
        DensityMatrix {
            n_qubits: self.n_qubits,
            entries: vec![Complex64::new(0.0, 0.0); self.entries.len()],
        }
    }

    /// Diagonal Born probabilities.
    pub fn probabilities(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|k| self.entries[k * dim + k].re.max(0.0)).collect()
    }

    /// Probability that `qubit` reads 1.
    pub fn prob_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let dim = self.dim();
        let p = self.col_bit(qubit);
        Ok((0..dim)
            .filter(|i| (i >> p) & 1 == 1)
            .map(|i| self.entries[i * dim + i].re)
            .sum())
    }

    /// Projectively measure one qubit (trajectory semantics).
    pub fn measure_qubit<R: Rng>(&mut self, qubit: usize, rng: &mut R) -> Result<u8> {
        let p1 = self.prob_one(qubit)?;
        let outcome = u8::from(rng.gen::<f64>() < p1);
        self.project_qubit(qubit, outcome)?;
        Ok(outcome)
    }

    /// Project onto `qubit = value`, renormalizing; returns the branch
    /// probability that was projected onto.
    pub fn project_qubit(&mut self, qubit: usize, value: u8) -> Result<f64> {
        self.check_qubit(qubit)?;
        let weight = if value == 1 {
            self.prob_one(qubit)?
        } else {
            1.0 - self.prob_one(qubit)?
        };
        if weight < 1e-300 {
            return Err(QssError::Consistency(format!(
                "projection of qubit {qubit} onto {value} has zero probability"
            )));
        }
        let dim = self.dim();
        let p = self.col_bit(qubit);
        for r in 0..dim {
            for c in 0..dim {
                if ((r >> p) & 1) as u8 != value || ((c >> p) & 1) as u8 != value {
                    self.entries[r * dim + c] = Complex64::new(0.0, 0.0);
                }
            }
        }
        self.scale(weight.recip());
        Ok(weight)
    }

    /// Branch weight of projecting `qubit` onto `value` without mutating.
    pub fn branch_weight(&self, qubit: usize, value: u8) -> Result<f64> {
        let p1 = self.prob_one(qubit)?;
        Ok(if value == 1 { p1 } else { 1.0 - p1 })
    }

    /// Trace out every qubit not in `keep`; output qubits are the kept ones
    /// in ascending order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.is_empty() {
            return Err(QssError::Dimension("partial_trace: empty keep set".into()));
        }
        for &q in &kept {
            self.check_qubit(q)?;
        }
        let traced: Vec<usize> =
            (1..=self.n_qubits).filter(|q| !kept.contains(q)).collect();
        let k = kept.len();
        let dim_out = 1usize << k;
        let dim_in = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim_out * dim_out];
        // Index assembly: kept qubit j (ascending) is bit k-1-j of the output.
        let kept_shift: Vec<u32> = kept.iter().map(|&q| self.col_bit(q)).collect();
        let traced_shift: Vec<u32> = traced.iter().map(|&q| self.col_bit(q)).collect();
        let n_traced = traced.len();
        for ro in 0..dim_out {
            for co in 0..dim_out {
                let mut base_r = 0usize;
                let mut base_c = 0usize;
                for (j, &sh) in kept_shift.iter().enumerate() {
                    if (ro >> (k - 1 - j)) & 1 == 1 {
                        base_r |= 1usize << sh;
                    }
                    if (co >> (k - 1 - j)) & 1 == 1 {
                        base_c |= 1usize << sh;
                    }
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..(1usize << n_traced) {
                    let mut r = base_r;
                    let mut c = base_c;
                    for (j, &sh) in traced_shift.iter().enumerate() {
                        if (e >> j) & 1 == 1 {
                            r |= 1usize << sh;
                            c |= 1usize << sh;
                        }
                    }
                    acc += self.entries[r * dim_in + c];
                }
                out[ro * dim_out + co] = acc;
            }
        }
        DensityMatrix::from_entries(k, out)
    }

    /// Replace the qubits in `subset` with the state `block` (qubit order of
    /// `block` = ascending subset order), keeping all other qubits and their
    /// correlations: `rho -> tr_subset(rho) (x) block`, positions preserved.
    pub fn replace_subset(&self, subset: &[usize], block: &DensityMatrix) -> Result<DensityMatrix> {
        let mut sub: Vec<usize> = subset.to_vec();
        sub.sort_unstable();
        sub.dedup();
        if sub.is_empty() {
            return Err(QssError::Dimension("replace_subset: empty subset".into()));
        }
        if sub.len() >= self.n_qubits {
            return Err(QssError::Dimension(
                "replace_subset: subset covers all qubits".into(),
            ));
        }
        for &q in &sub {
            self.check_qubit(q)?;
        }
        if block.n_qubits != sub.len() {
            return Err(QssError::Dimension(format!(
                "replace_subset: block has {} qubits, subset {}",
                block.n_qubits,
                sub.len()
            )));
        }
        let kept: Vec<usize> = (1..=self.n_qubits).filter(|q| !sub.contains(q)).collect();
        let pt = self.partial_trace(&kept)?;
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        let kept_shift: Vec<u32> = kept.iter().map(|&q| self.col_bit(q)).collect();
        let sub_shift: Vec<u32> = sub.iter().map(|&q| self.col_bit(q)).collect();
        let kd = kept.len();
        let sd = sub.len();
        let block_dim = 1usize << sd;
        let pt_dim = 1usize << kd;
        for r in 0..dim {
            // Decompose row into kept part and subset part.
            let mut rk = 0usize;
            let mut rs = 0usize;
            for (j, &sh) in kept_shift.iter().enumerate() {
                rk |= (((r >> sh) & 1) as usize) << (kd - 1 - j);
            }
            for (j, &sh) in sub_shift.iter().enumerate() {
                rs |= (((r >> sh) & 1) as usize) << (sd - 1 - j);
            }
            for c in 0..dim {
                let mut ck = 0usize;
                let mut cs = 0usize;
                for (j, &sh) in kept_shift.iter().enumerate() {
                    ck |= (((c >> sh) & 1) as usize) << (kd - 1 - j);
                }
                for (j, &sh) in sub_shift.iter().enumerate() {
                    cs |= (((c >> sh) & 1) as usize) << (sd - 1 - j);
                }
                out[r * dim + c] =
                    pt.entries[rk * pt_dim + ck] * block.entries[rs * block_dim + cs];
            }
        }
        DensityMatrix::from_entries(self.n_qubits, out)
    }

    /// Uniform depolarizing on `subset` with strength `p`:
    /// `rho -> (1-p) rho + p * tr_subset(rho) (x) I/2^k`, positions preserved.
    pub fn depolarized_on(&self, subset: &[usize], p: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&p) {
            return Err(QssError::Config(format!(
                "depolarized_on: strength {p} outside [0, 1]"
            )));
        }
        if p == 0.0 {
            return Ok(self.clone());
        }
        let mut sub: Vec<usize> = subset.to_vec();
        sub.sort_unstable();
        sub.dedup();
        for &q in &sub {
            self.check_qubit(q)?;
        }
        let mixed = DensityMatrix::maximally_mixed(sub.len())?;
        // Covering the whole register leaves no complement to preserve.
        let mut out = if sub.len() == self.n_qubits {
            mixed
        } else {
            self.replace_subset(&sub, &mixed)?
        };
        out.scale(p);
        out.add_scaled(self, 1.0 - p)?;
        Ok(out)
    }

    /// Purity `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let dim = self.dim();
        let mut acc = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                acc += (self.entries[r * dim + c] * self.entries[c * dim + r]).re;
            }
        }
        acc
    }

    /// `tr(self * other)`, real for Hermitian inputs.
    pub fn overlap(&self, other: &DensityMatrix) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(QssError::Dimension("overlap: qubit count mismatch".into()));
        }
        let dim = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            for c in 0..dim {
                acc += self.entries[r * dim + c] * other.entries[c * dim + r];
            }
        }
        Ok(acc.re)
    }

    /// Expectation `<psi| rho |psi>`.
    pub fn expectation_pure(&self, psi: &StateVector) -> Result<f64> {
        if self.n_qubits != psi.n_qubits {
            return Err(QssError::Dimension(
                "expectation_pure: qubit count mismatch".into(),
            ));
        }
        let dim = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            if psi.amps[r].norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..dim {
                acc += psi.amps[r].conj() * self.entries[r * dim + c] * psi.amps[c];
            }
        }
        Ok(acc.re)
    }

    /// Trace distance `0.5 * ||self - other||_1`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(QssError::Dimension(
                "trace_distance: qubit count mismatch".into(),
            ));
        }
        let dim = self.dim();
        let diff: Vec<Complex64> = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a - b)
            .collect();
        let (values, _) = linalg::eigh(&diff, dim)?;
        Ok(0.5 * values.iter().map(|v| v.abs()).sum::<f64>())
    }
}

/// Pure-or-mixed state wrapper for interfaces accepting either.
#[derive(Debug, Clone)]
pub enum State {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl State {
    pub fn n_qubits(&self) -> usize {
        match self {
            State::Pure(sv) => sv.n_qubits(),
            State::Mixed(dm) => dm.n_qubits(),
        }
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        match self {
            State::Pure(sv) => sv.to_density_matrix(),
            State::Mixed(dm) => dm.clone(),
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        match self {
            State::Pure(sv) => sv.probabilities(),
            State::Mixed(dm) => dm.probabilities(),
        }
    }

    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        match self {
            State::Pure(sv) => sv.apply_gate(gate),
            State::Mixed(dm) => dm.apply_gate(gate),
        }
    }
}

impl From<StateVector> for State {
    fn from(sv: StateVector) -> Self {
        State::Pure(sv)
    }
}

impl From<DensityMatrix> for State {
    fn from(dm: DensityMatrix) -> Self {
        State::Mixed(dm)
    }
}

/// Render a basis index as a bitstring with qubit 1 leftmost.
pub fn index_to_bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| {
            if (index >> (n_qubits - 1 - q)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Sample `shots` bitstrings from the state's Born distribution.
pub fn measure_all<R: Rng>(state: &State, shots: u64, rng: &mut R) -> Result<Counts> {
    if shots == 0 {
        return Err(QssError::Dimension("measure_all: shots must be >= 1".into()));
    }
    let probs = state.probabilities();
    let n = state.n_qubits();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0f64;
    for p in &probs {
        acc += p.max(0.0);
        cumulative.push(acc);
    }
    let total = acc;
    let mut counts: Counts = BTreeMap::new();
    for _ in 0..shots {
        let x = rng.gen::<f64>() * total;
        let idx = match cumulative.binary_search_by(|c| c.partial_cmp(&x).unwrap()) {
            Ok(i) => (i + 1).min(probs.len() - 1),
            Err(i) => i.min(probs.len() - 1),
        };
        *counts.entry(index_to_bitstring(idx, n)).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Fidelity between two states: `|<a|b>|^2` for pure pairs, `<psi|rho|psi>`
/// for pure-mixed, Uhlmann fidelity for mixed pairs.
pub fn fidelity(a: &State, b: &State) -> Result<f64> {
    if a.n_qubits() != b.n_qubits() {
        return Err(QssError::Dimension("fidelity: qubit count mismatch".into()));
    }
    match (a, b) {
        (State::Pure(x), State::Pure(y)) => Ok(x.inner(y)?.norm_sqr()),
        (State::Pure(x), State::Mixed(r)) | (State::Mixed(r), State::Pure(x)) => {
            Ok(r.expectation_pure(x)?.clamp(0.0, 1.0 + 1e-9).min(1.0))
        }
        (State::Mixed(r), State::Mixed(s)) => {
            let dim = r.dim();
            let root = linalg::sqrtm_psd(r.entries(), dim)?;
            let inner = linalg::matmul(&linalg::matmul(&root, s.entries(), dim), &root, dim);
            let (values, _) = linalg::eigh(&inner, dim)?;
            let f: f64 = values.iter().map(|v| v.max(0.0).sqrt()).sum();
            Ok((f * f).min(1.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gate::GateKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn g(kind: GateKind, targets: Vec<usize>) -> GateSpec {
        GateSpec::simple(kind, targets).unwrap()
    }

    #[test]
    fn x_flips_and_h_superposes() {
        let mut sv = StateVector::zero(1).unwrap();
        sv.apply_gate(&g(GateKind::X, vec![1])).unwrap();
        assert!((sv.amplitudes()[1].re - 1.0).abs() < 1e-15);
        let mut sv = StateVector::zero(1).unwrap();
        sv.apply_gate(&g(GateKind::H, vec![1])).unwrap();
        assert!((sv.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((sv.amplitudes()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn cnot_msb_control_convention() {
        // |10> means qubit 1 = 1, qubit 2 = 0; CNOT(1,2) gives |11>.
        let mut sv = StateVector::basis(2, 0b10).unwrap();
        sv.apply_gate(&g(GateKind::Cx, vec![1, 2])).unwrap();
        assert!((sv.amplitudes()[0b11].re - 1.0).abs() < 1e-15);
        // Control 0 untouched.
        let mut sv = StateVector::basis(2, 0b01).unwrap();
        sv.apply_gate(&g(GateKind::Cx, vec![1, 2])).unwrap();
        assert!((sv.amplitudes()[0b01].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_pair_is_mixed() {
        let mut sv = StateVector::zero(2).unwrap();
        sv.apply_gate(&g(GateKind::H, vec![1])).unwrap();
        sv.apply_gate(&g(GateKind::Cx, vec![1, 2])).unwrap();
        let dm = sv.to_density_matrix();
        for keep in [vec![1usize], vec![2usize]] {
            let red = dm.partial_trace(&keep).unwrap();
            let mm = DensityMatrix::maximally_mixed(1).unwrap();
            let dev: f64 = red
                .entries()
                .iter()
                .zip(mm.entries().iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-14);
        }
    }

    #[test]
    fn partial_trace_stages_compose() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut sv = StateVector::zero(3).unwrap();
        for q in 1..=3 {
            sv.apply_gate(&GateSpec::new(GateKind::Ry, vec![q], vec![rng.gen::<f64>() * 3.0]).unwrap())
                .unwrap();
        }
        sv.apply_gate(&g(GateKind::Cx, vec![1, 2])).unwrap();
        sv.apply_gate(&g(GateKind::Cz, vec![2, 3])).unwrap();
        let dm = sv.to_density_matrix();
        let direct = dm.partial_trace(&[2]).unwrap();
        let staged = dm.partial_trace(&[1, 2]).unwrap().partial_trace(&[2]).unwrap();
        let dev: f64 = direct
            .entries()
            .iter()
            .zip(staged.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-13);
        // Keeping everything is the identity.
        let all = dm.partial_trace(&[1, 2, 3]).unwrap();
        let dev: f64 = all
            .entries()
            .iter()
            .zip(dm.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-15);
    }

    #[test]
    fn replace_subset_refreshes_bell_half() {
        let mut sv = StateVector::zero(2).unwrap();
        sv.apply_gate(&g(GateKind::H, vec![1])).unwrap();
        sv.apply_gate(&g(GateKind::Cx, vec![1, 2])).unwrap();
        let dm = sv.to_density_matrix();
        let fresh = DensityMatrix::basis(1, 0).unwrap();
        let out = dm.replace_subset(&[2], &fresh).unwrap();
        // Expect I/2 (x) |0><0|.
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c && (r == 0 || r == 2) { 0.5 } else { 0.0 };
                assert!((out.entry(r, c) - Complex64::new(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn depolarizing_covers_partial_and_full_registers() {
        let mut sv = StateVector::zero(2).unwrap();
        sv.apply_gate(&g(GateKind::H, vec![1])).unwrap();
        sv.apply_gate(&g(GateKind::Cx, vec![1, 2])).unwrap();
        let dm = sv.to_density_matrix();

        // Full strength over the whole register is the maximally mixed state.
        let full = dm.depolarized_on(&[1, 2], 1.0).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c { 0.25 } else { 0.0 };
                assert!((full.entry(r, c) - Complex64::new(want, 0.0)).norm() < 1e-14);
            }
        }

        // Half strength mixes linearly and keeps the trace.
        let half = dm.depolarized_on(&[2, 1, 2], 0.5).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let want = 0.5 * dm.entry(r, c) + 0.5 * full.entry(r, c);
                assert!((half.entry(r, c) - want).norm() < 1e-14);
            }
        }
        assert!((half.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-14);

        assert!(dm.depolarized_on(&[3], 0.1).is_err());
        assert!(dm.depolarized_on(&[1], 1.5).is_err());
    }

    #[test]
    fn fidelity_contract_cases() {
        let zero: State = StateVector::zero(1).unwrap().into();
        let one: State = StateVector::basis(1, 1).unwrap().into();
        let mut plus_sv = StateVector::zero(1).unwrap();
        plus_sv.apply_gate(&g(GateKind::H, vec![1])).unwrap();
        let plus: State = plus_sv.clone().into();
        assert!((fidelity(&zero, &one).unwrap() - 0.0).abs() < 1e-15);
        assert!((fidelity(&zero, &plus).unwrap() - 0.5).abs() < 1e-14);
        // Global phase invariance.
        let phased = StateVector::from_amplitudes(
            1,
            plus_sv
                .amplitudes()
                .iter()
                .map(|a| a * Complex64::from_polar(1.0, 0.91))
                .collect(),
        )
        .unwrap();
        assert!((fidelity(&plus, &phased.into()).unwrap() - 1.0).abs() < 1e-12);
        // Mixed-mixed Uhlmann: F(I/2, |0><0|) = 1/2.
        let mm: State = DensityMatrix::maximally_mixed(1).unwrap().into();
        let zero_dm: State = DensityMatrix::basis(1, 0).unwrap().into();
        assert!((fidelity(&mm, &zero_dm).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn measure_all_eigenstate_and_support() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let zero: State = StateVector::zero(3).unwrap().into();
        let counts = measure_all(&zero, 1024, &mut rng).unwrap();
        assert_eq!(counts.get("000"), Some(&1024));
        // Bell pair: only 00 and 11.
        let mut sv = StateVector::zero(2).unwrap();
        sv.apply_gate(&g(GateKind::H, vec![1])).unwrap();
        sv.apply_gate(&g(GateKind::Cx, vec![1, 2])).unwrap();
        let counts = measure_all(&sv.into(), 4096, &mut rng).unwrap();
        let total: u64 = counts.values().sum();
        assert_eq!(total, 4096);
        for key in counts.keys() {
            assert!(key == "00" || key == "11", "unexpected outcome {key}");
        }
    }

    #[test]
    fn norm_preserved_under_random_circuit() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut sv = StateVector::zero(4).unwrap();
        for _ in 0..60 {
            let q = rng.gen_range(1..=4usize);
            match rng.gen_range(0..4) {
                0 => sv.apply_gate(&g(GateKind::H, vec![q])).unwrap(),
                1 => sv
                    .apply_gate(&GateSpec::new(GateKind::Rz, vec![q], vec![rng.gen::<f64>()]).unwrap())
                    .unwrap(),
                2 => {
                    let mut r = rng.gen_range(1..=4usize);
                    if r == q {
                        r = (q % 4) + 1;
                    }
                    sv.apply_gate(&g(GateKind::Cx, vec![q, r])).unwrap();
                }
                _ => sv.apply_gate(&g(GateKind::Sx, vec![q])).unwrap(),
            }
        }
        assert!((sv.norm_sqr() - 1.0).abs() < 1e-12);
    }

    use std::f64::consts::FRAC_1_SQRT_2;
}
