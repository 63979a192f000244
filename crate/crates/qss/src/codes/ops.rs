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

//! Encode, erase, decode, and share-recovery operations on a loaded code.
//!
//! Decoding supports two physically distinct but (noiselessly) equivalent
//! realizations:
//!
//! * **Mcm** measures the syndrome registers after the decoding unitary and
//!   applies the table's correction classically per outcome. The exact
//!   density-matrix form sums the corrected post-measurement branches, which
//!   reproduces the shot average with no sampling error.
//! * **Dcm** defers the measurement: the correction is compiled into a
//!   coherent network of CX/CZ gates from the syndrome registers onto the
//!   secret register (possible because every consistent correction table is
//!   GF(2)-linear in the syndrome), and the syndrome registers are then
//!   traced out. Under gate noise the network's two-qubit gates attract
//!   noise like any other, so the two modes differ at first order in the
//!   noise strength while agreeing exactly when noise is off.

use num_complex::Complex64;
use rand::{Rng, RngCore};

use crate::error::{QssError, Result};
use crate::qcore::{Circuit, CircuitOp, DensityMatrix, GateKind, State, StateVector};
use crate::stabilizer::{compile_linear_masks, CorrectionTable, PauliLetter};

use super::registry::{sorted_dedup, CodeSpec, Scheme};
use super::secret::{prepare_secret, SecretSpec};

/// How the syndrome-conditioned correction is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeMode {
    /// Mid-circuit measurement of the syndrome registers plus a classically
    /// conditioned correction.
    Mcm,
    /// Deferred measurement: coherent correction network, ancillas traced out.
    Dcm,
}

impl std::str::FromStr for DecodeMode {
    type Err = QssError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mcm" => Ok(DecodeMode::Mcm),
            "dcm" => Ok(DecodeMode::Dcm),
            other => Err(QssError::Parse(format!(
                "unknown decode mode '{other}' (expected mcm or dcm)"
            ))),
        }
    }
}

/// Knobs for a decode run.
#[derive(Debug, Clone, Copy, Default)]
pub struct DecodeOptions<'a> {
    /// Correction table to use instead of the code's own table for the
    /// erased subset. Not applicable to the qutrit scheme.
    pub table: Option<&'a CorrectionTable>,
    /// When a syndrome with nonzero weight has no table row, apply identity
    /// instead of failing. Off by default: silent identity on an unknown
    /// syndrome hides decoder bugs, so callers opt in for noisy runs where
    /// stray syndromes are expected.
    pub missing_syndrome_identity: bool,
    /// Depolarizing strength applied to the qubits of every multi-qubit
    /// unitary in the decode path (0 disables noise).
    pub gate_depolarizing: f64,
}

/// Result of a decode: the recovered state plus the measurement record.
#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    /// Recovered secret: one qubit for the stabilizer schemes, the target
    /// share's qubit pair for the qutrit scheme.
    pub state: DensityMatrix,
    /// Sampled syndrome bits (generator order), when an RNG was supplied.
    /// Always `None` for the qutrit scheme, whose recovery is syndrome-free.
    pub syndrome: Option<Vec<u8>>,
    /// Correction letter applied on the sampled syndrome's branch.
    pub correction: Option<PauliLetter>,
}

/// Which two shares of the qutrit scheme survive, ordered so that the
/// recovery lands the secret on the first share of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharePair {
    /// Shares 1 and 2 survive (share 3 erased); secret lands on share 1.
    P12,
    /// Shares 2 and 3 survive (share 1 erased); secret lands on share 2.
    P23,
    /// Shares 3 and 1 survive (share 2 erased); secret lands on share 3.
    P31,
}

impl SharePair {
    pub const ALL: [SharePair; 3] = [SharePair::P12, SharePair::P23, SharePair::P31];

    pub fn survivors(self) -> (usize, usize) {
        match self {
            SharePair::P12 => (1, 2),
            SharePair::P23 => (2, 3),
            SharePair::P31 => (3, 1),
        }
    }

    pub fn erased_share(self) -> usize {
        match self {
            SharePair::P12 => 3,
            SharePair::P23 => 1,
            SharePair::P31 => 2,
        }
    }

    pub fn target_share(self) -> usize {
        self.survivors().0
    }

    pub fn label(self) -> &'static str {
        match self {
            SharePair::P12 => "12",
            SharePair::P23 => "23",
            SharePair::P31 => "31",
        }
    }

    /// The pair whose erased share is `share`.
    pub fn for_erased_share(share: usize) -> Result<SharePair> {
        SharePair::ALL
            .into_iter()
            .find(|p| p.erased_share() == share)
            .ok_or_else(|| QssError::Config(format!("share index {share} out of range 1..=3")))
    }
}

impl std::str::FromStr for SharePair {
    type Err = QssError;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace(',', "").as_str() {
            "12" => Ok(SharePair::P12),
            "23" => Ok(SharePair::P23),
            "31" => Ok(SharePair::P31),
            other => Err(QssError::Parse(format!(
                "unknown share pair '{other}' (expected 12, 23, or 31)"
            ))),
        }
    }
}

/// Apply a measurement-free circuit to a pure state.
fn apply_ops_sv(sv: &mut StateVector, circuit: &Circuit) -> Result<()> {
    for op in &circuit.ops {
        match op {
            CircuitOp::Gate { .. } => sv.apply_gate(&op.gate_spec().unwrap())?,
            CircuitOp::ControlledGate { controls, .. } => {
                sv.apply_gate_controlled(controls, &op.gate_spec().unwrap())?
            }
            other => {
                return Err(QssError::Config(format!(
                    "expected a unitary circuit, found a {} op",
                    other.kind_name()
                )))
            }
        }
    }
    Ok(())
}

/// Apply a measurement-free circuit to a density matrix, inserting `noise`
/// depolarizing on the touched qubits after every multi-qubit op.
pub(crate) fn apply_ops_dm(rho: &mut DensityMatrix, circuit: &Circuit, noise: f64) -> Result<()> {
    for op in &circuit.ops {
        match op {
            CircuitOp::Gate { .. } => rho.apply_gate(&op.gate_spec().unwrap())?,
            CircuitOp::ControlledGate { controls, .. } => {
                rho.apply_gate_controlled(controls, &op.gate_spec().unwrap())?
            }
            other => {
                return Err(QssError::Config(format!(
                    "expected a unitary circuit, found a {} op",
                    other.kind_name()
                )))
            }
        }
        if noise > 0.0 && op.is_multi_qubit_unitary() {
            *rho = rho.depolarized_on(&op.qubits(), noise)?;
        }
    }
    Ok(())
}

/// Apply a measurement-free circuit to a pure or mixed state.
pub(crate) fn apply_ops_state(state: &mut State, circuit: &Circuit) -> Result<()> {
    match state {
        State::Pure(sv) => apply_ops_sv(sv, circuit),
        State::Mixed(dm) => apply_ops_dm(dm, circuit, 0.0),
    }
}

/// Replace `subset` with fresh `|0>` qubits: the erasure channel applied to
/// a known location, followed by re-initialization of the lost qubits.
pub fn erase_to_fresh(state: &State, subset: &[usize]) -> Result<DensityMatrix> {
    let dm = state.to_density_matrix();
    let fresh = DensityMatrix::basis(subset.len(), 0)?;
    dm.replace_subset(subset, &fresh)
}

/// `L blk L^dag` for a 2x2 block in row-major order.
fn conjugate_block(letter: PauliLetter, blk: &[Complex64; 4]) -> [Complex64; 4] {
    let l = letter.matrix();
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..2 {
                for d in 0..2 {
                    acc += l[a * 2 + c] * blk[c * 2 + d] * l[b * 2 + d].conj();
                }
            }
            out[a * 2 + b] = acc;
        }
    }
    out
}

/// Draw an index proportionally to `weights` (negatives clamped to zero).
fn pick_weighted(weights: &[f64], rng: &mut dyn RngCore) -> Option<usize> {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    if total <= 1e-12 {
        return None;
    }
    let handle: &mut dyn RngCore = rng;
    let mut u: f64 = handle.gen::<f64>() * total;
    let mut last = None;
    for (s, &w) in weights.iter().enumerate() {
        let w = w.max(0.0);
        if w > 0.0 {
            last = Some(s);
            u -= w;
            if u <= 0.0 {
                return Some(s);
            }
        }
    }
    last
}

/// Syndrome value bits, generator order (index 0 = generator 1).
fn syndrome_bits(s: usize, m: usize) -> Vec<u8> {
    (0..m).map(|i| ((s >> (m - 1 - i)) & 1) as u8).collect()
}

fn syndrome_key_of(s: usize, m: usize) -> String {
    (0..m)
        .map(|i| if (s >> (m - 1 - i)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl CodeSpec {
    /// The contiguous qubits the secret occupies before encoding and after
    /// decoding: `[secret_register]` for the stabilizer schemes, the secret
    /// share's pair for the qutrit scheme.
    pub fn secret_block(&self) -> &[usize] {
        match self.name {
            Scheme::Qutrit => self
                .shares
                .iter()
                .find(|p| p[0] == self.secret_register)
                .map(|p| p.as_slice())
                .expect("secret share validated at load"),
            _ => std::slice::from_ref(&self.secret_register),
        }
    }

    /// Encode a secret state into the shared `n_physical`-qubit state.
    pub fn encode(&self, secret: &StateVector) -> Result<StateVector> {
        let block = self.secret_block().to_vec();
        if secret.n_qubits() != block.len() {
            return Err(QssError::Dimension(format!(
                "{} secret occupies {} qubit(s), got {}",
                self.name,
                block.len(),
                secret.n_qubits()
            )));
        }
        if self.name == Scheme::Qutrit {
            let gap = secret.amplitudes()[3].norm();
            if gap > 1e-12 {
                return Err(QssError::Config(format!(
                    "qutrit secret has weight {gap:.3e} on the unused |11> level"
                )));
            }
        }
        let before = block[0] - 1;
        let after = self.n_physical - block[block.len() - 1];
        let mut sv = secret.clone();
        if before > 0 {
            sv = StateVector::zero(before)?.tensor(&sv)?;
        }
        if after > 0 {
            sv = sv.tensor(&StateVector::zero(after)?)?;
        }
        apply_ops_sv(&mut sv, &self.encoding)?;
        Ok(sv)
    }

    /// Prepare the secret from angles and encode it; the spec's variant must
    /// match the scheme (qubit angles for the stabilizer schemes, qutrit
    /// angles for the qutrit scheme).
    pub fn encode_secret(&self, spec: &SecretSpec) -> Result<StateVector> {
        let want = self.secret_block().len();
        if spec.n_qubits() != want {
            return Err(QssError::Config(format!(
                "secret spec prepares {} qubit(s) but {} shares a {}-qubit secret",
                spec.n_qubits(),
                self.name,
                want
            )));
        }
        self.encode(&prepare_secret(spec)?)
    }

    /// Decode with a sampled measurement record.
    pub fn decode<R: Rng>(
        &self,
        joint: &DensityMatrix,
        erased: &[usize],
        mode: DecodeMode,
        opts: &DecodeOptions,
        rng: &mut R,
    ) -> Result<DecodeOutcome> {
        self.decode_impl(joint, erased, mode, opts, Some(rng as &mut dyn RngCore))
    }

    /// Decode without sampling a record (`syndrome`/`correction` are `None`).
    /// This variant never consumes randomness, so it is safe on inputs that
    /// are not valid states (e.g. matrix units when deriving a channel).
    pub fn decode_unrecorded(
        &self,
        joint: &DensityMatrix,
        erased: &[usize],
        mode: DecodeMode,
        opts: &DecodeOptions,
    ) -> Result<DecodeOutcome> {
        self.decode_impl(joint, erased, mode, opts, None)
    }

    fn decode_impl(
        &self,
        joint: &DensityMatrix,
        erased: &[usize],
        mode: DecodeMode,
        opts: &DecodeOptions,
        rng: Option<&mut dyn RngCore>,
    ) -> Result<DecodeOutcome> {
        if joint.n_qubits() != self.n_physical {
            return Err(QssError::Dimension(format!(
                "{} decodes {} qubits, got {}",
                self.name,
                self.n_physical,
                joint.n_qubits()
            )));
        }
        if self.name == Scheme::Qutrit {
            if opts.table.is_some() {
                return Err(QssError::Config(
                    "correction tables do not apply to the qutrit scheme".into(),
                ));
            }
            return self.decode_qutrit(joint, erased, opts);
        }
        let erased_sorted = sorted_dedup(erased);
        let table = match opts.table {
            Some(t) => t,
            None => self.table_for(&erased_sorted).ok_or_else(|| {
                QssError::Uncorrectable(format!(
                    "erasure of qubits {erased_sorted:?} is not correctable for {}",
                    self.name
                ))
            })?,
        };
        let mut rho = joint.clone();
        apply_ops_dm(&mut rho, &self.decoding, opts.gate_depolarizing)?;
        match mode {
            DecodeMode::Mcm => self.mcm_extract(&rho, table, &erased_sorted, opts, rng),
            DecodeMode::Dcm => self.dcm_extract(rho, table, opts, rng),
        }
    }

    /// Exact branch sum over syndrome outcomes: project the syndrome
    /// registers onto each computational value, apply that value's table
    /// correction to the secret qubit, and add up the corrected branches.
    fn mcm_extract(
        &self,
        rho: &DensityMatrix,
        table: &CorrectionTable,
        erased: &[usize],
        opts: &DecodeOptions,
        rng: Option<&mut dyn RngCore>,
    ) -> Result<DecodeOutcome> {
        let n = self.n_physical;
        let m = self.syndrome_registers.len();
        debug_assert_eq!(m + 1, n, "syndrome registers plus secret cover the state");
        let sec_shift = n - self.secret_register;
        let synd_shifts: Vec<usize> = self.syndrome_registers.iter().map(|&q| n - q).collect();

        let mut acc = [Complex64::new(0.0, 0.0); 4];
        let mut weights = vec![0.0f64; 1 << m];
        let mut letters: Vec<Option<PauliLetter>> = vec![None; 1 << m];
        for s in 0..(1usize << m) {
            let mut base = 0usize;
            for (i, &sh) in synd_shifts.iter().enumerate() {
                base |= ((s >> (m - 1 - i)) & 1) << sh;
            }
            let hi = base | (1 << sec_shift);
            let blk = [
                rho.entry(base, base),
                rho.entry(base, hi),
                rho.entry(hi, base),
                rho.entry(hi, hi),
            ];
            let key = syndrome_key_of(s, m);
            let letter = match table.lookup(&key) {
                Some(l) => l,
                None if blk.iter().all(|e| e.norm() <= 1e-12) => continue,
                None if opts.missing_syndrome_identity => PauliLetter::I,
                None => {
                    return Err(QssError::Uncorrectable(format!(
                        "syndrome {key} (weight {:.3e}) has no table row for erasure {:?}",
                        (blk[0] + blk[3]).re,
                        erased
                    )))
                }
            };
            weights[s] = (blk[0] + blk[3]).re;
            letters[s] = Some(letter);
            let corrected = conjugate_block(letter, &blk);
            for k in 0..4 {
                acc[k] += corrected[k];
            }
        }
        let state = DensityMatrix::from_entries(1, acc.to_vec())?;
        let (syndrome, correction) = match rng {
            Some(r) => match pick_weighted(&weights, r) {
                Some(s) => (Some(syndrome_bits(s, m)), letters[s]),
                None => (None, None),
            },
            None => (None, None),
        };
        Ok(DecodeOutcome { state, syndrome, correction })
    }

    /// Deferred-measurement correction: CX for each syndrome bit in the
    /// X mask, CZ for each bit in the Z mask, then trace out the syndrome
    /// registers. The sampled record reads the registers' Z-basis marginal,
    /// which the correction network leaves untouched.
    fn dcm_extract(
        &self,
        mut rho: DensityMatrix,
        table: &CorrectionTable,
        opts: &DecodeOptions,
        rng: Option<&mut dyn RngCore>,
    ) -> Result<DecodeOutcome> {
        let masks = compile_linear_masks(table)?;
        let n = self.n_physical;
        let m = self.syndrome_registers.len();
        let mut net = Circuit::new(n, 0);
        for (i, &q) in self.syndrome_registers.iter().enumerate() {
            if masks.x_mask[i] == 1 {
                net.push_gate(GateKind::Cx, vec![q, self.secret_register], vec![]);
            }
        }
        for (i, &q) in self.syndrome_registers.iter().enumerate() {
            if masks.z_mask[i] == 1 {
                net.push_gate(GateKind::Cz, vec![q, self.secret_register], vec![]);
            }
        }
        apply_ops_dm(&mut rho, &net, opts.gate_depolarizing)?;

        let (syndrome, correction) = match rng {
            Some(r) => {
                let synd_shifts: Vec<usize> =
                    self.syndrome_registers.iter().map(|&q| n - q).collect();
                let mut weights = vec![0.0f64; 1 << m];
                for i in 0..rho.dim() {
                    let mut s = 0usize;
                    for (j, &sh) in synd_shifts.iter().enumerate() {
                        s |= ((i >> sh) & 1) << (m - 1 - j);
                    }
                    weights[s] += rho.entry(i, i).re;
                }
                match pick_weighted(&weights, r) {
                    Some(s) => {
                        let bits = syndrome_bits(s, m);
                        let letter = masks.letter_for(&bits);
                        (Some(bits), Some(letter))
                    }
                    None => (None, None),
                }
            }
            None => (None, None),
        };
        let state = rho.partial_trace(&[self.secret_register])?;
        Ok(DecodeOutcome { state, syndrome, correction })
    }

    fn decode_qutrit(
        &self,
        joint: &DensityMatrix,
        erased: &[usize],
        opts: &DecodeOptions,
    ) -> Result<DecodeOutcome> {
        let share = self.share_of(erased).ok_or_else(|| {
            QssError::Config(format!(
                "qutrit erasures are whole shares; {erased:?} is not one of {:?}",
                self.shares
            ))
        })?;
        let rec = self
            .recoveries
            .iter()
            .find(|r| r.erased_share == share)
            .ok_or_else(|| {
                QssError::Consistency(format!("no recovery for erased share {share}"))
            })?;
        let mut rho = joint.clone();
        apply_ops_dm(&mut rho, &rec.circuit, opts.gate_depolarizing)?;
        let state = rho.partial_trace(&self.shares[rec.target_share - 1])?;
        Ok(DecodeOutcome { state, syndrome: None, correction: None })
    }

    /// Apply the survivor pair's recovery circuit in place (qutrit scheme).
    /// The circuit touches only the two surviving shares and leaves the
    /// secret on `pair.target_share()`'s qubits.
    pub fn qutrit_recover(&self, state: &mut State, pair: SharePair) -> Result<()> {
        if self.name != Scheme::Qutrit {
            return Err(QssError::Config(format!(
                "share recovery is defined for the qutrit scheme, not {}",
                self.name
            )));
        }
        let rec = self
            .recoveries
            .iter()
            .find(|r| r.erased_share == pair.erased_share())
            .ok_or_else(|| {
                QssError::Consistency(format!(
                    "no recovery for erased share {}",
                    pair.erased_share()
                ))
            })?;
        apply_ops_state(state, &rec.circuit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn qubit_secret() -> SecretSpec {
        SecretSpec::Qubit { theta: 1.1, phi: 2.3 }
    }

    fn qutrit_secret() -> SecretSpec {
        SecretSpec::Qutrit { theta1: 0.8, theta2: 1.9 }
    }

    #[test]
    fn qutrit_logical_zero_support() {
        let code = CodeSpec::load(Scheme::Qutrit).unwrap();
        let sv = code
            .encode_secret(&SecretSpec::Qutrit { theta1: 0.0, theta2: 0.0 })
            .unwrap();
        let w = 1.0 / 3.0f64.sqrt();
        for (i, amp) in sv.amplitudes().iter().enumerate() {
            // Equal weight on |00 00 00>, |01 01 01>, |10 10 10>.
            if i == 0b000000 || i == 0b010101 || i == 0b101010 {
                assert!((amp.re - w).abs() < 1e-12, "index {i}: {amp}");
            } else {
                assert!(amp.norm() < 1e-12, "index {i}: {amp}");
            }
        }
    }

    #[test]
    fn roundtrip_all_schemes_on_sample_erasures() {
        let cases: [(Scheme, SecretSpec, &[usize]); 4] = [
            (Scheme::FiveQubit, qubit_secret(), &[1, 2]),
            (Scheme::Steane, qubit_secret(), &[6, 7]),
            (Scheme::Steane, qubit_secret(), &[5, 6, 7]),
            (Scheme::Qutrit, qutrit_secret(), &[3, 4]),
        ];
        for (scheme, spec, erased) in cases {
            let code = CodeSpec::load(scheme).unwrap();
            let ideal = prepare_secret(&spec).unwrap();
            let shared = code.encode_secret(&spec).unwrap();
            let joint = erase_to_fresh(&State::Pure(shared), erased).unwrap();
            for mode in [DecodeMode::Mcm, DecodeMode::Dcm] {
                if scheme == Scheme::Qutrit && mode == DecodeMode::Dcm {
                    continue;
                }
                let out = code
                    .decode_unrecorded(&joint, erased, mode, &DecodeOptions::default())
                    .unwrap();
                let f = out.state.expectation_pure(&ideal).unwrap();
                assert!(
                    f > 1.0 - 1e-9,
                    "{scheme} erased {erased:?} {mode:?}: fidelity {f}"
                );
            }
        }
    }

    #[test]
    fn mcm_records_known_syndrome_for_single_x_error() {
        // X on qubit 1 of the five-qubit code, decoded with the {1,2} table:
        // deterministic syndrome 1011 and correction Y.
        let code = CodeSpec::load(Scheme::FiveQubit).unwrap();
        let ideal = prepare_secret(&qubit_secret()).unwrap();
        let mut shared = code.encode_secret(&qubit_secret()).unwrap();
        shared
            .apply_gate(&crate::qcore::GateSpec::simple(GateKind::X, vec![1]).unwrap())
            .unwrap();
        let joint = shared.to_density_matrix();
        let table = code.table_for(&[1, 2]).unwrap();
        let opts = DecodeOptions { table: Some(table), ..Default::default() };
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let out = code
            .decode(&joint, &[1, 2], DecodeMode::Mcm, &opts, &mut rng)
            .unwrap();
        assert_eq!(out.syndrome, Some(vec![1, 0, 1, 1]));
        assert_eq!(out.correction, Some(PauliLetter::Y));
        assert!(out.state.expectation_pure(&ideal).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn mcm_and_dcm_agree_without_noise() {
        for (scheme, erased) in [
            (Scheme::FiveQubit, vec![2usize, 4]),
            (Scheme::FiveQubit, vec![3]),
            (Scheme::Steane, vec![2, 5]),
            (Scheme::Steane, vec![5, 6, 7]),
        ] {
            let code = CodeSpec::load(scheme).unwrap();
            let shared = code.encode_secret(&qubit_secret()).unwrap();
            let joint = erase_to_fresh(&State::Pure(shared), &erased).unwrap();
            let opts = DecodeOptions::default();
            let a = code
                .decode_unrecorded(&joint, &erased, DecodeMode::Mcm, &opts)
                .unwrap();
            let b = code
                .decode_unrecorded(&joint, &erased, DecodeMode::Dcm, &opts)
                .unwrap();
            let d = a.state.trace_distance(&b.state).unwrap();
            assert!(d < 1e-12, "{scheme} {erased:?}: trace distance {d}");
        }
    }

    #[test]
    fn noisy_modes_run_and_stay_physical() {
        let code = CodeSpec::load(Scheme::FiveQubit).unwrap();
        let shared = code.encode_secret(&qubit_secret()).unwrap();
        let joint = erase_to_fresh(&State::Pure(shared), &[1, 2]).unwrap();
        let opts = DecodeOptions { gate_depolarizing: 0.05, ..Default::default() };
        for mode in [DecodeMode::Mcm, DecodeMode::Dcm] {
            let out = code.decode_unrecorded(&joint, &[1, 2], mode, &opts).unwrap();
            out.state.validate().unwrap();
            let f = out
                .state
                .expectation_pure(&prepare_secret(&qubit_secret()).unwrap())
                .unwrap();
            assert!((0.25..1.0).contains(&f), "{mode:?}: fidelity {f}");
        }
    }

    #[test]
    fn steane_incomplete_table_under_noise_needs_identity_fallback() {
        let code = CodeSpec::load(Scheme::Steane).unwrap();
        let shared = code.encode_secret(&qubit_secret()).unwrap();
        let joint = erase_to_fresh(&State::Pure(shared), &[6, 7]).unwrap();
        // The {6,7} table covers 16 of 64 syndromes; gate noise during the
        // decoding unitary populates the rest.
        let strict = DecodeOptions { gate_depolarizing: 0.05, ..Default::default() };
        let err = code
            .decode_unrecorded(&joint, &[6, 7], DecodeMode::Mcm, &strict)
            .unwrap_err();
        assert!(matches!(err, QssError::Uncorrectable(_)), "got {err:?}");

        let lenient = DecodeOptions {
            gate_depolarizing: 0.05,
            missing_syndrome_identity: true,
            ..Default::default()
        };
        let out = code
            .decode_unrecorded(&joint, &[6, 7], DecodeMode::Mcm, &lenient)
            .unwrap();
        out.state.validate().unwrap();
    }

    #[test]
    fn uncorrectable_erasures_are_rejected() {
        let code = CodeSpec::load(Scheme::FiveQubit).unwrap();
        let shared = code.encode_secret(&qubit_secret()).unwrap();
        let joint = erase_to_fresh(&State::Pure(shared.clone()), &[1, 2, 3]).unwrap();
        let err = code
            .decode_unrecorded(&joint, &[1, 2, 3], DecodeMode::Mcm, &DecodeOptions::default())
            .unwrap_err();
        assert!(matches!(err, QssError::Uncorrectable(_)), "got {err:?}");

        let qutrit = CodeSpec::load(Scheme::Qutrit).unwrap();
        let shared3 = qutrit.encode_secret(&qutrit_secret()).unwrap();
        let joint3 = erase_to_fresh(&State::Pure(shared3), &[2, 3]).unwrap();
        let err3 = qutrit
            .decode_unrecorded(&joint3, &[2, 3], DecodeMode::Mcm, &DecodeOptions::default())
            .unwrap_err();
        assert!(matches!(err3, QssError::Config(_)), "got {err3:?}");
    }

    #[test]
    fn qutrit_recovery_moves_secret_between_shares() {
        let code = CodeSpec::load(Scheme::Qutrit).unwrap();
        let ideal = prepare_secret(&qutrit_secret()).unwrap();
        for pair in SharePair::ALL {
            let shared = code.encode_secret(&qutrit_secret()).unwrap();
            let mut state = State::Pure(shared);
            code.qutrit_recover(&mut state, pair).unwrap();
            let target = &code.shares[pair.target_share() - 1];
            let marginal = state.to_density_matrix().partial_trace(target).unwrap();
            let f = marginal.expectation_pure(&ideal).unwrap();
            assert!(f > 1.0 - 1e-9, "pair {}: fidelity {f}", pair.label());
        }
    }

    #[test]
    fn erase_to_fresh_bounds() {
        let code = CodeSpec::load(Scheme::FiveQubit).unwrap();
        let shared = State::Pure(code.encode_secret(&qubit_secret()).unwrap());
        assert!(erase_to_fresh(&shared, &[1, 2, 3, 4, 5]).is_err());
        assert!(erase_to_fresh(&shared, &[6]).is_err());
        assert!(erase_to_fresh(&shared, &[]).is_err());
        let dm = erase_to_fresh(&shared, &[4]).unwrap();
        assert!((dm.trace().re - 1.0).abs() < 1e-12);
        // The refreshed qubit is exactly |0>.
        assert!(dm.prob_one(4).unwrap() < 1e-12);
    }

    #[test]
    fn share_pair_parsing_and_structure() {
        assert_eq!("12".parse::<SharePair>().unwrap(), SharePair::P12);
        assert_eq!("2,3".parse::<SharePair>().unwrap(), SharePair::P23);
        assert!("13".parse::<SharePair>().is_err());
        for pair in SharePair::ALL {
            let (a, b) = pair.survivors();
            assert_eq!(pair.target_share(), a);
            assert!(pair.erased_share() != a && pair.erased_share() != b);
            assert_eq!(SharePair::for_erased_share(pair.erased_share()).unwrap(), pair);
        }
    }
}
