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

//! Completely positive trace-preserving channels in Kraus form, standard
//! noise models, and extraction of the end-to-end secret-in/secret-out
//! channel of an encode, erase, decode pipeline.

mod pipeline;

pub use pipeline::{pipeline_channel, PipelineOptions};

use num_complex::Complex64;

use crate::error::{QssError, Result};
use crate::linalg;
use crate::qcore::DensityMatrix;

/// Trace-preservation tolerance for `sum K^dag K = I`.
pub const TRACE_PRESERVATION_TOLERANCE: f64 = 1e-10;
/// Smallest Choi eigenvalue tolerated before the matrix counts as non-CP.
pub const CHOI_POSITIVITY_TOLERANCE: f64 = 1e-9;

/// A channel `rho -> sum_k K_k rho K_k^dag` between spaces of dimension
/// `dim_in` and `dim_out`, held as its Kraus operators.
#[derive(Debug, Clone)]
pub struct Channel {
    dim_in: usize,
    dim_out: usize,
    /// Row-major `dim_out x dim_in` matrices.
    kraus: Vec<Vec<Complex64>>,
}

impl Channel {
    /// Build a channel from Kraus operators, checking trace preservation
    /// (`sum K^dag K = I` within 1e-10 entrywise).
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<Vec<Complex64>>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(QssError::Dimension("channel dimensions must be >= 1".into()));
        }
        if kraus.is_empty() {
            return Err(QssError::Dimension("channel needs at least one Kraus operator".into()));
        }
        for (k, op) in kraus.iter().enumerate() {
            if op.len() != dim_out * dim_in {
                return Err(QssError::Dimension(format!(
                    "Kraus operator {k} has {} entries, expected {} x {}",
                    op.len(),
                    dim_out,
                    dim_in
                )));
            }
        }
        // sum K^dag K computed entrywise: (sum)_ab = sum_k sum_m conj(K[m,a]) K[m,b].
        for a in 0..dim_in {
            for b in 0..dim_in {
                let mut acc = Complex64::new(0.0, 0.0);
                for op in &kraus {
                    for m in 0..dim_out {
                        acc += op[m * dim_in + a].conj() * op[m * dim_in + b];
                    }
                }
                let want = if a == b { 1.0 } else { 0.0 };
                if (acc - want).norm() > TRACE_PRESERVATION_TOLERANCE {
                    return Err(QssError::Consistency(format!(
                        "channel is not trace preserving: (K^dag K)[{a},{b}] deviates by {:.3e}",
                        (acc - want).norm()
                    )));
                }
            }
        }
        Ok(Channel { dim_in, dim_out, kraus })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// The Kraus operators, each row-major `dim_out x dim_in`.
    pub fn kraus_ops(&self) -> &[Vec<Complex64>] {
        &self.kraus
    }

    /// The identity channel on a `dim`-dimensional space.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut k = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            k[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Channel::new(dim, dim, vec![k])
    }

    /// Apply the channel to `rho` on this input matrix/operator directly
    /// (dimensions must match `dim_in`; output has `dim_out`).
    pub fn apply_dense(&self, rho: &[Complex64]) -> Result<Vec<Complex64>> {
        if rho.len() != self.dim_in * self.dim_in {
            return Err(QssError::Dimension(format!(
                "channel input has {} entries, expected {}^2",
                rho.len(),
                self.dim_in
            )));
        }
        let (din, dout) = (self.dim_in, self.dim_out);
        let mut out = vec![Complex64::new(0.0, 0.0); dout * dout];
        for op in &self.kraus {
            // K rho K^dag accumulated entrywise.
            for m in 0..dout {
                for l in 0..dout {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..din {
                        let kma = op[m * din + a];
                        if kma.norm_sqr() == 0.0 {
                            continue;
                        }
                        for b in 0..din {
                            acc += kma * rho[a * din + b] * op[l * din + b].conj();
                        }
                    }
                    out[m * dout + l] += acc;
                }
            }
        }
        Ok(out)
    }

    /// The Choi matrix `sum_ij E_ij (x) N(E_ij)` with the reference index
    /// first: row index `i * dim_out + m`, column `j * dim_out + l`.
    pub fn choi_matrix(&self) -> Vec<Complex64> {
        let (din, dout) = (self.dim_in, self.dim_out);
        let dim = din * dout;
        let mut choi = vec![Complex64::new(0.0, 0.0); dim * dim];
        for op in &self.kraus {
            // Choi = sum_k v_k v_k^dag with v_k[(i,m)] = K_k[m,i].
            for i in 0..din {
                for m in 0..dout {
                    let vi = op[m * din + i];
                    if vi.norm_sqr() == 0.0 {
                        continue;
                    }
                    for j in 0..din {
                        for l in 0..dout {
                            choi[(i * dout + m) * dim + (j * dout + l)] +=
                                vi * op[l * din + j].conj();
                        }
                    }
                }
            }
        }
        choi
    }

    /// Rebuild a channel from its Choi matrix (reference index first).
    /// Fails if the Choi matrix is not completely positive within tolerance.
    pub fn from_choi(dim_in: usize, dim_out: usize, choi: &[Complex64]) -> Result<Self> {
        let dim = dim_in * dim_out;
        if choi.len() != dim * dim {
            return Err(QssError::Dimension(format!(
                "Choi matrix has {} entries, expected {}^2",
                choi.len(),
                dim
            )));
        }
        // Hermitize before decomposing; the construction is Hermitian up to
        // rounding and eigh rejects visible asymmetry.
        let mut herm = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                herm[r * dim + c] = 0.5 * (choi[r * dim + c] + choi[c * dim + r].conj());
            }
        }
        let (values, vectors) = linalg::eigh(&herm, dim)?;
        if let Some(min) = values.first() {
            if *min < -CHOI_POSITIVITY_TOLERANCE {
                return Err(QssError::Consistency(format!(
                    "Choi matrix is not completely positive: eigenvalue {min:.3e}"
                )));
            }
        }
        let mut kraus = Vec::new();
        for (lambda, v) in values.iter().zip(vectors.iter()) {
            if *lambda <= 1e-12 {
                continue;
            }
            let s = lambda.sqrt();
            let mut op = vec![Complex64::new(0.0, 0.0); dim_out * dim_in];
            for i in 0..dim_in {
                for m in 0..dim_out {
                    op[m * dim_in + i] = s * v[i * dim_out + m];
                }
            }
            kraus.push(op);
        }
        Channel::new(dim_in, dim_out, kraus)
    }

    /// Apply the channel to the listed qubits of a register state. The
    /// channel must be square with dimension `2^targets.len()`.
    pub fn apply(&self, rho: &DensityMatrix, targets: &[usize]) -> Result<DensityMatrix> {
        let k = targets.len();
        if self.dim_in != self.dim_out || self.dim_in != 1 << k {
            return Err(QssError::Dimension(format!(
                "channel of dimension {}x{} cannot act on {k} qubit(s)",
                self.dim_out, self.dim_in
            )));
        }
        let n = rho.n_qubits();
        let mut seen = vec![false; n + 1];
        for &q in targets {
            if q == 0 || q > n || seen[q] {
                return Err(QssError::Dimension(format!(
                    "channel target {q} out of range or repeated on {n} qubits"
                )));
            }
            seen[q] = true;
        }
        let dim = 1usize << n;
        let d = self.dim_in;
        let shifts: Vec<usize> = targets.iter().map(|&q| n - q).collect();
        let sub_of = |full: usize| -> usize {
            let mut s = 0usize;
            for (pos, &sh) in shifts.iter().enumerate() {
                s |= ((full >> sh) & 1) << (k - 1 - pos);
            }
            s
        };
        let with_sub = |full: usize, sub: usize| -> usize {
            let mut f = full;
            for (pos, &sh) in shifts.iter().enumerate() {
                f = (f & !(1 << sh)) | (((sub >> (k - 1 - pos)) & 1) << sh);
            }
            f
        };
        let entries = rho.entries();
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for op in &self.kraus {
            for row in 0..dim {
                let rs = sub_of(row);
                for col in 0..dim {
                    let cs = sub_of(col);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..d {
                        let kra = op[rs * d + a];
                        if kra.norm_sqr() == 0.0 {
                            continue;
                        }
                        let row_a = with_sub(row, a);
                        for b in 0..d {
                            let kcb = op[cs * d + b];
                            if kcb.norm_sqr() == 0.0 {
                                continue;
                            }
                            acc += kra * entries[row_a * dim + with_sub(col, b)] * kcb.conj();
                        }
                    }
                    out[row * dim + col] += acc;
                }
            }
        }
        DensityMatrix::from_entries(n, out)
    }
}

/// Single-qubit erasure to a fresh `|0>`: Kraus operators `|0><0|` and
/// `|0><1|`, so every input collapses to `|0><0|`.
pub fn erasure_channel() -> Channel {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    Channel::new(2, 2, vec![vec![one, zero, zero, zero], vec![zero, one, zero, zero]])
        .expect("erasure channel is trace preserving by construction")
}

/// Single-qubit depolarizing channel `rho -> (1-p) rho + p I/2` in Kraus
/// form: `sqrt(1-3p/4) I` plus `sqrt(p/4) {X, Y, Z}`.
pub fn depolarizing(p: f64) -> Result<Channel> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(QssError::Config(format!(
            "depolarizing strength {p} outside [0, 1]"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let c = |x: f64| Complex64::new(x, 0.0);
    let s0 = (1.0 - 3.0 * p / 4.0).sqrt();
    let s1 = (p / 4.0).sqrt();
    let mut kraus = vec![vec![c(s0), zero, zero, c(s0)]];
    if s1 > 0.0 {
        kraus.push(vec![zero, c(s1), c(s1), zero]);
        kraus.push(vec![zero, Complex64::new(0.0, -s1), Complex64::new(0.0, s1), zero]);
        kraus.push(vec![c(s1), zero, zero, c(-s1)]);
    }
    Channel::new(2, 2, kraus)
}

/// Apply `channel` to the listed qubits of `rho`.
pub fn apply_channel(
    rho: &DensityMatrix,
    channel: &Channel,
    targets: &[usize],
) -> Result<DensityMatrix> {
    channel.apply(rho, targets)
}
