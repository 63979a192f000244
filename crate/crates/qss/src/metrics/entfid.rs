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

//! Entanglement fidelity: the overlap of `(id (x) N)(|Phi+_d>)` with the
//! maximally entangled state `|Phi+_d> = (1/sqrt d) sum_i |ii>`, equal to
//! `sum_k |tr K_k|^2 / d^2` in Kraus form. A `d = 3` channel lives embedded
//! in a qubit pair (levels 0..2 of dimension 4), and its trace runs over the
//! embedded levels only.

use num_complex::Complex64;

use crate::channels::Channel;
use crate::error::{QssError, Result};
use crate::qcore::{DensityMatrix, StateVector};

/// The embedded basis levels a local dimension `d` occupies inside the
/// channel's carrier space of dimension `dim`.
fn levels_for(d: usize, dim: usize) -> Result<Vec<usize>> {
    if d == dim {
        Ok((0..d).collect())
    } else if d == 3 && dim == 4 {
        // Qutrit embedded in a qubit pair; level 3 (|11>) is unused.
        Ok(vec![0, 1, 2])
    } else {
        Err(QssError::Dimension(format!(
            "local dimension {d} does not fit a channel of dimension {dim}"
        )))
    }
}

/// `F_e = sum_k |tr K_k|^2 / d^2`, with the trace over the `d` embedded
/// levels of the channel's carrier space.
pub fn entanglement_fidelity(channel: &Channel, d: usize) -> Result<f64> {
    if channel.dim_in() != channel.dim_out() {
        return Err(QssError::Dimension(
            "entanglement fidelity needs a square channel".into(),
        ));
    }
    let dim = channel.dim_in();
    let levels = levels_for(d, dim)?;
    let mut f = 0.0;
    for op in channel.kraus_ops() {
        let tr: Complex64 = levels.iter().map(|&i| op[i * dim + i]).sum();
        f += tr.norm_sqr();
    }
    Ok(f / (d * d) as f64)
}

/// `|Phi+_d> = (1/sqrt d) sum_i |ii>` on a reference register and a system
/// register of equal width. `d = 3` embeds each side in a qubit pair; the
/// unused |11> levels provably carry zero amplitude.
pub fn maximally_entangled_state(d: usize) -> Result<StateVector> {
    let side_qubits = match d {
        2 => 1usize,
        3 | 4 => 2,
        _ => {
            return Err(QssError::Dimension(format!(
                "no qubit embedding defined for local dimension {d}"
            )))
        }
    };
    let side_dim = 1usize << side_qubits;
    let dim = side_dim * side_dim;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let w = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        amps[i * side_dim + i] = Complex64::new(w, 0.0);
    }
    if d == 3 {
        // The embedding promise: no population on either side's |11> level.
        let leak: f64 = (0..dim)
            .filter(|idx| idx / side_dim == 3 || idx % side_dim == 3)
            .map(|idx| amps[idx].norm_sqr())
            .sum();
        assert!(leak == 0.0, "embedded |11> levels must stay empty");
    }
    StateVector::from_amplitudes(2 * side_qubits, amps)
}

/// The Choi state `(id (x) N)(|Phi+_d><Phi+_d|)` as a density matrix on the
/// reference and output registers (reference qubits first). This is the
/// state an experiment would tomograph to estimate `F_e`.
pub fn choi_state(channel: &Channel, d: usize) -> Result<DensityMatrix> {
    if channel.dim_in() != channel.dim_out() {
        return Err(QssError::Dimension("Choi state needs a square channel".into()));
    }
    let dim = channel.dim_in();
    let levels = levels_for(d, dim)?;
    if !dim.is_power_of_two() {
        return Err(QssError::Dimension(format!(
            "channel dimension {dim} is not a qubit register"
        )));
    }
    let side_qubits = dim.trailing_zeros() as usize;
    let full = dim * dim;
    let mut entries = vec![Complex64::new(0.0, 0.0); full * full];
    let weight = 1.0 / d as f64;
    for &i in &levels {
        for &j in &levels {
            let mut unit = vec![Complex64::new(0.0, 0.0); dim * dim];
            unit[i * dim + j] = Complex64::new(1.0, 0.0);
            let image = channel.apply_dense(&unit)?;
            for m in 0..dim {
                for l in 0..dim {
                    entries[(i * dim + m) * full + (j * dim + l)] +=
                        weight * image[m * dim + l];
                }
            }
        }
    }
    DensityMatrix::from_entries(2 * side_qubits, entries)
}
