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

//! Small dense linear-algebra helpers shared across modules.
//!
//! Matrices cross this boundary as row-major `Vec<Complex64>` slices; the
//! nalgebra types stay internal.

use nalgebra::{Complex, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QssError, Result};

/// Eigendecomposition of a Hermitian matrix given row-major as `dim * dim`
/// complex entries.
///
/// Returns `(eigenvalues, eigenvectors)` sorted by ascending eigenvalue.
/// `eigenvectors[k]` is the normalized eigenvector for `eigenvalues[k]`.
pub fn eigh(matrix: &[Complex64], dim: usize) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    if matrix.len() != dim * dim {
        return Err(QssError::Dimension(format!(
            "eigh: expected {} entries for dim {}, got {}",
            dim * dim,
            dim,
            matrix.len()
        )));
    }
    // Hermiticity guard: eigh silently symmetrizes otherwise-garbage input,
    // so reject anything visibly non-Hermitian.
    for r in 0..dim {
        for c in 0..r {
            let d = matrix[r * dim + c] - matrix[c * dim + r].conj();
            if d.norm() > 1e-8 {
                return Err(QssError::Consistency(format!(
                    "eigh: matrix not Hermitian at ({r},{c}), deviation {:.3e}",
                    d.norm()
                )));
            }
        }
    }
    let m = DMatrix::<Complex<f64>>::from_fn(dim, dim, |r, c| matrix[r * dim + c]);
    let se = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&k| se.eigenvectors.column(k).iter().copied().collect())
        .collect();
    Ok((values, vectors))
}

/// Hermitian square root `B` of a positive semidefinite matrix `A`, so that
/// `B * B = A`. Tiny negative eigenvalues from roundoff are clamped to zero.
pub fn sqrtm_psd(matrix: &[Complex64], dim: usize) -> Result<Vec<Complex64>> {
    let (values, vectors) = eigh(matrix, dim)?;
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (lambda, v) in values.iter().zip(vectors.iter()) {
        let s = lambda.max(0.0).sqrt();
        for r in 0..dim {
            for c in 0..dim {
                out[r * dim + c] += s * v[r] * v[c].conj();
            }
        }
    }
    Ok(out)
}

/// Trace of a square row-major matrix.
pub fn trace(matrix: &[Complex64], dim: usize) -> Complex64 {
    (0..dim).map(|k| matrix[k * dim + k]).sum()
}

/// Row-major product of two `dim * dim` matrices.
pub fn matmul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            let arl = a[r * dim + k];
            if arl.norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..dim {
                out[r * dim + c] += arl * b[k * dim + c];
            }
        }
    }
    out
}

/// Solve the real dense system `A x = b` by LU with partial pivoting.
pub fn solve_real(a: &[f64], b: &[f64], dim: usize) -> Result<Vec<f64>> {
    let m = DMatrix::from_fn(dim, dim, |r, c| a[r * dim + c]);
    let rhs = DVector::from_column_slice(b);
    m.lu()
        .solve(&rhs)
        .map(|x| x.iter().copied().collect())
        .ok_or_else(|| QssError::Consistency("solve_real: singular system".into()))
}
