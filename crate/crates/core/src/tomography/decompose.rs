// Copyright 2026 The photon-distill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `T = D_in · |U| · D_out` by iterative proportional scaling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{ComplexMatrix, DiagonalLoss, TransferMatrix, C64};

pub const SINKHORN_TOL: f64 = 1e-12;
pub const SINKHORN_MAX_ITER: usize = 10_000;

/// Fixes the scalar left undetermined by the decomposition: `D_in → κ D_in`
/// and `D_out → D_out / κ` leave `T` unchanged for any `κ > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LossGauge {
    /// Equal geometric means of the input and output amplitudes, moved
    /// just far enough to keep every amplitude at most one.
    Balanced,
    /// Input `mode` carries the given amplitude.
    InputAnchor { mode: usize, amplitude: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossDecomposition {
    pub d_in: DiagonalLoss,
    pub u_abs: ComplexMatrix,
    pub d_out: DiagonalLoss,
    pub iterations: usize,
    pub residual: f64,
}

/// Row and column sums of `|a|²` as deviations from one.
pub fn doubly_stochastic_residual(a: &ComplexMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.rows() {
        let s: f64 = (0..a.cols()).map(|j| a.get(i, j).norm_sqr()).sum();
        worst = worst.max((s - 1.0).abs());
    }
    for j in 0..a.cols() {
        let s: f64 = (0..a.rows()).map(|i| a.get(i, j).norm_sqr()).sum();
        worst = worst.max((s - 1.0).abs());
    }
    worst
}

/// Scales a nonnegative square matrix to doubly stochastic form,
/// returning `(r, c)` with `diag(r) · a · diag(c)` doubly stochastic.
pub fn sinkhorn(a: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>, usize, f64)> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.first().map_or(0, Vec::len),
        });
    }
    for i in 0..n {
        if a[i].iter().all(|&x| x <= 0.0) {
            return Err(Error::ZeroDenominator("an input row without detections"));
        }
        if a.iter().all(|r| r[i] <= 0.0) {
            return Err(Error::ZeroDenominator(
                "an output column without detections",
            ));
        }
    }
    let mut r = vec![1.0; n];
    let mut c = vec![1.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=SINKHORN_MAX_ITER {
        for i in 0..n {
            r[i] = 1.0 / (0..n).map(|j| a[i][j] * c[j]).sum::<f64>();
        }
        for j in 0..n {
            c[j] = 1.0 / (0..n).map(|i| a[i][j] * r[i]).sum::<f64>();
        }
        // Columns are exact after the second half-step; rows carry the error.
        residual = (0..n)
            .map(|i| ((0..n).map(|j| r[i] * a[i][j] * c[j]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max);
        if residual <= SINKHORN_TOL {
            return Ok((r, c, it, residual));
        }
    }
    Err(Error::NonConvergence {
        iterations: SINKHORN_MAX_ITER,
        residual,
    })
}

pub fn decompose_losses(t: &TransferMatrix, gauge: LossGauge) -> Result<LossDecomposition> {
    let n = t.require_square()?;
    let sq: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| t.get(i, j).norm_sqr()).collect())
        .collect();
    let (r, c, iterations, residual) = sinkhorn(&sq)?;
    let u_abs = ComplexMatrix::from_fn(n, n, |i, j| C64::new((r[i] * sq[i][j] * c[j]).sqrt(), 0.0));
    let mut d_in: Vec<f64> = r.iter().map(|x| (1.0 / x).sqrt()).collect();
    let mut d_out: Vec<f64> = c.iter().map(|x| (1.0 / x).sqrt()).collect();
    let kappa = match gauge {
        LossGauge::Balanced => {
            let gin: f64 = d_in.iter().map(|x| x.ln()).sum::<f64>() / n as f64;
            let gout: f64 = d_out.iter().map(|x| x.ln()).sum::<f64>() / n as f64;
            let max_in = d_in.iter().cloned().fold(0.0, f64::max);
            let max_out = d_out.iter().cloned().fold(0.0, f64::max);
            let k = ((gout - gin) / 2.0).exp();
            if max_in * max_out <= 1.0 {
                k.clamp(max_out, 1.0 / max_in)
            } else {
                k
            }
        }
        LossGauge::InputAnchor { mode, amplitude } => {
            if mode >= n || !(amplitude > 0.0 && amplitude <= 1.0) {
                return Err(Error::OutOfRange(format!(
                    "anchor amplitude {amplitude} on mode {mode} of {n}"
                )));
            }
            amplitude / d_in[mode]
        }
    };
    d_in.iter_mut().for_each(|x| *x *= kappa);
    d_out.iter_mut().for_each(|x| *x /= kappa);
    Ok(LossDecomposition {
        d_in: DiagonalLoss::new(d_in)?,
        u_abs,
        d_out: DiagonalLoss::new(d_out)?,
        iterations,
        residual,
    })
}
