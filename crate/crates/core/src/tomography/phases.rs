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

//! Phases of a three-mode unitary from its moduli alone.
//!
//! With the first row and column real and nonnegative, orthogonality of
//! column 0 with columns 1 and 2 closes two triangles whose side lengths are
//! products of moduli. The law of cosines fixes each interior angle up to a
//! sign; the sign pair that best restores unitarity is kept, and the overall
//! complex-conjugate ambiguity is fixed by `Im U[1][2] > 0`.

use serde::{Deserialize, Serialize};

use super::decompose::doubly_stochastic_residual;
use crate::error::{Error, Result};
use crate::optics::{ComplexMatrix, C64};

/// Slack allowed on a cosine before the triangle counts as open.
pub const TRIANGLE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseReconstruction {
    pub matrix: ComplexMatrix,
    pub unitarity_residual: f64,
}

impl PhaseReconstruction {
    /// The other solution of the conjugation ambiguity.
    pub fn conjugate_branch(&self) -> ComplexMatrix {
        self.matrix.conj()
    }
}

/// Angles `(α, β)` with `x + y e^{iα} + z e^{−iβ} = 0`.
fn triangle(x: f64, y: f64, z: f64) -> Result<(f64, f64)> {
    let longest = x.max(y).max(z);
    if 2.0 * longest - (x + y + z) > TRIANGLE_TOL * (x + y + z) {
        return Err(Error::TriangleInequality { a: x, b: y, c: z });
    }
    let angle = |num: f64, den: f64| -> Result<f64> {
        if den <= f64::MIN_POSITIVE {
            return Ok(0.0);
        }
        let c = num / den;
        if c.abs() > 1.0 + TRIANGLE_TOL {
            return Err(Error::TriangleInequality { a: x, b: y, c: z });
        }
        Ok(c.clamp(-1.0, 1.0).acos())
    };
    let alpha = angle(z * z - x * x - y * y, 2.0 * x * y)?;
    let beta = angle(y * y - x * x - z * z, 2.0 * x * z)?;
    Ok((alpha, beta))
}

pub fn reconstruct_phases_3mode(u_abs: &ComplexMatrix) -> Result<PhaseReconstruction> {
    if u_abs.rows() != 3 || u_abs.cols() != 3 {
        return Err(Error::InvalidDimension(format!(
            "expected 3x3 moduli, got {}x{}",
            u_abs.rows(),
            u_abs.cols()
        )));
    }
    let ds = doubly_stochastic_residual(u_abs);
    if ds > 1e-6 {
        return Err(Error::OutOfRange(format!(
            "squared moduli are not doubly stochastic (residual {ds:e})"
        )));
    }
    let a = |i: usize, j: usize| u_abs.get(i, j).norm();
    let (al, be) = triangle(a(0, 0) * a(0, 1), a(1, 0) * a(1, 1), a(2, 0) * a(2, 1))?;
    let (ga, de) = triangle(a(0, 0) * a(0, 2), a(1, 0) * a(1, 2), a(2, 0) * a(2, 2))?;
    let mut best: Option<PhaseReconstruction> = None;
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            let mut m = ComplexMatrix::from_fn(3, 3, |i, j| C64::new(a(i, j), 0.0));
            m.set(1, 1, C64::from_polar(a(1, 1), s1 * al));
            m.set(2, 1, C64::from_polar(a(2, 1), -s1 * be));
            m.set(1, 2, C64::from_polar(a(1, 2), s2 * ga));
            m.set(2, 2, C64::from_polar(a(2, 2), -s2 * de));
            if m.get(1, 2).im < 0.0 {
                continue;
            }
            let residual = m.unitarity_residual()?;
            if best
                .as_ref()
                .is_none_or(|b| residual < b.unitarity_residual)
            {
                best = Some(PhaseReconstruction {
                    matrix: m,
                    unitarity_residual: residual,
                });
            }
        }
    }
    best.ok_or_else(|| Error::OutOfRange("no sign choice keeps Im U[1][2] nonnegative".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::fourier_matrix;

    #[test]
    fn fourier_moduli_give_fourier_phases() {
        let f = fourier_matrix(3).unwrap();
        let r = reconstruct_phases_3mode(&f.abs()).unwrap();
        assert!(r.unitarity_residual < 1e-12);
        let target = if f.get(1, 2).im > 0.0 {
            f.clone()
        } else {
            f.conj()
        };
        assert!(r.matrix.max_abs_diff(&target).unwrap() < 1e-12);
        assert!(r.conjugate_branch().unitarity_residual().unwrap() < 1e-12);
    }

    #[test]
    fn real_orthogonal_gives_real_phases() {
        let (c, s) = (0.6f64, 0.8f64);
        let (c2, s2) = (0.28f64, 0.96f64);
        // Rotation about axis 0, then axis 2.
        let r1 = ComplexMatrix::from_real_rows(&[
            vec![c, s, 0.0],
            vec![-s, c, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let r2 = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, c2, s2],
            vec![0.0, -s2, c2],
        ])
        .unwrap();
        let r = r1.matmul(&r2).unwrap().matmul(&r1.transpose()).unwrap();
        let rec = reconstruct_phases_3mode(&r.abs()).unwrap();
        // acos is ill-conditioned at the degenerate triangles of a real matrix.
        assert!(rec.unitarity_residual < 1e-6);
        for z in rec.matrix.entries() {
            assert!(z.im.abs() < 1e-6, "{z}");
        }
    }

    #[test]
    fn open_triangle_is_reported() {
        // Doubly stochastic but not unistochastic.
        let m = ComplexMatrix::from_real_rows(&[
            vec![0.5f64.sqrt(), 0.5f64.sqrt(), 0.0],
            vec![0.5f64.sqrt(), 0.0, 0.5f64.sqrt()],
            vec![0.0, 0.5f64.sqrt(), 0.5f64.sqrt()],
        ])
        .unwrap();
        assert!(matches!(
            reconstruct_phases_3mode(&m),
            Err(Error::TriangleInequality { .. })
        ));
    }
}
