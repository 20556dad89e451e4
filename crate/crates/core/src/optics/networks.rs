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

//! Standard interferometers, lossy composition and fidelities.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, DiagonalLoss, MatrixKind, C64};
use crate::error::{check_probability, Error, Result};

/// Discrete Fourier interferometer, entry `(j, k) = ω^{jk}/√n`.
pub fn fourier_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            "fourier interferometer needs n >= 1".into(),
        ));
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok(ComplexMatrix::from_fn(n, n, |j, k| {
        let phase = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
        C64::from_polar(scale, phase)
    })
    .with_kind(MatrixKind::Unitary))
}

/// Sylvester–Hadamard interferometer scaled by `1/√n`; `n` must be a power of two.
pub fn hadamard_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidDimension(format!(
            "hadamard interferometer needs a power of two, got {n}"
        )));
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok(ComplexMatrix::from_fn(n, n, |j, k| {
        let sign = if (j & k).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        C64::new(sign * scale, 0.0)
    })
    .with_kind(MatrixKind::Unitary))
}

/// Two-mode beam splitter `[[√R, √(1−R)], [√(1−R), −√R]]`.
///
/// The real gauge with a sign on the second output is a convention; only the
/// moduli are ever compared against measured data.
pub fn beam_splitter(reflectivity: f64) -> Result<ComplexMatrix> {
    check_probability("reflectivity", reflectivity)?;
    let r = reflectivity.sqrt();
    let t = (1.0 - reflectivity).sqrt();
    Ok(ComplexMatrix::from_real_rows(&[vec![r, t], vec![t, -r]])?.with_kind(MatrixKind::Unitary))
}

/// `D_in · U · D_out`.
pub fn compose_lossy(
    d_in: &DiagonalLoss,
    u: &ComplexMatrix,
    d_out: &DiagonalLoss,
) -> Result<ComplexMatrix> {
    if d_in.len() != u.rows() || d_out.len() != u.cols() {
        return Err(Error::DimensionMismatch(format!(
            "losses {}/{} around a {}x{} matrix",
            d_in.len(),
            d_out.len(),
            u.rows(),
            u.cols()
        )));
    }
    let a = d_in.amplitudes();
    let b = d_out.amplitudes();
    let out = ComplexMatrix::from_fn(u.rows(), u.cols(), |i, j| u.get(i, j) * (a[i] * b[j]));
    let kind = u.kind();
    if kind == MatrixKind::Unitary || kind == MatrixKind::SubUnitary {
        Ok(out.with_kind(MatrixKind::SubUnitary))
    } else {
        Ok(out)
    }
}

/// Normalized trace overlap `(1/n)·tr(a† b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFidelity {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

pub fn trace_fidelity(a: &ComplexMatrix, b: &ComplexMatrix, n: usize) -> Result<TraceFidelity> {
    let dim = a.require_square()?;
    if b.rows() != dim || b.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "{dim}x{dim} vs {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    if n != dim {
        return Err(Error::DimensionMismatch(format!(
            "normalization {n} for dimension {dim}"
        )));
    }
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..dim {
        for k in 0..dim {
            tr += a.get(k, i).conj() * b.get(k, i);
        }
    }
    let f = tr / n as f64;
    Ok(TraceFidelity {
        re: f.re,
        im: f.im,
        modulus: f.norm(),
    })
}

/// Haar-random unitary: Gram–Schmidt on a complex Gaussian matrix with the
/// phase of each diagonal entry of `R` absorbed, so the distribution is exact.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("haar unitary needs n >= 1".into()));
    }
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    C64::new(re, im)
                })
                .collect()
        })
        .collect();
    for j in 0..n {
        for k in 0..j {
            let proj: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            let (done, rest) = cols.split_at_mut(j);
            for (x, v) in rest[0].iter_mut().zip(&done[k]) {
                *x -= proj * v;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::NonFinite("degenerate gaussian sample".into()));
        }
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    // Gram–Schmidt already yields a positive real diagonal in R, which is the
    // sign-fixed QR factorization.
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]).into_unitary()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_fourier_cases() {
        let f1 = fourier_matrix(1).unwrap();
        assert!((f1.get(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        let f2 = fourier_matrix(2).unwrap();
        let h2 = hadamard_matrix(2).unwrap();
        assert!(f2.max_abs_diff(&h2).unwrap() < 1e-15);
        assert!(fourier_matrix(0).is_err());
    }

    #[test]
    fn fourier3_moduli() {
        let f = fourier_matrix(3).unwrap();
        for z in f.entries() {
            assert!((z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn hadamard_rejects_non_powers() {
        assert!(hadamard_matrix(3).is_err());
        let h = hadamard_matrix(4).unwrap();
        assert!(h.entries().iter().all(|z| (z.norm() - 0.5).abs() < 1e-15));
    }

    #[test]
    fn beam_splitter_limits() {
        let b = beam_splitter(1.0).unwrap();
        assert_eq!(b.get(0, 0), C64::new(1.0, 0.0));
        assert_eq!(b.get(1, 1), C64::new(-1.0, 0.0));
        assert!(beam_splitter(1.5).is_err());
        let r1 = beam_splitter(0.497).unwrap();
        assert!((r1.get(0, 0).norm() - 0.7049).abs() < 1e-3);
        assert!((r1.get(0, 1).norm() - 0.7093).abs() < 1e-3);
    }

    #[test]
    fn compose_with_zero_amplitude() {
        let f = fourier_matrix(3).unwrap();
        let d_in = DiagonalLoss::new(vec![1.0, 0.0, 1.0]).unwrap();
        let t = compose_lossy(&d_in, &f, &DiagonalLoss::lossless(3)).unwrap();
        assert!((0..3).all(|j| t.get(1, j).norm() == 0.0));
        assert_eq!(t.kind(), MatrixKind::SubUnitary);
        let same =
            compose_lossy(&DiagonalLoss::lossless(3), &f, &DiagonalLoss::lossless(3)).unwrap();
        assert!(same.max_abs_diff(&f).unwrap() == 0.0);
    }

    #[test]
    fn fidelity_of_matrix_with_itself() {
        let f = fourier_matrix(5).unwrap();
        let tf = trace_fidelity(&f, &f, 5).unwrap();
        assert!((tf.re - 1.0).abs() < 1e-14 && tf.im.abs() < 1e-14);
        assert!(trace_fidelity(&f, &f, 4).is_err());
    }

    #[test]
    fn haar_sample_is_unitary_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(4, &mut a).unwrap();
        assert_eq!(u, haar_unitary(4, &mut b).unwrap());
        assert!(u.unitarity_residual().unwrap() < 1e-12);
    }
}
