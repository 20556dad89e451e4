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

//! Dense complex matrices with the rows-are-inputs convention.
//!
//! Entry `(i, j)` is the amplitude for a photon entering input mode `i` to
//! leave through output mode `j`. Composition in application order is
//! therefore a plain left-to-right product: applying `a` and then `b` is
//! `a.matmul(&b)`.

use std::fmt;
use std::ops::Index;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance used when a matrix is labeled unitary or sub-unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// What a matrix is known to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    General,
    /// `‖U†U − I‖_max ≤ 1e-10`.
    Unitary,
    /// Largest singular value at most `1 + 1e-10`.
    SubUnitary,
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
    kind: MatrixKind,
}

/// Transfer matrices are complex matrices that may be lossy.
pub type TransferMatrix = ComplexMatrix;

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entries".into()));
        }
        Ok(Self {
            rows,
            cols,
            data,
            kind: MatrixKind::General,
        })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            data,
            kind: MatrixKind::General,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::from_fn(n, n, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
        m.kind = MatrixKind::Unitary;
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            C64::new(if i == j { values[i] } else { 0.0 }, 0.0)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[i * self.cols + j] = value;
        self.kind = MatrixKind::General;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> ComplexMatrix {
        let mut m = Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj());
        m.kind = self.kind;
        m
    }

    /// Entrywise modulus as a real-valued complex matrix.
    pub fn abs(&self) -> ComplexMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| {
            C64::new(self.get(i, j).norm(), 0.0)
        })
    }

    pub fn abs_values(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).collect())
            .collect()
    }

    pub fn scale(&self, factor: f64) -> ComplexMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * factor)
    }

    pub fn trace(&self) -> Result<C64> {
        let n = self.require_square()?;
        Ok((0..n).map(|i| self.get(i, i)).sum())
    }

    /// Submatrix made of the given rows and columns; indices may repeat.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ComplexMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_residual(&self) -> Result<f64> {
        let n = self.require_square()?;
        let gram = self.adjoint().matmul(self)?;
        Ok(gram.max_abs_diff(&Self::identity(n)).expect("same shape"))
    }

    pub(crate) fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn max_singular_value(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.to_dmatrix().singular_values().max()
    }

    /// Labels the matrix unitary after checking the residual.
    pub fn into_unitary(mut self) -> Result<Self> {
        let residual = self.unitarity_residual()?;
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary {
                what: "unitarity",
                residual,
            });
        }
        self.kind = MatrixKind::Unitary;
        Ok(self)
    }

    /// Labels the matrix sub-unitary after checking that no singular value
    /// exceeds one by more than the tolerance.
    pub fn into_sub_unitary(mut self) -> Result<Self> {
        let excess = self.max_singular_value() - 1.0;
        if excess > UNITARY_TOL {
            return Err(Error::NotUnitary {
                what: "sub-unitarity",
                residual: excess,
            });
        }
        if self.kind != MatrixKind::Unitary {
            self.kind = MatrixKind::SubUnitary;
        }
        Ok(self)
    }

    pub(crate) fn with_kind(mut self, kind: MatrixKind) -> Self {
        self.kind = kind;
        self
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A square root `L` with `L L† = H` of a Hermitian positive semidefinite
/// matrix, from its eigendecomposition. Eigenvalues in `[-tol, 0)` are
/// treated as zero; anything lower returns `None`.
pub fn psd_sqrt(h: &ComplexMatrix, tol: f64) -> Option<ComplexMatrix> {
    let n = h.rows;
    let eig = h.to_dmatrix().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l < -tol) {
        return None;
    }
    let v = eig.eigenvectors;
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    Some(ComplexMatrix::from_fn(n, n, |i, j| v[(i, j)] * roots[j]))
}

/// Per-mode amplitude transmissions, each in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalLoss {
    amplitudes: Vec<f64>,
}

impl DiagonalLoss {
    pub fn new(amplitudes: Vec<f64>) -> Result<Self> {
        for (k, &a) in amplitudes.iter().enumerate() {
            if !a.is_finite() || !(0.0..=1.0).contains(&a) {
                return Err(Error::OutOfRange(format!("loss amplitude {k} = {a}")));
            }
        }
        Ok(Self { amplitudes })
    }

    pub fn lossless(n: usize) -> Self {
        Self {
            amplitudes: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Power transmissions `|d_k|²`.
    pub fn transmissions(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::diagonal(&self.amplitudes).with_kind(MatrixKind::SubUnitary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_unitary() {
        assert_eq!(
            ComplexMatrix::identity(4).unitarity_residual().unwrap(),
            0.0
        );
    }

    #[test]
    fn rejects_nan_entries() {
        let err = ComplexMatrix::from_vec(1, 1, vec![C64::new(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
    }

    #[test]
    fn singular_value_of_scaled_identity() {
        let m = ComplexMatrix::identity(3).scale(0.5);
        assert!((m.max_singular_value() - 0.5).abs() < 1e-12);
        assert!(m.into_sub_unitary().is_ok());
    }

    #[test]
    fn over_unit_gain_is_not_sub_unitary() {
        let m = ComplexMatrix::identity(2).scale(1.01);
        assert!(matches!(
            m.into_sub_unitary(),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn square_root_of_semidefinite_input() {
        // rank-one projector onto (1, 1)/sqrt(2)
        let h = ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let l = psd_sqrt(&h, 1e-14).unwrap();
        let back = l.matmul(&l.adjoint()).unwrap();
        assert!(back.max_abs_diff(&h).unwrap() < 1e-15);
        let neg = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1e-3]]).unwrap();
        assert!(psd_sqrt(&neg, 1e-10).is_none());
    }

    #[test]
    fn nearly_degenerate_singular_values() {
        let m = ComplexMatrix::diagonal(&[1.0000367, 1.0000127, 0.99994]);
        assert!((m.max_singular_value() - 1.0000367).abs() < 1e-14);
    }

    #[test]
    fn loss_amplitudes_are_validated() {
        assert!(DiagonalLoss::new(vec![0.5, 1.2]).is_err());
        assert!(DiagonalLoss::new(vec![0.0, 1.0]).is_ok());
    }
}
