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

//! Three-mode block followed by a splitter on modes 3 and 4.
//!
//! The block is read off the first three rows: its first two columns are the
//! measured columns, its third column collects the weight that the splitter
//! spreads over outputs 3 and 4. Each column is renormalized and the squared
//! block is rescaled to doubly stochastic form, which drops the small leakage
//! from input 4 into outputs 1 and 2. The splitter angle then has a closed
//! least-squares solution over the last two columns.

use serde::{Deserialize, Serialize};

use super::decompose::sinkhorn;
use crate::error::{Error, Result};
use crate::optics::{ComplexMatrix, C64};

/// Reflectivities this close to 0 or 1 mean the splitter was not identified.
pub const DEGENERATE_REFLECTIVITY: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcatenatedFit {
    pub reflectivity: f64,
    /// Renormalized three-mode block moduli.
    pub block: ComplexMatrix,
    pub model_abs: ComplexMatrix,
    /// `(1/4) tr(|U_exp|ᵀ |U_model|)`.
    pub fidelity: f64,
    pub degenerate: bool,
}

/// Moduli of `(B ⊕ 1)` followed by a splitter of reflectivity `R` on modes 3, 4.
pub fn concatenated_model(block: &ComplexMatrix, reflectivity: f64) -> ComplexMatrix {
    let (r, t) = (reflectivity.sqrt(), (1.0 - reflectivity).sqrt());
    ComplexMatrix::from_fn(4, 4, |i, j| {
        let v = match (i, j) {
            (3, 0) | (3, 1) => 0.0,
            (3, 2) => t,
            (3, 3) => r,
            (_, 0) | (_, 1) => block.get(i, j).norm(),
            (_, 2) => block.get(i, 2).norm() * r,
            _ => block.get(i, 2).norm() * t,
        };
        C64::new(v, 0.0)
    })
}

pub fn fit_concatenated_model(u_abs: &ComplexMatrix) -> Result<ConcatenatedFit> {
    if u_abs.rows() != 4 || u_abs.cols() != 4 {
        return Err(Error::InvalidDimension(format!(
            "expected 4x4 moduli, got {}x{}",
            u_abs.rows(),
            u_abs.cols()
        )));
    }
    let a = |i: usize, j: usize| u_abs.get(i, j).norm();
    let mut cols: Vec<Vec<f64>> = vec![
        (0..3).map(|i| a(i, 0)).collect(),
        (0..3).map(|i| a(i, 1)).collect(),
        (0..3)
            .map(|i| (a(i, 2).powi(2) + a(i, 3).powi(2)).sqrt())
            .collect(),
    ];
    for col in &mut cols {
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroDenominator("an empty block column"));
        }
        col.iter_mut().for_each(|x| *x /= norm);
    }
    let sq: Vec<Vec<f64>> = (0..3)
        .map(|i| (0..3).map(|j| cols[j][i].powi(2)).collect())
        .collect();
    let (r, c, _, _) = sinkhorn(&sq)?;
    let block = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((r[i] * sq[i][j] * c[j]).sqrt(), 0.0));

    let mut along_r = a(3, 3);
    let mut along_t = a(3, 2);
    for i in 0..3 {
        let ci = block.get(i, 2).re;
        along_r += ci * a(i, 2);
        along_t += ci * a(i, 3);
    }
    let theta = along_t.atan2(along_r);
    let reflectivity = theta.cos().powi(2);
    let model_abs = concatenated_model(&block, reflectivity);
    let fidelity = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| a(i, j) * model_abs.get(i, j).re)
        .sum::<f64>()
        / 4.0;
    let degenerate =
        !(DEGENERATE_REFLECTIVITY..=1.0 - DEGENERATE_REFLECTIVITY).contains(&reflectivity);
    Ok(ConcatenatedFit {
        reflectivity,
        block,
        model_abs,
        fidelity,
        degenerate,
    })
}

/// `R = |u₁₁|²` of a two-mode block.
pub fn extract_reflectivity(u_abs: &ComplexMatrix) -> Result<f64> {
    if u_abs.rows() != 2 || u_abs.cols() != 2 {
        return Err(Error::InvalidDimension(format!(
            "expected a 2x2 block, got {}x{}",
            u_abs.rows(),
            u_abs.cols()
        )));
    }
    Ok(u_abs.get(0, 0).norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{beam_splitter, direct_sum_and_chain, fourier_matrix, Placement};

    #[test]
    fn synthetic_model_round_trip() {
        let u = direct_sum_and_chain(
            4,
            &[
                vec![Placement::new(fourier_matrix(3).unwrap(), 0)],
                vec![Placement::new(beam_splitter(0.6).unwrap(), 2)],
            ],
        )
        .unwrap();
        let fit = fit_concatenated_model(&u.abs()).unwrap();
        assert!((fit.reflectivity - 0.6).abs() < 1e-12);
        assert!((fit.fidelity - 1.0).abs() < 1e-12);
        assert!(!fit.degenerate);
    }

    #[test]
    fn identity_is_degenerate() {
        let fit = fit_concatenated_model(&ComplexMatrix::identity(4)).unwrap();
        assert!(fit.degenerate);
        assert!((fit.reflectivity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflectivity_of_simple_blocks() {
        assert!(
            (extract_reflectivity(&beam_splitter(0.5).unwrap().abs()).unwrap() - 0.5).abs() < 1e-15
        );
        assert_eq!(
            extract_reflectivity(&ComplexMatrix::identity(2)).unwrap(),
            1.0
        );
        assert!(extract_reflectivity(&ComplexMatrix::identity(3)).is_err());
    }
}
