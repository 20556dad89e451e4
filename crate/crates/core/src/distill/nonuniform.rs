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

//! Distillation followed by a reference interference stage, with measured
//! per-mode losses.
//!
//! Four photons enter the lossy distillation block `D_in · (U_D ⊕ 1) · D_out`
//! and the distilled third mode is then interfered with the fourth on the
//! splitter `U_B`. Threshold detectors give
//! `g = P₁₂₃₄·P₁₂ / (P₁₂₃·P₁₂₄)`, the visibility follows from the splitter
//! reflectivity, and the output error is referenced to the undistilled photon.

use serde::{Deserialize, Serialize};

use super::herald::{heralded_distillation, HeraldSpec};
use super::kernel::OutcomeTable;
use super::source::{NoiseModel, PhotonSourceModel};
use crate::error::{check_probability, Error, Result};
use crate::optics::{compose_lossy, direct_sum_and_chain, ComplexMatrix, DiagonalLoss, Placement};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonuniformLossResult {
    pub input_error: f64,
    pub reflectivity: f64,
    pub correlator: f64,
    pub visibility: f64,
    /// Output error inferred from the correlator with the given losses.
    pub eps_out: f64,
    /// Same pipeline with every loss replaced by its mode average.
    pub eps_out_uniform: f64,
    /// `eps_out / eps_out_uniform − 1`.
    pub relative_to_uniform: f64,
    /// Number-resolved heralding on the three-mode block alone; diagonal
    /// losses cancel in this ratio.
    pub eps_out_postselected: f64,
}

fn correlator_error(t: &ComplexMatrix, eps: f64, reflectivity: f64) -> Result<(f64, f64, f64)> {
    let source = PhotonSourceModel::uniform(NoiseModel::Obb, 4, eps)?;
    let table = OutcomeTable::build(t, &source)?;
    let num = table.click_probability(&[0, 1, 2, 3]) * table.click_probability(&[0, 1]);
    let den = table.click_probability(&[0, 1, 2]) * table.click_probability(&[0, 1, 3]);
    if den <= 0.0 {
        return Err(Error::ZeroDenominator("threefold click probabilities"));
    }
    let g = num / den;
    let r = reflectivity;
    let v = (r * r + (1.0 - r) * (1.0 - r) - g) / (2.0 * r * (1.0 - r));
    Ok((g, v, 1.0 - v / (1.0 - eps)))
}

fn pipeline_matrix(
    d_in: &DiagonalLoss,
    u_d: &ComplexMatrix,
    d_out: &DiagonalLoss,
    u_b: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let block = direct_sum_and_chain(4, &[vec![Placement::new(u_d.clone(), 0)]]).or_else(|_| {
        // Measured blocks are only approximately unitary.
        let mut m = ComplexMatrix::identity(4);
        for i in 0..3 {
            for j in 0..3 {
                m.set(i, j, u_d.get(i, j));
            }
        }
        m.set(3, 3, crate::optics::C64::new(1.0, 0.0));
        Ok::<_, Error>(m)
    })?;
    let lossy = compose_lossy(d_in, &block, d_out)?;
    let mut splitter = ComplexMatrix::identity(4);
    for i in 0..2 {
        for j in 0..2 {
            splitter.set(i + 2, j + 2, u_b.get(i, j));
        }
    }
    lossy.matmul(&splitter)
}

pub fn nonuniform_loss_pipeline(
    d_in: &DiagonalLoss,
    u_d_exp: &ComplexMatrix,
    d_out: &DiagonalLoss,
    u_b: &ComplexMatrix,
    eps: f64,
) -> Result<NonuniformLossResult> {
    check_probability("indistinguishability error", eps)?;
    if u_d_exp.rows() != 3 || u_d_exp.cols() != 3 || u_b.rows() != 2 || u_b.cols() != 2 {
        return Err(Error::DimensionMismatch(
            "expects a 3x3 distillation block and a 2x2 splitter".into(),
        ));
    }
    if d_in.len() != 4 || d_out.len() != 4 {
        return Err(Error::DimensionMismatch(
            "expects losses on four modes".into(),
        ));
    }
    let reflectivity = u_b.get(0, 0).norm_sqr();
    if !(reflectivity > 0.0 && reflectivity < 1.0) {
        return Err(Error::OutOfRange(format!(
            "splitter reflectivity {reflectivity} must lie in (0, 1)"
        )));
    }
    let t = pipeline_matrix(d_in, u_d_exp, d_out, u_b)?;
    let (correlator, visibility, eps_out) = correlator_error(&t, eps, reflectivity)?;

    let mean = |d: &DiagonalLoss| d.amplitudes().iter().sum::<f64>() / d.len() as f64;
    let flat_in = DiagonalLoss::new(vec![mean(d_in); 4])?;
    let flat_out = DiagonalLoss::new(vec![mean(d_out); 4])?;
    let t_flat = pipeline_matrix(&flat_in, u_d_exp, &flat_out, u_b)?;
    let (_, _, eps_out_uniform) = correlator_error(&t_flat, eps, reflectivity)?;

    let in3 = DiagonalLoss::new(d_in.amplitudes()[..3].to_vec())?;
    let out3 = DiagonalLoss::new(d_out.amplitudes()[..3].to_vec())?;
    let block = compose_lossy(&in3, u_d_exp, &out3)?;
    let src = PhotonSourceModel::uniform(NoiseModel::Obb, 3, eps)?;
    let post = heralded_distillation(&block, &src, &HeraldSpec::single_photons(3)?)?;

    Ok(NonuniformLossResult {
        input_error: eps,
        reflectivity,
        correlator,
        visibility,
        eps_out,
        eps_out_uniform,
        relative_to_uniform: if eps_out_uniform > 0.0 {
            eps_out / eps_out_uniform - 1.0
        } else {
            0.0
        },
        eps_out_postselected: post.conditional_error,
    })
}
