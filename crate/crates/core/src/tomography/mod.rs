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

//! Interferometer characterization from single-photon counts.

mod counts;
mod decompose;
mod fit;
mod phases;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

pub use counts::{amplitudes_from_counts, CountMatrix};
pub use decompose::{
    decompose_losses, doubly_stochastic_residual, sinkhorn, LossDecomposition, LossGauge,
    SINKHORN_MAX_ITER, SINKHORN_TOL,
};
pub use fit::{
    concatenated_model, extract_reflectivity, fit_concatenated_model, ConcatenatedFit,
    DEGENERATE_REFLECTIVITY,
};
pub use phases::{reconstruct_phases_3mode, PhaseReconstruction, TRIANGLE_TOL};

use crate::error::{Error, Result};
use crate::optics::{fourier_matrix, trace_fidelity, ComplexMatrix, DiagonalLoss, TraceFidelity};

/// End-to-end transmissions `η_ij = d_in,i² · d_out,j²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmissionMap {
    pub eta: Vec<Vec<f64>>,
    /// `−10 log₁₀ η_ij`.
    pub loss_db: Vec<Vec<f64>>,
    pub mean: f64,
    /// Sample standard deviation over all pairs.
    pub sd: f64,
}

pub fn transmission_map(d_in: &DiagonalLoss, d_out: &DiagonalLoss) -> TransmissionMap {
    let tin = d_in.transmissions();
    let tout = d_out.transmissions();
    let eta: Vec<Vec<f64>> = tin
        .iter()
        .map(|a| tout.iter().map(|b| a * b).collect())
        .collect();
    let loss_db = eta
        .iter()
        .map(|r| r.iter().map(|e| -10.0 * e.log10()).collect())
        .collect();
    let flat: Vec<f64> = eta.iter().flatten().copied().collect();
    let n = flat.len() as f64;
    let mean = if flat.is_empty() {
        0.0
    } else {
        flat.iter().sum::<f64>() / n
    };
    let sd = if flat.len() < 2 {
        0.0
    } else {
        (flat.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    TransmissionMap {
        eta,
        loss_db,
        mean,
        sd,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectivitySpread {
    pub draws: usize,
    pub seed: u64,
    pub mean: f64,
    pub sd: f64,
    pub relative_se: f64,
}

/// Poisson-resamples every count and repeats counts → decomposition →
/// reflectivity. Draw `k` uses stream `k` of a ChaCha generator seeded with
/// `seed`, so draws are independent of evaluation order.
pub fn mc_reflectivity_uncertainty(
    c: &CountMatrix,
    draws: usize,
    seed: u64,
) -> Result<ReflectivitySpread> {
    if draws < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: draws,
        });
    }
    if c.rows() != 2 || c.cols() != 2 {
        return Err(Error::InvalidDimension(
            "reflectivity needs a 2x2 count block".into(),
        ));
    }
    let poissons = c
        .counts
        .iter()
        .map(|r| {
            r.iter()
                .map(|&k| {
                    Poisson::new(k as f64)
                        .map_err(|_| Error::OutOfRange(format!("count {k} must be positive")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(draws);
    for k in 0..draws {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let counts = poissons
            .iter()
            .map(|r| r.iter().map(|p| p.sample(&mut rng) as u64).collect())
            .collect();
        let resampled = CountMatrix {
            counts,
            s_norm: c.s_norm,
            duration_s: c.duration_s,
        };
        let t = amplitudes_from_counts(&resampled)?;
        let d = decompose_losses(&t, LossGauge::Balanced)?;
        values.push(extract_reflectivity(&d.u_abs)?);
    }
    let n = draws as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    Ok(ReflectivitySpread {
        draws,
        seed,
        mean,
        sd,
        relative_se: sd / mean,
    })
}

/// Ideal three-mode distillation interferometer, `conj(F₃)`, with the
/// conjugation that puts a positive imaginary part at entry `(1, 2)`.
pub fn ideal_distillation_matrix() -> ComplexMatrix {
    fourier_matrix(3).expect("fixed size").conj()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizeOptions {
    pub gauge: LossGauge,
    pub fit_model: bool,
    pub phases: bool,
}

impl Default for CharacterizeOptions {
    fn default() -> Self {
        Self {
            gauge: LossGauge::Balanced,
            fit_model: true,
            phases: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationResult {
    pub t_amplitudes: ComplexMatrix,
    pub d_in: DiagonalLoss,
    pub d_out: DiagonalLoss,
    pub u_abs: ComplexMatrix,
    pub sinkhorn_iterations: usize,
    pub sinkhorn_residual: f64,
    pub u_phased: Option<ComplexMatrix>,
    pub phase_residual: Option<f64>,
    pub fit: Option<ConcatenatedFit>,
    /// Splitter reflectivity: `|u₁₁|²` for a two-mode block, the fitted
    /// splitter for a four-mode chip.
    pub r_fit: Option<f64>,
    pub fidelity_fit: Option<f64>,
    /// `|(1/3) tr(U_thᵀ U)|` against the ideal distillation matrix, best of
    /// both conjugate branches.
    pub fidelity_full: Option<f64>,
    pub fidelity_full_parts: Option<TraceFidelity>,
    pub transmission: TransmissionMap,
    pub eta_mean: f64,
    pub eta_sd: f64,
}

fn best_branch_fidelity(u: &ComplexMatrix) -> Result<TraceFidelity> {
    let ideal = ideal_distillation_matrix();
    let a = trace_fidelity(&ideal, u, 3)?;
    let b = trace_fidelity(&ideal, &u.conj(), 3)?;
    Ok(if b.modulus > a.modulus { b } else { a })
}

pub fn characterize(
    c: &CountMatrix,
    options: &CharacterizeOptions,
) -> Result<CharacterizationResult> {
    let t = amplitudes_from_counts(c)?;
    let dec = decompose_losses(&t, options.gauge)?;
    let n = dec.u_abs.rows();
    let transmission = transmission_map(&dec.d_in, &dec.d_out);
    let mut out = CharacterizationResult {
        t_amplitudes: t,
        d_in: dec.d_in.clone(),
        d_out: dec.d_out.clone(),
        u_abs: dec.u_abs.clone(),
        sinkhorn_iterations: dec.iterations,
        sinkhorn_residual: dec.residual,
        u_phased: None,
        phase_residual: None,
        fit: None,
        r_fit: None,
        fidelity_fit: None,
        fidelity_full: None,
        fidelity_full_parts: None,
        eta_mean: transmission.mean,
        eta_sd: transmission.sd,
        transmission,
    };
    let block = match n {
        2 => {
            out.r_fit = Some(extract_reflectivity(&dec.u_abs)?);
            None
        }
        3 => Some(dec.u_abs.clone()),
        4 if options.fit_model => {
            let fit = fit_concatenated_model(&dec.u_abs)?;
            out.r_fit = Some(fit.reflectivity);
            out.fidelity_fit = Some(fit.fidelity);
            let b = fit.block.clone();
            out.fit = Some(fit);
            Some(b)
        }
        _ => None,
    };
    if let (Some(b), true) = (block, options.phases) {
        let rec = reconstruct_phases_3mode(&b)?;
        let f = best_branch_fidelity(&rec.matrix)?;
        out.fidelity_full = Some(f.modulus);
        out.fidelity_full_parts = Some(f);
        out.phase_residual = Some(rec.unitarity_residual);
        out.u_phased = Some(rec.matrix);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lossless_map() {
        let m = transmission_map(&DiagonalLoss::lossless(3), &DiagonalLoss::lossless(3));
        assert!(m.eta.iter().flatten().all(|&e| e == 1.0));
        assert_eq!(m.mean, 1.0);
        assert_eq!(m.sd, 0.0);
    }

    #[test]
    fn single_pair_product() {
        let m = transmission_map(
            &DiagonalLoss::new(vec![0.3568]).unwrap(),
            &DiagonalLoss::new(vec![0.3856]).unwrap(),
        );
        assert!((m.eta[0][0] - 0.018929).abs() < 1e-6);
    }

    #[test]
    fn monte_carlo_is_seeded_and_scales() {
        let c = CountMatrix::new(vec![vec![40000, 36000], vec![41000, 35000]], 1_000_000).unwrap();
        let a = mc_reflectivity_uncertainty(&c, 200, 11).unwrap();
        let b = mc_reflectivity_uncertainty(&c, 200, 11).unwrap();
        assert_eq!(a, b);
        let big = mc_reflectivity_uncertainty(&c.scaled(100).unwrap(), 200, 11).unwrap();
        let ratio = a.relative_se / big.relative_se;
        assert!((ratio - 10.0).abs() < 2.0, "{ratio}");
    }

    #[test]
    fn identity_counts_characterize_as_identity() {
        let c = CountMatrix::new(
            vec![vec![500, 0, 0], vec![0, 400, 0], vec![0, 0, 450]],
            1000,
        )
        .unwrap();
        let opts = CharacterizeOptions {
            phases: false,
            ..Default::default()
        };
        let r = characterize(&c, &opts).unwrap();
        assert!(r.u_abs.max_abs_diff(&ComplexMatrix::identity(3)).unwrap() < 1e-12);
    }
}
