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

//! Scans and closed-form checks built on heralded distillation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::herald::{heralded_distillation, report_from_table, HeraldSpec};
use super::kernel::{occupations, OutcomeTable};
use super::source::{NoiseModel, PhotonSourceModel, SpeciesTerm};
use crate::error::{check_probability, Error, Result};
use crate::optics::{beam_splitter, fourier_matrix, haar_unitary, permanent, ComplexMatrix, C64};

/// `ε′·N/ε` for the `N`-mode Fourier interferometer with its default herald.
pub fn fourier_slope_check(n: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "slope needs 0 < eps <= 1, got {eps}"
        )));
    }
    let f = fourier_matrix(n)?;
    let herald = HeraldSpec::default_for(&f)?;
    let src = PhotonSourceModel::uniform(NoiseModel::Obb, n, eps)?;
    let r = heralded_distillation(&f, &src, &herald)?;
    Ok(r.conditional_error * n as f64 / eps)
}

/// Two-photon interference visibility on a splitter of reflectivity `R`,
/// normalized to the fully distinguishable coincidence rate.
pub fn hom_visibility(
    first: &PhotonSourceModel,
    second: &PhotonSourceModel,
    reflectivity: f64,
) -> Result<f64> {
    if first.photons() != 1 || second.photons() != 1 {
        return Err(Error::OccupationMismatch(
            "each source must emit one photon".into(),
        ));
    }
    if first.model != second.model {
        return Err(Error::OutOfRange(
            "both photons must follow the same noise model".into(),
        ));
    }
    if !(reflectivity > 0.0 && reflectivity < 1.0) {
        return Err(Error::OutOfRange(format!(
            "reflectivity {reflectivity} must lie in (0, 1)"
        )));
    }
    let bs = beam_splitter(reflectivity)?;
    let pair = PhotonSourceModel::new(
        first.model,
        vec![first.eps_per_input[0], second.eps_per_input[0]],
    )?;
    let table = OutcomeTable::build(&bs, &pair)?;
    let coincidence = table.probability(&[1, 1]);
    let r = reflectivity;
    let classical = r * r + (1.0 - r) * (1.0 - r);
    Ok((classical - coincidence) / (2.0 * r * (1.0 - r)))
}

/// Excess output error of `u_exp` over the ideal Fourier interferometer of
/// the same size, both with the Fourier default herald.
pub fn effective_unitary_error(u_exp: &ComplexMatrix, eps_ref: f64) -> Result<f64> {
    let n = u_exp.require_square()?;
    let f = fourier_matrix(n)?;
    let herald = HeraldSpec::default_for(&f)?;
    let src = PhotonSourceModel::uniform(NoiseModel::Obb, n, eps_ref)?;
    let real = heralded_distillation(u_exp, &src, &herald)?;
    let ideal = heralded_distillation(&f, &src, &herald)?;
    Ok(real.conditional_error - ideal.conditional_error)
}

/// `1 − (1 − ε_u)^{N/3}`.
pub fn extrapolate_unitary_error(eps_unitary: f64, n: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&eps_unitary) {
        return Err(Error::OutOfRange(format!(
            "unitary error {eps_unitary} must lie in [0, 1)"
        )));
    }
    Ok(1.0 - (1.0 - eps_unitary).powf(n as f64 / 3.0))
}

/// `ε_tot = ε_indist + (1 − ε_indist)·ε_multi`.
pub fn combine_total_error(eps_indist: f64, eps_multi: f64) -> Result<f64> {
    check_probability("indistinguishability error", eps_indist)?;
    check_probability("multiphoton error", eps_multi)?;
    Ok(eps_indist + (1.0 - eps_indist) * eps_multi)
}

/// Where the smallest first-order ratio was found.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptimum {
    pub trial: usize,
    pub output_mode: usize,
    pub measured_modes: Vec<usize>,
    pub required_counts: Vec<u8>,
    pub herald_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalityScan {
    pub modes: usize,
    pub trials: usize,
    pub eps: f64,
    pub seed: u64,
    pub min_ratio: f64,
    pub argmin: Option<ScanOptimum>,
    pub evaluated: usize,
    pub skipped: usize,
    /// Ratio of the Fourier interferometer with its default herald, when one exists.
    pub fourier_ratio: Option<f64>,
}

/// Minimum of `ε′·N/ε` over seeded Haar-random interferometers and every
/// herald pattern that leaves exactly one photon in one unmeasured output.
pub fn optimality_scan(n: usize, trials: usize, eps: f64, seed: u64) -> Result<OptimalityScan> {
    if n == 0 || n > 5 {
        return Err(Error::OutOfRange(format!(
            "optimality scan supports 1..=5 modes, got {n}"
        )));
    }
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::OutOfRange(format!(
            "optimality scan needs 0 < eps <= 1e-3, got {eps}"
        )));
    }
    let src = PhotonSourceModel::uniform(NoiseModel::Obb, n, eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_ratio = f64::INFINITY;
    let mut argmin = None;
    let mut evaluated = 0;
    let mut skipped = 0;
    for trial in 0..trials {
        let u = haar_unitary(n, &mut rng)?;
        let table = OutcomeTable::build(&u, &src)?;
        for out in 0..n {
            let measured: Vec<usize> = (0..n).filter(|&m| m != out).collect();
            for counts in occupations(n - 1, n - 1) {
                let herald = HeraldSpec::new(measured.clone(), counts, out)?;
                match report_from_table(&table, &src, &herald) {
                    Ok(r) => {
                        evaluated += 1;
                        let ratio = r.conditional_error * n as f64 / eps;
                        if ratio < min_ratio {
                            min_ratio = ratio;
                            argmin = Some(ScanOptimum {
                                trial,
                                output_mode: out,
                                measured_modes: herald.measured_modes.clone(),
                                required_counts: herald.required_counts.clone(),
                                herald_probability: r.herald_probability,
                            });
                        }
                    }
                    Err(Error::NoHerald { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let fourier_ratio = match fourier_slope_check(n, eps) {
        Ok(r) => Some(r),
        Err(Error::NoViableHerald(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(OptimalityScan {
        modes: n,
        trials,
        eps,
        seed,
        min_ratio,
        argmin,
        evaluated,
        skipped,
        fourier_ratio,
    })
}

/// Herald probabilities of the uniform one-bad-photon mixture and of its
/// symmetric component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiPlusCheck {
    /// Herald probability of the incoherent mixture "photon k is bad", weight 1/N each.
    pub p_mix: f64,
    /// Herald probability of the symmetric superposition of those states.
    pub p_plus: f64,
    /// Herald probability with all photons good, from the species kernel.
    pub p0: f64,
    /// Weighted herald probability of the non-symmetric components.
    pub p_minus_total: f64,
    /// `|p_mix − (p0/N + p_minus_total)|`.
    pub residual: f64,
}

/// Rewrites the one-bad-photon mixture in the discrete Fourier basis of the
/// bad-photon position and checks that its symmetric component heralds
/// exactly like fully indistinguishable photons.
pub fn phi_plus_herald_check(
    n: usize,
    u: &ComplexMatrix,
    herald: &HeraldSpec,
) -> Result<PhiPlusCheck> {
    if n == 0 || n > 5 {
        return Err(Error::OutOfRange(format!(
            "check supports 1..=5 photons, got {n}"
        )));
    }
    if u.require_square()? != n {
        return Err(Error::DimensionMismatch(format!(
            "{n} photons on a {}-mode network",
            u.rows()
        )));
    }
    u.clone().into_unitary()?;
    let inputs: Vec<usize> = (0..n).collect();
    let ideal = OutcomeTable::from_terms(u, &inputs, &[SpeciesTerm::all_good(n)])?;
    let p0 = herald.herald_probability(&ideal);
    let mix_terms: Vec<SpeciesTerm> = (0..n)
        .map(|k| SpeciesTerm {
            weight: 1.0 / n as f64,
            species_of_photon: (0..n).map(|i| usize::from(i == k)).collect(),
        })
        .collect();
    let mixture = OutcomeTable::from_terms(u, &inputs, &mix_terms)?;
    let p_mix = herald.herald_probability(&mixture);

    // amp[k][j] for a fixed outcome: photon k (bad) leaves through mode j,
    // the rest leave as good photons through the remaining occupation.
    let mut p_components = vec![0.0; n];
    for occ in occupations(n, n) {
        if !herald.accepts(&occ) {
            continue;
        }
        let mut amps = vec![vec![C64::new(0.0, 0.0); n]; n];
        for j in 0..n {
            if occ[j] == 0 {
                continue;
            }
            let mut rest = occ.clone();
            rest[j] -= 1;
            let cols: Vec<usize> = rest
                .iter()
                .enumerate()
                .flat_map(|(m, &c)| std::iter::repeat_n(m, c as usize))
                .collect();
            let norm: f64 = rest
                .iter()
                .map(|&c| (1..=c as usize).map(|x| x as f64).product::<f64>())
                .product();
            for (k, row) in amps.iter_mut().enumerate() {
                let others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
                let a = permanent(&u.select(&others, &cols))?;
                row[j] = u.get(k, j) * a / norm.sqrt();
            }
        }
        for (m, slot) in p_components.iter_mut().enumerate() {
            for j in 0..n {
                let mut c = C64::new(0.0, 0.0);
                for (k, row) in amps.iter().enumerate() {
                    let phase = 2.0 * std::f64::consts::PI * ((m * k) % n) as f64 / n as f64;
                    c += C64::from_polar(1.0, phase) * row[j];
                }
                *slot += (c / (n as f64).sqrt()).norm_sqr();
            }
        }
    }
    let p_plus = p_components[0];
    let p_minus_total: f64 = p_components[1..].iter().sum::<f64>() / n as f64;
    let residual = (p_mix - (p0 / n as f64 + p_minus_total)).abs();
    Ok(PhiPlusCheck {
        p_mix,
        p_plus,
        p0,
        p_minus_total,
        residual,
    })
}
