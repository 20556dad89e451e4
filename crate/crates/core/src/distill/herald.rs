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

//! Herald patterns and heralded distillation.

use serde::{Deserialize, Serialize};

use super::kernel::{occupations, OutcomeTable};
use super::source::{NoiseModel, PhotonSourceModel};
use crate::error::{Error, Result};
use crate::optics::TransferMatrix;

/// Herald probabilities below this are treated as a pattern that never fires.
pub const MIN_HERALD_PROBABILITY: f64 = 1e-12;

/// Detector pattern that certifies success, plus the distilled mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeraldSpec {
    pub measured_modes: Vec<usize>,
    pub required_counts: Vec<u8>,
    pub output_mode: usize,
}

impl HeraldSpec {
    pub fn new(
        measured_modes: Vec<usize>,
        required_counts: Vec<u8>,
        output_mode: usize,
    ) -> Result<Self> {
        if measured_modes.len() != required_counts.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} measured modes with {} counts",
                measured_modes.len(),
                required_counts.len()
            )));
        }
        if measured_modes.contains(&output_mode) {
            return Err(Error::OutOfRange(format!(
                "output mode {output_mode} is also measured"
            )));
        }
        let mut sorted = measured_modes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != measured_modes.len() {
            return Err(Error::OutOfRange("measured modes repeat".into()));
        }
        Ok(Self {
            measured_modes,
            required_counts,
            output_mode,
        })
    }

    /// One photon on each of the first `n − 1` outputs; the last output is distilled.
    pub fn single_photons(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(
                "herald needs at least one mode".into(),
            ));
        }
        Self::new((0..n - 1).collect(), vec![1; n - 1], n - 1)
    }

    /// Default herald on `n` modes for `u`: the pattern on the first `n − 1`
    /// outputs with the largest ideal herald probability, first in
    /// lexicographic order on ties. For three modes this is one photon on
    /// each of the first two outputs.
    pub fn default_for(u: &TransferMatrix) -> Result<Self> {
        let n = u.require_square()?;
        let ideal = OutcomeTable::build(u, &PhotonSourceModel::uniform(NoiseModel::Obb, n, 0.0)?)?;
        let mut best: Option<(f64, Self)> = None;
        for counts in occupations(n - 1, n - 1) {
            let spec = Self::new((0..n - 1).collect(), counts, n - 1)?;
            let p = spec.herald_probability(&ideal);
            if p <= MIN_HERALD_PROBABILITY {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bp, bs)) => {
                    p > bp + 1e-14
                        || ((p - bp).abs() <= 1e-14 && spec.required_counts < bs.required_counts)
                }
            };
            if better {
                best = Some((p, spec));
            }
        }
        best.map(|(_, s)| s).ok_or_else(|| {
            Error::NoViableHerald(format!(
                "every {n}-mode pattern with one distilled photon is suppressed"
            ))
        })
    }

    /// Does a detected occupation satisfy the herald with exactly one photon
    /// in the output mode?
    pub fn accepts(&self, occ: &[u8]) -> bool {
        occ[self.output_mode] == 1
            && self
                .measured_modes
                .iter()
                .zip(&self.required_counts)
                .all(|(&m, &c)| occ[m] == c)
    }

    fn check_modes(&self, modes: usize) -> Result<()> {
        let max = self
            .measured_modes
            .iter()
            .copied()
            .chain([self.output_mode])
            .max()
            .unwrap_or(0);
        if max >= modes {
            return Err(Error::OutOfRange(format!(
                "herald uses mode {max} of {modes}"
            )));
        }
        Ok(())
    }

    pub fn herald_probability(&self, table: &OutcomeTable) -> f64 {
        table
            .iter()
            .filter(|(occ, _)| self.accepts(occ))
            .map(|(_, w)| w.probability())
            .sum()
    }
}

/// Contribution of source terms with a fixed number of bad photons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadClassContribution {
    pub bad_photons: usize,
    pub herald_probability: f64,
    pub bad_output_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistillationReport {
    pub model: NoiseModel,
    pub input_error: f64,
    pub herald_probability: f64,
    pub conditional_error: f64,
    /// `ε/ε′`; absent when `ε′ = 0`.
    pub reduction_factor: Option<f64>,
    pub per_class: Vec<BadClassContribution>,
}

/// Exact heralded distillation with photon `i` injected into input `i`.
pub fn heralded_distillation(
    u: &TransferMatrix,
    source: &PhotonSourceModel,
    herald: &HeraldSpec,
) -> Result<DistillationReport> {
    herald.check_modes(u.cols())?;
    let table = OutcomeTable::build(u, source)?;
    report_from_table(&table, source, herald)
}

pub(crate) fn report_from_table(
    table: &OutcomeTable,
    source: &PhotonSourceModel,
    herald: &HeraldSpec,
) -> Result<DistillationReport> {
    herald.check_modes(table.modes())?;
    let classes = table.photons() + 1;
    let mut herald_by_class = vec![0.0; classes];
    let mut bad_by_class = vec![0.0; classes];
    for (occ, w) in table.iter() {
        if !herald.accepts(occ) {
            continue;
        }
        for c in 0..classes {
            herald_by_class[c] += w.class_probability[c];
            bad_by_class[c] += w.class_bad_in_mode[c][herald.output_mode];
        }
    }
    let p_herald: f64 = herald_by_class.iter().sum();
    if p_herald <= MIN_HERALD_PROBABILITY {
        return Err(Error::NoHerald {
            probability: p_herald,
        });
    }
    let p_bad: f64 = bad_by_class.iter().sum();
    let eps_out = (p_bad / p_herald).clamp(0.0, 1.0);
    let eps_in = source.mean_error();
    Ok(DistillationReport {
        model: source.model,
        input_error: eps_in,
        herald_probability: p_herald,
        conditional_error: eps_out,
        reduction_factor: (eps_out > 0.0).then(|| eps_in / eps_out),
        per_class: (0..classes)
            .map(|c| BadClassContribution {
                bad_photons: c,
                herald_probability: herald_by_class[c],
                bad_output_probability: bad_by_class[c],
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{beam_splitter, fourier_matrix};

    fn fourier_report(n: usize, model: NoiseModel, eps: f64) -> DistillationReport {
        let f = fourier_matrix(n).unwrap();
        let herald = HeraldSpec::default_for(&f).unwrap();
        heralded_distillation(
            &f,
            &PhotonSourceModel::uniform(model, n, eps).unwrap(),
            &herald,
        )
        .unwrap()
    }

    #[test]
    fn three_mode_table_values() {
        // Oracle: exhaustive enumeration in an independent script.
        let obb = fourier_report(3, NoiseModel::Obb, 0.0759);
        assert!((obb.conditional_error - 0.033524).abs() < 5e-6);
        let sbb = fourier_report(3, NoiseModel::Sbb, 0.0793);
        assert!((sbb.conditional_error - 0.031343).abs() < 5e-6);
    }

    #[test]
    fn perfect_photons_give_perfect_output() {
        let r = fourier_report(3, NoiseModel::Obb, 0.0);
        assert_eq!(r.conditional_error, 0.0);
        assert!((r.herald_probability - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.reduction_factor, None);
    }

    #[test]
    fn breakdown_sums_to_totals() {
        let r = fourier_report(3, NoiseModel::Obb, 0.2);
        let p: f64 = r.per_class.iter().map(|c| c.herald_probability).sum();
        let b: f64 = r.per_class.iter().map(|c| c.bad_output_probability).sum();
        assert!((p - r.herald_probability).abs() < 1e-12);
        assert!((b - r.conditional_error * r.herald_probability).abs() < 1e-12);
        assert_eq!(r.per_class[0].bad_output_probability, 0.0);
    }

    #[test]
    fn two_mode_splitter_closed_form() {
        // Two-photon brute force: ε′ = 1/(2 − ε), p = ε − ε²/2.
        let bs = beam_splitter(0.5).unwrap();
        let herald = HeraldSpec::single_photons(2).unwrap();
        for eps in [0.01, 0.1, 0.4] {
            let src = PhotonSourceModel::uniform(NoiseModel::Obb, 2, eps).unwrap();
            let r = heralded_distillation(&bs, &src, &herald).unwrap();
            assert!((r.conditional_error - 1.0 / (2.0 - eps)).abs() < 1e-12);
            assert!((r.herald_probability - (eps - eps * eps / 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn suppressed_herald_is_reported() {
        let bs = beam_splitter(0.5).unwrap();
        let herald = HeraldSpec::single_photons(2).unwrap();
        let src = PhotonSourceModel::uniform(NoiseModel::Obb, 2, 0.0).unwrap();
        assert!(matches!(
            heralded_distillation(&bs, &src, &herald),
            Err(Error::NoHerald { .. })
        ));
        assert!(matches!(
            HeraldSpec::default_for(&fourier_matrix(2).unwrap()),
            Err(Error::NoViableHerald(_))
        ));
    }

    #[test]
    fn even_fourier_defaults_avoid_suppressed_patterns() {
        let h4 = HeraldSpec::default_for(&fourier_matrix(4).unwrap()).unwrap();
        assert_eq!(h4.required_counts, vec![0, 1, 2]);
        let h5 = HeraldSpec::default_for(&fourier_matrix(5).unwrap()).unwrap();
        assert_eq!(h5.required_counts, vec![0, 0, 1, 3]);
        let h3 = HeraldSpec::default_for(&fourier_matrix(3).unwrap()).unwrap();
        assert_eq!(h3, HeraldSpec::single_photons(3).unwrap());
    }

    #[test]
    fn herald_validation() {
        assert!(HeraldSpec::new(vec![0, 1], vec![1], 2).is_err());
        assert!(HeraldSpec::new(vec![0, 2], vec![1, 1], 2).is_err());
        let f = fourier_matrix(3).unwrap();
        let src = PhotonSourceModel::uniform(NoiseModel::Obb, 3, 0.1).unwrap();
        let far = HeraldSpec::new(vec![0], vec![1], 5).unwrap();
        assert!(heralded_distillation(&f, &src, &far).is_err());
    }
}
