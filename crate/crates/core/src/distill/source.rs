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

//! Noisy single-photon sources and their expansion into species terms.

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Largest photon number expanded exactly.
pub const MAX_EXPANDED_PHOTONS: usize = 12;

/// How error photons relate to one another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    /// Orthogonal bad bit: every error photon is distinguishable from all others.
    Obb,
    /// Similar bad bit: all error photons share one common error state.
    Sbb,
}

impl std::str::FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obb" => Ok(Self::Obb),
            "sbb" => Ok(Self::Sbb),
            other => Err(Error::Parse(format!("unknown noise model {other:?}"))),
        }
    }
}

/// One photon per listed input, each with its own indistinguishability error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonSourceModel {
    pub model: NoiseModel,
    pub eps_per_input: Vec<f64>,
    /// Only consumed by the total-error combination.
    pub eps_multi: Option<f64>,
}

impl PhotonSourceModel {
    pub fn new(model: NoiseModel, eps_per_input: Vec<f64>) -> Result<Self> {
        for &e in &eps_per_input {
            check_probability("indistinguishability error", e)?;
        }
        Ok(Self {
            model,
            eps_per_input,
            eps_multi: None,
        })
    }

    pub fn uniform(model: NoiseModel, photons: usize, eps: f64) -> Result<Self> {
        Self::new(model, vec![eps; photons])
    }

    pub fn with_multiphoton(mut self, eps_multi: f64) -> Result<Self> {
        check_probability("multiphoton error", eps_multi)?;
        self.eps_multi = Some(eps_multi);
        Ok(self)
    }

    pub fn photons(&self) -> usize {
        self.eps_per_input.len()
    }

    /// `⟨ε⟩ = (1/N) Σ ε⁽ⁱ⁾`.
    pub fn mean_error(&self) -> f64 {
        if self.eps_per_input.is_empty() {
            return 0.0;
        }
        self.eps_per_input.iter().sum::<f64>() / self.eps_per_input.len() as f64
    }
}

/// One branch of the product-state expansion. Label 0 marks good photons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeciesTerm {
    pub weight: f64,
    pub species_of_photon: Vec<usize>,
}

impl SpeciesTerm {
    pub fn all_good(photons: usize) -> Self {
        Self {
            weight: 1.0,
            species_of_photon: vec![0; photons],
        }
    }

    pub fn bad_count(&self) -> usize {
        self.species_of_photon.iter().filter(|&&s| s != 0).count()
    }
}

/// Exact `2^N`-term expansion. Terms with zero weight are dropped, so an
/// error-free source yields a single all-good term.
pub fn expand_species(source: &PhotonSourceModel) -> Result<Vec<SpeciesTerm>> {
    let n = source.photons();
    if n > MAX_EXPANDED_PHOTONS {
        return Err(Error::SizeLimit {
            size: n,
            limit: MAX_EXPANDED_PHOTONS,
        });
    }
    let mut terms = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let mut weight = 1.0;
        let mut labels = Vec::with_capacity(n);
        let mut next_label = 1;
        for (i, &eps) in source.eps_per_input.iter().enumerate() {
            if mask & (1 << i) != 0 {
                weight *= eps;
                match source.model {
                    NoiseModel::Obb => {
                        labels.push(next_label);
                        next_label += 1;
                    }
                    NoiseModel::Sbb => labels.push(1),
                }
            } else {
                weight *= 1.0 - eps;
                labels.push(0);
            }
        }
        if weight > 0.0 {
            terms.push(SpeciesTerm {
                weight,
                species_of_photon: labels,
            });
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_pair_is_one_term() {
        let s = PhotonSourceModel::uniform(NoiseModel::Obb, 2, 0.0).unwrap();
        let terms = expand_species(&s).unwrap();
        assert_eq!(terms, vec![SpeciesTerm::all_good(2)]);
    }

    #[test]
    fn single_photon_split() {
        let s = PhotonSourceModel::uniform(NoiseModel::Obb, 1, 0.3).unwrap();
        let w: Vec<f64> = expand_species(&s)
            .unwrap()
            .iter()
            .map(|t| t.weight)
            .collect();
        assert_eq!(w.len(), 2);
        assert!((w[0] - 0.7).abs() < 1e-15 && (w[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn one_bad_class_is_binomial() {
        let eps = 0.2;
        let s = PhotonSourceModel::uniform(NoiseModel::Sbb, 3, eps).unwrap();
        let terms = expand_species(&s).unwrap();
        let one_bad: f64 = terms
            .iter()
            .filter(|t| t.bad_count() == 1)
            .map(|t| t.weight)
            .sum();
        assert!((one_bad - 3.0 * eps * (1.0 - eps).powi(2)).abs() < 1e-15);
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn labels_follow_the_model() {
        let obb = PhotonSourceModel::uniform(NoiseModel::Obb, 3, 0.5).unwrap();
        let last = expand_species(&obb).unwrap().pop().unwrap();
        assert_eq!(last.species_of_photon, vec![1, 2, 3]);
        let sbb = PhotonSourceModel::uniform(NoiseModel::Sbb, 3, 0.5).unwrap();
        let last = expand_species(&sbb).unwrap().pop().unwrap();
        assert_eq!(last.species_of_photon, vec![1, 1, 1]);
    }

    #[test]
    fn validation() {
        assert!(PhotonSourceModel::uniform(NoiseModel::Obb, 2, -0.1).is_err());
        let big = PhotonSourceModel::uniform(NoiseModel::Obb, 13, 0.1).unwrap();
        assert!(matches!(expand_species(&big), Err(Error::SizeLimit { .. })));
        assert_eq!("SBB".parse::<NoiseModel>().unwrap(), NoiseModel::Sbb);
    }
}
