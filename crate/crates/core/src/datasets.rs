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

//! Measured datasets bundled with the crate.

use serde::{Deserialize, Serialize};

use crate::optics::{ComplexMatrix, C64};
use crate::tomography::CountMatrix;

/// Four-mode distillation chip, single-photon counts.
pub const S_RECORDED_CSV: &str = include_str!("../data/s_recorded.csv");
/// Reference splitter, single-photon counts on modes 3 and 4.
pub const S_RECORDED_REF_CSV: &str = include_str!("../data/s_recorded_ref.csv");
/// Per-run correlator values of the four protocols.
pub const CORRELATOR_SAMPLES_CSV: &str = include_str!("../data/correlator_samples.csv");
/// Per-protocol sample count, mean, SD and SE.
pub const CORRELATOR_SUMMARY_CSV: &str = include_str!("../data/correlator_summary.csv");
/// Reported source errors.
pub const SOURCES_CSV: &str = include_str!("../data/sources.csv");
/// Four-decimal reference decomposition of the two count sets.
pub const CHARACTERIZATION_REFERENCE_JSON: &str =
    include_str!("../data/characterization_reference.json");

/// Reflectivity of the reference splitter.
pub const R1: f64 = 0.497;
/// Reflectivity of the splitter after the distillation block.
pub const R2: f64 = 0.517;

pub fn s_recorded() -> CountMatrix {
    CountMatrix::parse(S_RECORDED_CSV).expect("bundled counts parse")
}

pub fn s_recorded_ref() -> CountMatrix {
    CountMatrix::parse(S_RECORDED_REF_CSV).expect("bundled counts parse")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReference {
    pub description: String,
    pub t_abs: Vec<Vec<f64>>,
    pub d_in: Vec<f64>,
    pub u_abs: Vec<Vec<f64>>,
    pub d_out: Vec<f64>,
    pub u_model_abs: Vec<Vec<f64>>,
    pub r2: f64,
    pub fidelity_fit: f64,
    pub u_d_exp: Vec<Vec<[f64; 2]>>,
    pub fidelity_full: f64,
    pub eta_mean: f64,
    pub ref_t_abs: Vec<Vec<f64>>,
    pub ref_d_in: Vec<f64>,
    pub ref_u_abs: Vec<Vec<f64>>,
    pub ref_d_out: Vec<f64>,
    pub r1: f64,
}

impl CharacterizationReference {
    pub fn u_d_exp_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows(
            self.u_d_exp
                .iter()
                .map(|r| r.iter().map(|[re, im]| C64::new(*re, *im)).collect())
                .collect(),
        )
        .expect("bundled matrix is well formed")
    }
}

pub fn characterization_reference() -> CharacterizationReference {
    serde_json::from_str(CHARACTERIZATION_REFERENCE_JSON).expect("bundled reference parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_load() {
        assert_eq!(s_recorded().s_norm, 395_500_000);
        assert_eq!(s_recorded_ref().rows(), 2);
        let r = characterization_reference();
        assert_eq!(r.u_d_exp_matrix().rows(), 3);
        assert_eq!(r.d_in.len(), 4);
    }
}
