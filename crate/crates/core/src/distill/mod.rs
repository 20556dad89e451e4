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

//! Heralded distillation of partially distinguishable photons.

mod analysis;
mod herald;
mod kernel;
mod nonuniform;
mod source;

pub use analysis::{
    combine_total_error, effective_unitary_error, extrapolate_unitary_error, fourier_slope_check,
    hom_visibility, optimality_scan, phi_plus_herald_check, OptimalityScan, PhiPlusCheck,
    ScanOptimum,
};
pub use herald::{
    heralded_distillation, BadClassContribution, DistillationReport, HeraldSpec,
    MIN_HERALD_PROBABILITY,
};
pub use kernel::{
    event_probability, occupations, Dilation, Occupation, OutcomeTable, OutcomeWeight,
};
pub use nonuniform::{nonuniform_loss_pipeline, NonuniformLossResult};
pub use source::{
    expand_species, NoiseModel, PhotonSourceModel, SpeciesTerm, MAX_EXPANDED_PHOTONS,
};
