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

//! Photon errors and their uncertainties from measured correlators.

mod budget;
mod correlators;

pub use budget::{
    central_values, extract_errors, extract_errors_sbb, finite_difference_uncertainty,
    monte_carlo_uncertainty, propagate_uncertainty, raw_visibility, sbb_from_obb,
    weighted_multiphoton_error, zeta_sensitivity, ErrorBudget, ErrorFields, Estimate, SbbErrors,
    SeConvention, Visibility, ZetaSensitivity, CI95, DENOMINATOR_NOTE,
};
pub use correlators::{
    correlator_from_counts, sample_stats, CoincidenceCounts, CorrelatorSamples, CorrelatorSet,
    Protocol, SampleStats,
};
