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

//! Error budget from the bundled per-run correlator measurements.

use photon_distill::datasets;
use photon_distill::extraction::{
    extract_errors, extract_errors_sbb, monte_carlo_uncertainty, zeta_sensitivity,
    CorrelatorSamples, CorrelatorSet, ErrorFields, Protocol, SeConvention,
};

fn main() -> photon_distill::Result<()> {
    let samples = CorrelatorSamples::parse(datasets::CORRELATOR_SAMPLES_CSV)?;
    println!("protocol   n     mean      se");
    for p in Protocol::ALL {
        let s = samples.stats(p)?;
        println!("{p:>8} {:>3}  {:.4}  {:.4}", s.n, s.mean, s.se);
    }
    let cs = CorrelatorSet::from_samples(&samples, datasets::R1, datasets::R2)?;
    let budget = extract_errors(&cs, SeConvention::Conservative)?;
    let mc = monte_carlo_uncertainty(&cs, 4000, 1)?;
    println!("\nquantity          value      se  (monte carlo)");
    let analytic = [
        budget.v0,
        budget.v1,
        budget.eps_multi,
        budget.eps_multi_out,
        budget.eps_tot,
        budget.eps_tot_out,
        budget.eps_indist,
        budget.eps_indist_out,
    ];
    for ((name, e), m) in ErrorFields::NAMES.iter().zip(analytic).zip(mc.to_array()) {
        println!("{name:<15} {:.4}  {:.4}  ({m:.4})", e.value, e.se);
    }
    let sbb = extract_errors_sbb(&budget)?;
    println!(
        "\nsimilar-bad-bit reading: {:.4} -> {:.4}",
        sbb.eps_indist, sbb.eps_indist_out
    );
    let z = zeta_sensitivity(budget.eps_multi.value, budget.eps_multi_out.value)?;
    println!("{z:?}");
    for w in &budget.warnings {
        println!("note: {w}");
    }
    Ok(())
}
