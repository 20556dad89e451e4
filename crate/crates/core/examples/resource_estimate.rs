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

//! Photon cost of a logical qubit for the tabulated sources.

use photon_distill::resources::{
    default_sources, gamma_cost, loss_budget_adjust, optimal_scheme_size, regime_boundaries,
    ResourceParams,
};

fn main() -> photon_distill::Result<()> {
    let params = ResourceParams::default();
    for s in default_sources() {
        let opt = optimal_scheme_size(s.eps_indist, &params)?;
        let ratio = opt.ratio.map_or("n/a".to_string(), |r| format!("{r:.3}"));
        println!(
            "source {} ({}): eps {:.1e}, N* = {}, {:.3e} photons, ratio to no distillation {ratio}",
            s.label, s.year, s.eps_indist, opt.n_star, opt.cost
        );
    }
    let b = regime_boundaries(&params)?;
    println!(
        "distillation pays off above p/p_th = {:.4} (first at N = {})",
        b.p_cross_over_pth, b.first_beating_n
    );
    let l = loss_budget_adjust(0.01, 12.0)?;
    println!(
        "loss budget 1% over 12 gates -> {:.5} ({:.1}% tighter)",
        l.l_prime, l.reduction_percent
    );
    for gamma in [3.0, 2.0, 1.0] {
        println!(
            "halving the error at gamma {gamma}: cost x{}",
            gamma_cost(0.02, 0.01, gamma)?
        );
    }
    Ok(())
}
