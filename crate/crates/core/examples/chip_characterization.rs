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

//! Decomposes the bundled single-photon count matrices of the four-mode
//! distillation chip and the reference splitter.

use photon_distill::datasets;
use photon_distill::tomography::{
    characterize, mc_reflectivity_uncertainty, CharacterizeOptions, LossGauge,
};

fn print_rows(label: &str, rows: &[Vec<f64>]) {
    println!("{label}");
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:.4}")).collect();
        println!("  [{}]", cells.join(", "));
    }
}

fn main() -> photon_distill::Result<()> {
    let chip = datasets::s_recorded();
    let reference = datasets::characterization_reference();
    let opts = CharacterizeOptions {
        gauge: LossGauge::InputAnchor {
            mode: 0,
            amplitude: reference.d_in[0],
        },
        ..Default::default()
    };
    let res = characterize(&chip, &opts)?;

    println!(
        "sinkhorn: {} iterations, residual {:.2e}",
        res.sinkhorn_iterations, res.sinkhorn_residual
    );
    println!("D_in  = {:.4?}", res.d_in.amplitudes());
    println!("D_out = {:.4?}", res.d_out.amplitudes());
    print_rows("|U|", &res.u_abs.abs_values());
    if let Some(fit) = &res.fit {
        print_rows("|U_model|", &fit.model_abs.abs_values());
        println!("R2 = {:.5}  F_fit = {:.5}", fit.reflectivity, fit.fidelity);
    }
    if let Some(u) = &res.u_phased {
        println!("U_D (3-mode block, phases restored)\n{u}");
    }
    if let (Some(f), Some(parts)) = (res.fidelity_full, &res.fidelity_full_parts) {
        println!("F_D = {f:.5}  (re {:.5}, im {:.5})", parts.re, parts.im);
    }
    println!("mean transmission {:.4} +- {:.4}", res.eta_mean, res.eta_sd);

    let reference_counts = datasets::s_recorded_ref();
    let r1 = characterize(&reference_counts, &CharacterizeOptions::default())?;
    println!("R1 = {:.5}", r1.r_fit.unwrap_or(f64::NAN));
    let spread = mc_reflectivity_uncertainty(&reference_counts, 500, 7)?;
    println!(
        "R1 Poisson spread: mean {:.5}, sd {:.2e}",
        spread.mean, spread.sd
    );
    Ok(())
}
