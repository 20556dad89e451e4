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

//! Heralded distillation on Fourier interferometers of growing size.

use photon_distill::distill::{
    fourier_slope_check, heralded_distillation, HeraldSpec, NoiseModel, PhotonSourceModel,
};
use photon_distill::optics::fourier_matrix;

fn main() -> photon_distill::Result<()> {
    let f3 = fourier_matrix(3)?;
    let herald = HeraldSpec::default_for(&f3)?;
    println!(
        "N=3 herald: modes {:?} counts {:?}, output {}",
        herald.measured_modes, herald.required_counts, herald.output_mode
    );
    for (model, eps) in [(NoiseModel::Obb, 0.0759), (NoiseModel::Sbb, 0.0793)] {
        let src = PhotonSourceModel::uniform(model, 3, eps)?;
        let r = heralded_distillation(&f3, &src, &herald)?;
        println!(
            "{model:?}: eps {eps:.4} -> {:.4}  (herald probability {:.4})",
            r.conditional_error, r.herald_probability
        );
    }

    println!("\nsmall-error slope N·ε′/ε");
    for n in 3..=5 {
        println!("  N={n}: {:.5}", fourier_slope_check(n, 1e-4)?);
    }
    match fourier_slope_check(2, 1e-4) {
        Ok(s) => println!("  N=2: {s:.5}"),
        Err(e) => println!("  N=2: {e}"),
    }

    println!("\nN=3 sweep");
    for eps in [0.0, 0.01, 0.05, 0.1, 0.2] {
        let src = PhotonSourceModel::uniform(NoiseModel::Obb, 3, eps)?;
        println!(
            "  {eps:.2} -> {:.5}",
            heralded_distillation(&f3, &src, &herald)?.conditional_error
        );
    }
    Ok(())
}
