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

//! Correlator pipeline on the characterized chip with unequal mode losses.

use photon_distill::datasets;
use photon_distill::distill::nonuniform_loss_pipeline;
use photon_distill::optics::{beam_splitter, DiagonalLoss};

fn main() -> photon_distill::Result<()> {
    let r = datasets::characterization_reference();
    let d_in = DiagonalLoss::new(r.d_in.clone())?;
    let d_out = DiagonalLoss::new(r.d_out.clone())?;
    let res = nonuniform_loss_pipeline(
        &d_in,
        &r.u_d_exp_matrix(),
        &d_out,
        &beam_splitter(0.5)?,
        0.076,
    )?;
    println!(
        "correlator g = {:.5}, visibility {:.5}",
        res.correlator, res.visibility
    );
    println!("eps' with measured losses  {:.5}", res.eps_out);
    println!("eps' with averaged losses  {:.5}", res.eps_out_uniform);
    println!(
        "relative change            {:+.2}%",
        100.0 * res.relative_to_uniform
    );
    println!("number-resolved heralding  {:.5}", res.eps_out_postselected);
    Ok(())
}
