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

//! Compares the Fourier interferometer with Haar-random networks at small error.

use photon_distill::distill::optimality_scan;

fn main() -> photon_distill::Result<()> {
    for n in [3, 4] {
        let scan = optimality_scan(n, 300, 1e-3, 7)?;
        println!(
            "N={n}: {} networks evaluated, {} skipped, min N·ε′/ε = {:.4}, Fourier {:.4}",
            scan.evaluated,
            scan.skipped,
            scan.min_ratio,
            scan.fourier_ratio.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
