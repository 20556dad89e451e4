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

//! Builds the standard interferometers and checks permanents against
//! brute-force expansion.

use photon_distill::optics::{
    beam_splitter, direct_sum_and_chain, fourier_matrix, haar_unitary, hadamard_matrix, permanent,
    permanent_by_permutations, Placement,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> photon_distill::Result<()> {
    let f3 = fourier_matrix(3)?;
    println!("3-mode Fourier interferometer\n{f3}");
    println!("perm(F3) = {:.6}", permanent(&f3)?);

    let h4 = hadamard_matrix(4)?;
    println!("perm(H4) = {:.6}", permanent(&h4)?);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [4, 6, 8] {
        let u = haar_unitary(n, &mut rng)?;
        let fast = permanent(&u)?;
        let slow = permanent_by_permutations(&u)?;
        println!(
            "Haar n={n}: Ryser {fast:.6}, permutations {slow:.6}, |diff| {:.1e}",
            (fast - slow).norm()
        );
    }

    // Fourier block followed by a splitter on the last two modes.
    let chain = direct_sum_and_chain(
        4,
        &[
            vec![Placement::new(f3, 0)],
            vec![Placement::new(beam_splitter(0.5)?, 2)],
        ],
    )?;
    println!(
        "chained network, unitarity residual {:.1e}",
        chain.unitarity_residual()?
    );
    Ok(())
}
