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

//! Randomized invariants across the public API.

use photon_distill::distill::{
    heralded_distillation, optimality_scan, HeraldSpec, NoiseModel, OutcomeTable,
    PhotonSourceModel, SpeciesTerm,
};
use photon_distill::extraction::{
    central_values, finite_difference_uncertainty, propagate_uncertainty, sbb_from_obb,
    CorrelatorSet, SeConvention,
};
use photon_distill::optics::{
    beam_splitter, compose_lossy, direct_sum_and_chain, fourier_matrix, haar_unitary,
    hadamard_matrix, permanent, permanent_by_permutations, trace_fidelity, ComplexMatrix,
    DiagonalLoss, Placement, C64,
};
use photon_distill::resources::{
    linear_validity_ratio, logical_cost, optimal_scheme_size, ResourceParams,
};
use photon_distill::tomography::{
    decompose_losses, doubly_stochastic_residual, fit_concatenated_model, reconstruct_phases_3mode,
    LossGauge,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn haar(n: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn random_complex(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn permute_rows(m: &ComplexMatrix, perm: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(perm[i], j))
}

#[test]
fn standard_networks_are_unitary() {
    for n in 1..=16 {
        assert!(
            fourier_matrix(n).unwrap().unitarity_residual().unwrap() < 1e-12,
            "fourier {n}"
        );
        if n.is_power_of_two() {
            assert!(
                hadamard_matrix(n).unwrap().unitarity_residual().unwrap() < 1e-12,
                "hadamard {n}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permanent_symmetries(seed in any::<u64>(), p in Just(vec![0usize, 1, 2, 3]).prop_shuffle(), q in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let a = random_complex(4, seed);
        let base = permanent(&a).unwrap();
        let tol = 1e-12 * (1.0 + base.norm());
        prop_assert!((permanent(&permute_rows(&a, &p)).unwrap() - base).norm() < tol);
        prop_assert!((permanent(&a.transpose()).unwrap() - base).norm() < tol);
        let both = permute_rows(&permute_rows(&a, &p).transpose(), &q).transpose();
        prop_assert!((permanent(&both).unwrap() - base).norm() < tol);
    }

    #[test]
    fn permanent_matches_factorial_sum(seed in any::<u64>(), n in 1usize..=6) {
        let a = random_complex(n, seed);
        let fast = permanent(&a).unwrap();
        let slow = permanent_by_permutations(&a).unwrap();
        prop_assert!((fast - slow).norm() <= 1e-12 * slow.norm().max(1e-3));
    }

    #[test]
    fn lossy_networks_are_contractions(seed in any::<u64>(), d in prop::collection::vec(0.0f64..=1.0, 8)) {
        let u = haar(4, seed);
        let d_in = DiagonalLoss::new(d[..4].to_vec()).unwrap();
        let d_out = DiagonalLoss::new(d[4..].to_vec()).unwrap();
        let t = compose_lossy(&d_in, &u, &d_out).unwrap();
        prop_assert!(t.max_singular_value() <= 1.0 + 1e-10);
    }

    #[test]
    fn trace_fidelity_depends_on_phase_gauge(seed in any::<u64>()) {
        let u = haar(3, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let phases: Vec<C64> = (0..3).map(|_| C64::from_polar(1.0, rng.random_range(0.3..2.8))).collect();
        let rotated = u.matmul(&ComplexMatrix::from_fn(3, 3, |i, j| if i == j { phases[i] } else { C64::new(0.0, 0.0) })).unwrap();
        let f = trace_fidelity(&u, &rotated, 3).unwrap();
        prop_assert!(f.modulus < 1.0 - 1e-6);
        prop_assert!((trace_fidelity(&u, &u, 3).unwrap().modulus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outcome_probabilities_sum_to_one(seed in any::<u64>(), labels in prop::collection::vec(0usize..3, 3)) {
        let u = haar(3, seed);
        let term = SpeciesTerm { weight: 1.0, species_of_photon: labels };
        let table = OutcomeTable::from_terms(&u, &[0, 1, 2], &[term]).unwrap();
        prop_assert!((table.total_probability() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn per_photon_errors_average_to_first_order(e in prop::collection::vec(0.0f64..0.02, 3)) {
        let f = fourier_matrix(3).unwrap();
        let h = HeraldSpec::default_for(&f).unwrap();
        let mixed = heralded_distillation(&f, &PhotonSourceModel::new(NoiseModel::Obb, e.clone()).unwrap(), &h).unwrap();
        let mean = e.iter().sum::<f64>() / 3.0;
        let flat = heralded_distillation(&f, &PhotonSourceModel::uniform(NoiseModel::Obb, 3, mean).unwrap(), &h).unwrap();
        let scale = e.iter().cloned().fold(0.0, f64::max).powi(2);
        prop_assert!((mixed.conditional_error - flat.conditional_error).abs() <= 2.0 * scale + 1e-15);
    }

    #[test]
    fn loss_decomposition_round_trip(seed in any::<u64>(), d in prop::collection::vec(0.2f64..=1.0, 8)) {
        let u = haar(4, seed);
        let t = compose_lossy(&DiagonalLoss::new(d[..4].to_vec()).unwrap(), &u, &DiagonalLoss::new(d[4..].to_vec()).unwrap()).unwrap();
        let dec = decompose_losses(&t, LossGauge::Balanced).unwrap();
        prop_assert!(dec.u_abs.max_abs_diff(&u.abs()).unwrap() < 1e-10);
        prop_assert!(doubly_stochastic_residual(&dec.u_abs) < 1e-10);
        let eta = |i: usize, j: usize| (dec.d_in.amplitudes()[i] * dec.d_out.amplitudes()[j]).powi(2);
        prop_assert!((eta(1, 2) - (d[1] * d[6]).powi(2)).abs() < 1e-10);
    }

    #[test]
    fn phases_of_genuine_unitaries(seed in any::<u64>()) {
        let u = haar(3, seed);
        let rec = reconstruct_phases_3mode(&u.abs()).unwrap();
        prop_assert!(rec.unitarity_residual < 1e-6);
        prop_assert!(rec.conjugate_branch().unitarity_residual().unwrap() < 1e-6);
        prop_assert!(rec.matrix.abs().max_abs_diff(&u.abs()).unwrap() < 1e-6);
    }

    #[test]
    fn concatenated_fit_is_exact_on_its_model(seed in any::<u64>(), r in 0.05f64..0.95) {
        let u = direct_sum_and_chain(
            4,
            &[vec![Placement::new(haar(3, seed), 0)], vec![Placement::new(beam_splitter(r).unwrap(), 2)]],
        )
        .unwrap();
        let fit = fit_concatenated_model(&u.abs()).unwrap();
        prop_assert!((fit.reflectivity - r).abs() < 1e-9, "{} vs {r}", fit.reflectivity);
        prop_assert!((fit.fidelity - 1.0).abs() < 1e-9);
    }

    #[test]
    fn total_error_identity(ga in 0.0f64..0.2, gb in 0.0f64..0.4, gc in 0.0f64..0.2, gd in 0.0f64..0.4,
                            r1 in 0.3f64..0.7, r2 in 0.3f64..0.7) {
        let cs = CorrelatorSet::new([ga, gb, gc, gd], [1e-3; 4], r1, r2).unwrap();
        let c = central_values(&cs).unwrap();
        prop_assume!(c.v0 + ga > 0.0);
        let combined = c.eps_indist + (1.0 - c.eps_indist) * c.eps_multi;
        prop_assert!((c.eps_tot - combined).abs() < 1e-12);
    }

    #[test]
    fn exact_uncertainties_match_finite_differences(ga in 0.01f64..0.1, gb in 0.05f64..0.3, gc in 0.01f64..0.1,
                                                   gd in 0.05f64..0.3, se in prop::collection::vec(1e-4f64..5e-3, 4)) {
        let cs = CorrelatorSet::new([ga, gb, gc, gd], [se[0], se[1], se[2], se[3]], 0.5, 0.5).unwrap();
        let c = central_values(&cs).unwrap();
        prop_assume!(c.v0 + ga > 0.05 && c.v0 + ga < 1.0);
        let exact = propagate_uncertainty(&cs, SeConvention::Exact).unwrap().to_array();
        let fd = finite_difference_uncertainty(&cs, 1e-6).unwrap().to_array();
        for (a, b) in exact.iter().zip(fd) {
            prop_assert!((a - b).abs() <= 1e-6 * b.abs().max(1e-9), "{a} vs {b}");
        }
    }
}

#[test]
fn obb_and_sbb_agree_to_first_order() {
    let f = fourier_matrix(3).unwrap();
    let h = HeraldSpec::default_for(&f).unwrap();
    let eps = 1e-3;
    let run = |m| {
        heralded_distillation(&f, &PhotonSourceModel::uniform(m, 3, eps).unwrap(), &h)
            .unwrap()
            .conditional_error
    };
    let diff = (run(NoiseModel::Obb) - run(NoiseModel::Sbb)).abs();
    assert!(diff / (eps * eps) < 5.0, "{}", diff / (eps * eps));
}

#[test]
fn perfect_photons_and_permanent_oracle() {
    let f = fourier_matrix(3).unwrap();
    let h = HeraldSpec::default_for(&f).unwrap();
    let r = heralded_distillation(
        &f,
        &PhotonSourceModel::uniform(NoiseModel::Obb, 3, 0.0).unwrap(),
        &h,
    )
    .unwrap();
    assert_eq!(r.conditional_error, 0.0);
    // Only the (1,1,1) outcome passes a (1,1) herald with three photons.
    let p0 = permanent(&f).unwrap().norm_sqr();
    assert!((r.herald_probability - p0).abs() < 1e-12);
}

#[test]
fn balanced_splitter_closed_form() {
    // Two-photon brute force: the herald fires only when exactly one photon is bad,
    // which leaves the bad photon in the output with probability 1/(2 − ε).
    let bs = beam_splitter(0.5).unwrap();
    let h = HeraldSpec::new(vec![0], vec![1], 1).unwrap();
    for eps in [0.01, 0.1, 0.3] {
        let r = heralded_distillation(
            &bs,
            &PhotonSourceModel::uniform(NoiseModel::Obb, 2, eps).unwrap(),
            &h,
        )
        .unwrap();
        assert!((r.conditional_error - 1.0 / (2.0 - eps)).abs() < 1e-12);
    }
}

#[test]
fn lower_bound_holds_on_random_networks() {
    for seed in [1, 2, 3] {
        let scan = optimality_scan(3, 60, 1e-4, seed).unwrap();
        assert!(scan.min_ratio >= 0.99, "seed {seed}: {}", scan.min_ratio);
    }
}

#[test]
fn sbb_inputs_differ_at_second_order() {
    for k in 1..=30 {
        let eps = 0.005 * k as f64;
        let s = sbb_from_obb(eps, eps / 3.0).unwrap();
        assert!((s.eps_indist - eps).abs() <= 2.0 * eps * eps, "eps {eps}");
    }
    assert_eq!(sbb_from_obb(0.0, 0.0).unwrap().eps_indist, 0.0);
}

#[test]
fn no_multiphoton_reduces_to_visibility() {
    let cs = CorrelatorSet::new([0.0, 0.1, 0.0, 0.15], [1e-3; 4], 0.5, 0.5).unwrap();
    let c = central_values(&cs).unwrap();
    assert_eq!(c.eps_multi, 0.0);
    assert_eq!(c.eps_multi_out, 0.0);
    assert!((c.eps_indist - (1.0 - c.v0.sqrt())).abs() < 1e-15);
    assert!((c.eps_tot - c.eps_indist).abs() < 1e-15);
}

#[test]
fn cost_grows_with_physical_error() {
    let params = ResourceParams::default();
    for n in [1usize, 2, 5, 12] {
        let mut last = 0.0;
        for k in 1..200 {
            let eps = 2.0 * n as f64 * params.p_th * k as f64 / 200.0;
            if eps > 1.0 {
                break;
            }
            let c = logical_cost(eps, n, &params).unwrap();
            assert!(c > last, "N={n} eps={eps}");
            last = c;
        }
    }
}

#[test]
fn optimal_size_is_monotone() {
    let params = ResourceParams::default();
    assert_eq!(optimal_scheme_size(1e-14, &params).unwrap().n_star, 1);
    let mut last = 1;
    for k in 0..120 {
        let eps = 1e-6 * 10f64.powf(k as f64 / 30.0);
        let n = optimal_scheme_size(eps, &params).unwrap().n_star;
        assert!(n >= last, "eps {eps}: {n} < {last}");
        last = n;
    }
}

#[test]
fn validity_ratio_matches_binomial_expansion() {
    for n in 2..=20usize {
        for eps in [1e-3, 1e-2, 0.05, 0.2] {
            let single = n as f64 * eps * (1.0 - eps).powi(n as i32 - 1);
            let direct = (1.0 - (1.0 - eps).powi(n as i32) - single) / single;
            let r = linear_validity_ratio(eps, n).unwrap();
            assert!(
                (r - direct).abs() <= 1e-8 * direct,
                "N={n} eps={eps}: {r} vs {direct}"
            );
        }
    }
}
