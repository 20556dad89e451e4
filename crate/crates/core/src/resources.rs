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

//! Photon cost of a logical qubit when error correction is combined with
//! photon distillation.
//!
//! A surface code of distance `d` needs `d³` resource states of `b` photons
//! each and reaches `p_L = (p/p_th)^{d/2}`. Distillation of size `N` divides
//! the Pauli error by `N` and multiplies the photon cost by `4N`.

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Photons per resource state: 20 three-qubit GHZ states of 324 photons.
pub const DEFAULT_B: f64 = 6480.0;
pub const DEFAULT_P_TH: f64 = 2.1e-3;
pub const DEFAULT_P_L: f64 = 1e-10;
/// Level below which more than one error among `N` photons is negligible.
pub const LINEAR_VALIDITY_LEVEL: f64 = 0.02;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMode {
    #[default]
    Continuous,
    /// Rounds the distance up to the next integer.
    IntegerCeiling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceParams {
    pub b: f64,
    pub p_th: f64,
    pub p_l_target: f64,
    pub n_grid: Vec<usize>,
    pub distance_mode: DistanceMode,
}

impl Default for ResourceParams {
    fn default() -> Self {
        Self {
            b: DEFAULT_B,
            p_th: DEFAULT_P_TH,
            p_l_target: DEFAULT_P_L,
            n_grid: (1..=64).collect(),
            distance_mode: DistanceMode::Continuous,
        }
    }
}

impl ResourceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_th > 0.0 && self.p_th < 1.0) {
            return Err(Error::OutOfRange(format!(
                "threshold {} must lie in (0, 1)",
                self.p_th
            )));
        }
        if !(self.p_l_target > 0.0 && self.p_l_target < self.p_th) {
            return Err(Error::OutOfRange(format!(
                "target {} must lie in (0, p_th)",
                self.p_l_target
            )));
        }
        if !(self.b >= 1.0 && self.b.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "photons per state {} must be at least 1",
                self.b
            )));
        }
        if self.n_grid.is_empty() || self.n_grid.contains(&0) {
            return Err(Error::OutOfRange(
                "distillation sizes must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// First-order Pauli error of a fusion between photons with error `ε`: `ε/2`.
pub fn pauli_error(eps_indist: f64) -> Result<f64> {
    check_probability("indistinguishability error", eps_indist)?;
    Ok(eps_indist / 2.0)
}

/// `d = 2 ln p_L / ln(p/p_th)`.
pub fn required_distance(p_error: f64, params: &ResourceParams) -> Result<f64> {
    params.validate()?;
    if p_error.is_nan() || p_error < 0.0 {
        return Err(Error::OutOfRange(format!(
            "physical error {p_error} must be nonnegative"
        )));
    }
    if p_error >= params.p_th {
        return Err(Error::AboveThreshold {
            p_error,
            threshold: params.p_th,
        });
    }
    if p_error == 0.0 {
        return Ok(0.0);
    }
    let d = 2.0 * params.p_l_target.ln() / (p_error / params.p_th).ln();
    Ok(match params.distance_mode {
        DistanceMode::Continuous => d,
        DistanceMode::IntegerCeiling => d.ceil(),
    })
}

/// Hardware multiplier of a size-`N` scheme; `N = 1` means no distillation.
pub fn cost_multiplier(n: usize) -> f64 {
    if n <= 1 {
        1.0
    } else {
        4.0 * n as f64
    }
}

/// Photons per logical qubit, `multiplier(N) · b · d(ε/(2N))³`.
pub fn logical_cost(eps_indist: f64, n: usize, params: &ResourceParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange(
            "distillation size must be positive".into(),
        ));
    }
    let p = pauli_error(eps_indist)? / n as f64;
    let d = required_distance(p, params)?;
    Ok(cost_multiplier(n) * params.b * d.powi(3))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalScheme {
    pub eps_indist: f64,
    pub n_star: usize,
    pub cost: f64,
    /// Cost without distillation; absent when that is above threshold.
    pub cost_n1: Option<f64>,
    /// `cost / cost_n1`.
    pub ratio: Option<f64>,
    /// Smallest feasible size on the grid.
    pub feasible_from: usize,
    /// Whether the optimum sits on the largest grid size.
    pub at_grid_edge: bool,
}

/// Cheapest distillation size on the grid; the smallest size wins ties.
pub fn optimal_scheme_size(eps_indist: f64, params: &ResourceParams) -> Result<OptimalScheme> {
    params.validate()?;
    let mut best: Option<(usize, f64)> = None;
    let mut feasible_from = None;
    for &n in &params.n_grid {
        match logical_cost(eps_indist, n, params) {
            Ok(c) => {
                feasible_from = Some(feasible_from.map_or(n, |f: usize| f.min(n)));
                if best.is_none_or(|(bn, bc)| c < bc || (c == bc && n < bn)) {
                    best = Some((n, c));
                }
            }
            Err(Error::AboveThreshold { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let Some((n_star, cost)) = best else {
        let max_n = params.n_grid.iter().copied().max().unwrap_or(1);
        return Err(Error::AboveThreshold {
            p_error: eps_indist / 2.0 / max_n as f64,
            threshold: params.p_th,
        });
    };
    let cost_n1 = logical_cost(eps_indist, 1, params).ok();
    Ok(OptimalScheme {
        eps_indist,
        n_star,
        cost,
        cost_n1,
        ratio: cost_n1.map(|c1| cost / c1),
        feasible_from: feasible_from.unwrap_or(n_star),
        at_grid_edge: Some(&n_star) == params.n_grid.iter().max(),
    })
}

/// `x = p/p_th` at which size `N` costs exactly as much as no distillation:
/// `4N (ln x / ln(x/N))³ = 1`, i.e. `x = N^{−k/(1−k)}` with `k = (4N)^{−1/3}`.
pub fn crossover_closed_form(n: usize) -> f64 {
    let k = (4.0 * n as f64).powf(-1.0 / 3.0);
    (-(k / (1.0 - k)) * (n as f64).ln()).exp()
}

/// The same crossover by bisection on the cost ratio, independent of the closed form.
pub fn crossover_by_bisection(n: usize) -> f64 {
    let nf = n as f64;
    let f = |x: f64| 4.0 * nf * (x.ln() / (x / nf).ln()).powi(3) - 1.0;
    let (mut lo, mut hi) = (1e-300f64, 1.0 - 1e-15);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeBoundary {
    pub n: usize,
    pub crossover_closed_form: f64,
    pub crossover_bisection: f64,
    /// Distillation of size `N` keeps error correction below threshold up
    /// to `p_error = N · p_th`.
    pub threshold_multiplier: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeBoundaries {
    /// Below this `p_error/p_th` error correction alone is cheapest.
    pub p_cross_over_pth: f64,
    pub first_beating_n: usize,
    pub per_n: Vec<SizeBoundary>,
}

/// The cost ratio does not depend on `b` or `p_L`, so only the grid matters.
pub fn regime_boundaries(params: &ResourceParams) -> Result<RegimeBoundaries> {
    params.validate()?;
    let per_n: Vec<SizeBoundary> = params
        .n_grid
        .iter()
        .filter(|&&n| n >= 2)
        .map(|&n| SizeBoundary {
            n,
            crossover_closed_form: crossover_closed_form(n),
            crossover_bisection: crossover_by_bisection(n),
            threshold_multiplier: n as f64,
        })
        .collect();
    let best = per_n
        .iter()
        .min_by(|a, b| a.crossover_bisection.total_cmp(&b.crossover_bisection))
        .ok_or_else(|| Error::OutOfRange("grid has no distillation size above 1".into()))?;
    Ok(RegimeBoundaries {
        p_cross_over_pth: best.crossover_bisection,
        first_beating_n: best.n,
        per_n,
    })
}

fn ln_choose(n: usize, k: usize) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// Probability of several versus exactly one error among `N` photons,
/// summed term by term so small `ε` is free of cancellation.
pub fn linear_validity_ratio(eps: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("validity needs N >= 2, got {n}")));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::OutOfRange(format!("error {eps} must lie in [0, 1)")));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let single = n as f64 * eps * (1.0 - eps).powi(n as i32 - 1);
    let many: f64 = (2..=n)
        .map(|k| (ln_choose(n, k) + k as f64 * eps.ln() + (n - k) as f64 * (-eps).ln_1p()).exp())
        .sum();
    Ok(many / single)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossBudget {
    pub l_prime: f64,
    pub reduction_percent: f64,
}

/// `l′ = G/(G+1) · l`.
pub fn loss_budget_adjust(l: f64, gates: f64) -> Result<LossBudget> {
    check_probability("component loss", l)?;
    if !(gates >= 1.0 && gates.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "gates per photon {gates} must be at least 1"
        )));
    }
    let factor = gates / (gates + 1.0);
    Ok(LossBudget {
        l_prime: factor * l,
        reduction_percent: 100.0 * (1.0 - factor),
    })
}

/// Cost order `(ε/ε′)^γ` of a distillation scheme. Tabulated exponents:
/// 3 for concatenated two-photon schemes, 2 and 1 for larger schemes.
pub fn gamma_cost(eps: f64, eps_out: f64, gamma: f64) -> Result<f64> {
    if !(eps_out > 0.0 && eps_out <= eps) {
        return Err(Error::OutOfRange(format!(
            "need 0 < eps' <= eps, got eps = {eps}, eps' = {eps_out}"
        )));
    }
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "exponent {gamma} must be positive"
        )));
    }
    Ok((eps / eps_out).powf(gamma))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceKind {
    #[serde(rename = "P")]
    Probabilistic,
    #[serde(rename = "D")]
    Deterministic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceEntry {
    pub label: String,
    pub year: u32,
    #[serde(rename = "type")]
    pub kind: SourceKind,
    pub eps_indist: f64,
}

/// Reads `label,year,type,eps_indist` rows; `#` lines are comments.
pub fn parse_sources(text: &str) -> Result<Vec<SourceEntry>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize::<SourceEntry>() {
        let row = row.map_err(|e| Error::Parse(e.to_string()))?;
        if !(row.eps_indist > 0.0 && row.eps_indist < 1.0) {
            return Err(Error::OutOfRange(format!(
                "source {} error {}",
                row.label, row.eps_indist
            )));
        }
        out.push(row);
    }
    Ok(out)
}

pub fn default_sources() -> Vec<SourceEntry> {
    parse_sources(crate::datasets::SOURCES_CSV).expect("bundled source table parses")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsolinePoint {
    #[serde(rename = "N")]
    pub n: usize,
    pub p_over_pth: f64,
    pub cost_ratio: f64,
    pub valid_linear: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsolineTable {
    pub reference_label: String,
    pub reference_n: usize,
    pub reference_cost: f64,
    pub points: Vec<IsolinePoint>,
}

/// Photon cost along each size-`N` isoline over the `p_error/p_th` grid,
/// normalized to the lowest-error source at its own optimum. Points above
/// the size-`N` threshold are omitted.
pub fn isoline_data(
    params: &ResourceParams,
    sources: &[SourceEntry],
    sizes: &[usize],
    p_over_pth: &[f64],
) -> Result<IsolineTable> {
    params.validate()?;
    let best = sources
        .iter()
        .min_by(|a, b| a.eps_indist.total_cmp(&b.eps_indist))
        .ok_or_else(|| Error::OutOfRange("no sources to normalize against".into()))?;
    let reference = optimal_scheme_size(best.eps_indist, params)?;
    let mut points = Vec::new();
    for &n in sizes {
        for &x in p_over_pth {
            let eps = 2.0 * x * params.p_th;
            if !(0.0..=1.0).contains(&eps) {
                continue;
            }
            let cost = match logical_cost(eps, n, params) {
                Ok(c) => c,
                Err(Error::AboveThreshold { .. }) => continue,
                Err(e) => return Err(e),
            };
            let valid_linear =
                n == 1 || (eps < 1.0 && linear_validity_ratio(eps, n)? <= LINEAR_VALIDITY_LEVEL);
            points.push(IsolinePoint {
                n,
                p_over_pth: x,
                cost_ratio: cost / reference.cost,
                valid_linear,
            });
        }
    }
    Ok(IsolineTable {
        reference_label: best.label.clone(),
        reference_n: reference.n_star,
        reference_cost: reference.cost,
        points,
    })
}

/// Logarithmically spaced grid, both ends included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
        .collect()
}
