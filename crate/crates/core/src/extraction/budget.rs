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

//! Visibilities and photon errors before and after distillation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::correlators::CorrelatorSet;
use crate::distill::NoiseModel;
use crate::error::{Error, Result};

/// Two-sided 95% Gaussian quantile.
pub const CI95: f64 = 1.96;

pub const DENOMINATOR_NOTE: &str =
    "output errors are normalized by sqrt(V0 + gA) throughout, matching the tabulated values and every uncertainty formula";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Visibility {
    pub value: f64,
    /// Set when the value falls outside `[0, 1]`; it is kept unclamped.
    pub out_of_range: bool,
}

/// `V = (R² + (1−R)² − g) / (2R(1−R))`.
pub fn raw_visibility(g: f64, reflectivity: f64) -> Result<Visibility> {
    let r = reflectivity;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange(format!(
            "reflectivity {r} must lie in (0, 1)"
        )));
    }
    let value = (r * r + (1.0 - r) * (1.0 - r) - g) / (2.0 * r * (1.0 - r));
    Ok(Visibility {
        value,
        out_of_range: !(0.0..=1.0).contains(&value),
    })
}

/// The eight derived quantities, in a fixed order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorFields {
    pub v0: f64,
    pub v1: f64,
    pub eps_multi: f64,
    pub eps_multi_out: f64,
    pub eps_tot: f64,
    pub eps_tot_out: f64,
    pub eps_indist: f64,
    pub eps_indist_out: f64,
}

impl ErrorFields {
    pub const NAMES: [&'static str; 8] = [
        "v0",
        "v1",
        "eps_multi",
        "eps_multi_out",
        "eps_tot",
        "eps_tot_out",
        "eps_indist",
        "eps_indist_out",
    ];

    pub fn to_array(&self) -> [f64; 8] {
        [
            self.v0,
            self.v1,
            self.eps_multi,
            self.eps_multi_out,
            self.eps_tot,
            self.eps_tot_out,
            self.eps_indist,
            self.eps_indist_out,
        ]
    }

    fn from_array(a: [f64; 8]) -> Self {
        Self {
            v0: a[0],
            v1: a[1],
            eps_multi: a[2],
            eps_multi_out: a[3],
            eps_tot: a[4],
            eps_tot_out: a[5],
            eps_indist: a[6],
            eps_indist_out: a[7],
        }
    }
}

/// Central values of every derived quantity.
pub fn central_values(cs: &CorrelatorSet) -> Result<ErrorFields> {
    let v0 = raw_visibility(cs.g_b, cs.r1)?.value;
    let v1 = raw_visibility(cs.g_d, cs.r2)?.value;
    let (ga, gc) = (cs.g_a, cs.g_c);
    let radicand = v0 + ga;
    if radicand <= 0.0 {
        return Err(Error::NegativeRadicand("V0 + gA"));
    }
    let root = radicand.sqrt();
    let out = v1 + ga / 2.0 + gc / 2.0;
    Ok(ErrorFields {
        v0,
        v1,
        eps_multi: ga / 2.0,
        eps_multi_out: gc / 2.0,
        eps_tot: 1.0 - root,
        eps_tot_out: 1.0 - out / root,
        eps_indist: 1.0 - root / (1.0 - ga / 2.0),
        eps_indist_out: 1.0 - out / ((1.0 - gc / 2.0) * root),
    })
}

/// Which formula is used for the standard error of `ε_tot`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeConvention {
    /// `SE² = (SE₀² + SE_A²)/(V₀ + g_A)`, twice the first-order value.
    #[default]
    Conservative,
    /// The exact first-order derivative, a factor of two smaller.
    Exact,
}

impl std::str::FromStr for SeConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "conservative" => Ok(Self::Conservative),
            "exact" => Ok(Self::Exact),
            other => Err(Error::Parse(format!("unknown SE convention {other:?}"))),
        }
    }
}

/// First-order standard errors. The reflectivity uncertainties are
/// neglected.
pub fn propagate_uncertainty(cs: &CorrelatorSet, convention: SeConvention) -> Result<ErrorFields> {
    let c = central_values(cs)?;
    let (ga, gc, v0, v1) = (cs.g_a, cs.g_c, c.v0, c.v1);
    let se0 = cs.se_b / (2.0 * cs.r1 * (1.0 - cs.r1));
    let se1 = cs.se_d / (2.0 * cs.r2 * (1.0 - cs.r2));
    let (sa, sc) = (cs.se_a, cs.se_c);
    let s = ga + v0;
    let rs = s.sqrt();
    let quad = |terms: &[(f64, f64)]| {
        terms
            .iter()
            .map(|(d, e)| (d * e).powi(2))
            .sum::<f64>()
            .sqrt()
    };

    let tot_var = (se0 * se0 + sa * sa) / s;
    let eps_tot = match convention {
        SeConvention::Conservative => tot_var.sqrt(),
        SeConvention::Exact => (tot_var / 4.0).sqrt(),
    };
    let eps_indist = quad(&[
        (1.0 / ((ga - 2.0) * rs), se0),
        ((-2.0 * v0 - ga - 2.0) / ((ga - 2.0).powi(2) * rs), sa),
    ]);
    let k = 4.0 * s * rs;
    let eps_tot_out = quad(&[
        ((2.0 * v1 + ga + gc) / k, se0),
        ((-ga - 2.0 * v0 + gc + 2.0 * v1) / k, sa),
        (-1.0 / rs, se1),
        (-1.0 / (2.0 * rs), sc),
    ]);
    let kk = 2.0 * (gc - 2.0) * s * rs;
    let eps_indist_out = quad(&[
        ((-2.0 * v1 - ga - gc) / kk, se0),
        ((ga + 2.0 * v0 - gc - 2.0 * v1) / kk, sa),
        (2.0 / ((gc - 2.0) * rs), se1),
        ((-ga - 2.0 * v1 - 2.0) / ((2.0 - gc).powi(2) * rs), sc),
    ]);
    Ok(ErrorFields {
        v0: se0,
        v1: se1,
        eps_multi: sa / 2.0,
        eps_multi_out: sc / 2.0,
        eps_tot,
        eps_tot_out,
        eps_indist,
        eps_indist_out,
    })
}

/// Standard errors from a central finite-difference Jacobian of
/// [`central_values`], as an independent check of the closed forms.
pub fn finite_difference_uncertainty(cs: &CorrelatorSet, step: f64) -> Result<ErrorFields> {
    let g = cs.correlators();
    let se = cs.standard_errors();
    let mut var = [0.0; 8];
    for k in 0..4 {
        let mut up = g;
        let mut down = g;
        up[k] += step;
        down[k] -= step;
        let fu = central_values(&cs.with_correlators(up))?.to_array();
        let fd = central_values(&cs.with_correlators(down))?.to_array();
        for f in 0..8 {
            let d = (fu[f] - fd[f]) / (2.0 * step);
            var[f] += (d * se[k]).powi(2);
        }
    }
    Ok(ErrorFields::from_array(var.map(f64::sqrt)))
}

/// Standard deviations of the derived quantities under independent
/// Gaussian resampling of the four correlators.
pub fn monte_carlo_uncertainty(cs: &CorrelatorSet, draws: usize, seed: u64) -> Result<ErrorFields> {
    if draws < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: draws,
        });
    }
    let g = cs.correlators();
    let normals = cs
        .standard_errors()
        .iter()
        .zip(&g)
        .map(|(&s, &m)| {
            Normal::new(m, s).map_err(|_| Error::OutOfRange(format!("standard error {s}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = [0.0; 8];
    let mut sum_sq = [0.0; 8];
    let center = central_values(cs)?.to_array();
    for _ in 0..draws {
        let mut x = [0.0; 4];
        for (slot, n) in x.iter_mut().zip(&normals) {
            *slot = n.sample(&mut rng);
        }
        let f = central_values(&cs.with_correlators(x))?.to_array();
        for k in 0..8 {
            let d = f[k] - center[k];
            sum[k] += d;
            sum_sq[k] += d * d;
        }
    }
    let n = draws as f64;
    Ok(ErrorFields::from_array(std::array::from_fn(|k| {
        let mean = sum[k] / n;
        ((sum_sq[k] - n * mean * mean) / (n - 1.0)).max(0.0).sqrt()
    })))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    pub fn new(value: f64, se: f64) -> Self {
        Self {
            value,
            se,
            ci_low: value - CI95 * se,
            ci_high: value + CI95 * se,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub model: NoiseModel,
    pub se_convention: SeConvention,
    pub v0: Estimate,
    pub v1: Estimate,
    pub eps_multi: Estimate,
    pub eps_multi_out: Estimate,
    pub eps_tot: Estimate,
    pub eps_tot_out: Estimate,
    pub eps_indist: Estimate,
    pub eps_indist_out: Estimate,
    pub warnings: Vec<String>,
}

impl ErrorBudget {
    pub fn values(&self) -> ErrorFields {
        ErrorFields {
            v0: self.v0.value,
            v1: self.v1.value,
            eps_multi: self.eps_multi.value,
            eps_multi_out: self.eps_multi_out.value,
            eps_tot: self.eps_tot.value,
            eps_tot_out: self.eps_tot_out.value,
            eps_indist: self.eps_indist.value,
            eps_indist_out: self.eps_indist_out.value,
        }
    }
}

/// Errors under the orthogonal-bad-bit reading, with standard errors from
/// [`propagate_uncertainty`].
pub fn extract_errors(cs: &CorrelatorSet, convention: SeConvention) -> Result<ErrorBudget> {
    let c = central_values(cs)?;
    let s = propagate_uncertainty(cs, convention)?;
    let mut warnings = vec![DENOMINATOR_NOTE.to_string()];
    for (name, v) in [("V0", c.v0), ("V1", c.v1)] {
        if !(0.0..=1.0).contains(&v) {
            warnings.push(format!(
                "{name} = {v} lies outside [0, 1] and is kept unclamped"
            ));
        }
    }
    Ok(ErrorBudget {
        model: NoiseModel::Obb,
        se_convention: convention,
        v0: Estimate::new(c.v0, s.v0),
        v1: Estimate::new(c.v1, s.v1),
        eps_multi: Estimate::new(c.eps_multi, s.eps_multi),
        eps_multi_out: Estimate::new(c.eps_multi_out, s.eps_multi_out),
        eps_tot: Estimate::new(c.eps_tot, s.eps_tot),
        eps_tot_out: Estimate::new(c.eps_tot_out, s.eps_tot_out),
        eps_indist: Estimate::new(c.eps_indist, s.eps_indist),
        eps_indist_out: Estimate::new(c.eps_indist_out, s.eps_indist_out),
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbbErrors {
    pub eps_indist: f64,
    pub eps_indist_out: f64,
}

/// Similar-bad-bit errors with the same purity and the same input–output
/// overlap as an orthogonal-bad-bit pair `(ε, ε′)`.
pub fn sbb_from_obb(eps_obb: f64, eps_out_obb: f64) -> Result<SbbErrors> {
    let purity = (1.0 - eps_obb).powi(2);
    let disc = 2.0 * purity - 1.0;
    if disc < 0.0 {
        return Err(Error::NoRealRoot(format!("purity {purity} is below 1/2")));
    }
    let eps = (1.0 - disc.sqrt()) / 2.0;
    let overlap = (1.0 - eps_obb) * (1.0 - eps_out_obb);
    let den = 1.0 - 2.0 * eps;
    if den.abs() < 1e-15 {
        return Err(Error::NoRealRoot(
            "input error of one half leaves the output undetermined".into(),
        ));
    }
    Ok(SbbErrors {
        eps_indist: eps,
        eps_indist_out: (1.0 - eps - overlap) / den,
    })
}

pub fn extract_errors_sbb(budget: &ErrorBudget) -> Result<SbbErrors> {
    sbb_from_obb(budget.eps_indist.value, budget.eps_indist_out.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaSensitivity {
    pub zeta_star: f64,
    pub min_average: f64,
    pub estimate: f64,
}

/// `ε̄(ζ) = ζ ε/2 + ε′/(2ζ)` for an unknown ratio `ζ` of mean photon numbers.
pub fn weighted_multiphoton_error(eps_multi: f64, eps_multi_out: f64, zeta: f64) -> f64 {
    zeta * eps_multi / 2.0 + eps_multi_out / (2.0 * zeta)
}

pub fn zeta_sensitivity(eps_multi: f64, eps_multi_out: f64) -> Result<ZetaSensitivity> {
    if eps_multi <= 0.0 {
        return Err(Error::ZeroDenominator("input multiphoton error"));
    }
    if eps_multi_out <= 0.0 {
        return Err(Error::OutOfRange(
            "output multiphoton error must be positive".into(),
        ));
    }
    Ok(ZetaSensitivity {
        zeta_star: (eps_multi_out / eps_multi).sqrt(),
        min_average: (eps_multi * eps_multi_out).sqrt(),
        estimate: (eps_multi + eps_multi_out) / 2.0,
    })
}
