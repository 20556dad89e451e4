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

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::report::{num, read_input, RunReport, Table};
use super::{
    CharacterizeArgs, ExtractArgs, ExtractModel, Outcome, ResourcesArgs, SimulateArgs,
    UnitarySource,
};
use crate::datasets;
use crate::distill::{
    combine_total_error, heralded_distillation, nonuniform_loss_pipeline, optimality_scan,
    DistillationReport, HeraldSpec, NonuniformLossResult, OptimalityScan, PhotonSourceModel,
};
use crate::error::{Error, Result};
use crate::extraction::{
    extract_errors, extract_errors_sbb, monte_carlo_uncertainty, zeta_sensitivity,
    CorrelatorSamples, CorrelatorSet, ErrorBudget, ErrorFields, Protocol, SampleStats, SbbErrors,
    ZetaSensitivity,
};
use crate::optics::{
    beam_splitter, compose_lossy, fourier_matrix, hadamard_matrix, ComplexMatrix, DiagonalLoss, C64,
};
use crate::resources::{
    default_sources, isoline_data, linear_validity_ratio, log_grid, loss_budget_adjust,
    optimal_scheme_size, parse_sources, regime_boundaries, required_distance, IsolineTable,
    LossBudget, OptimalScheme, RegimeBoundaries, ResourceParams, SourceEntry,
};
use crate::tomography::{
    characterize as characterize_counts, mc_reflectivity_uncertainty, CharacterizationResult,
    CharacterizeOptions, CountMatrix, ReflectivitySpread,
};

fn parse_complex_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = record
            .iter()
            .map(|f| {
                f.replace(' ', "")
                    .parse::<C64>()
                    .map_err(|_| Error::Parse(format!("{f:?} is not a complex number")))
            })
            .collect::<Result<Vec<C64>>>()?;
        rows.push(row);
    }
    ComplexMatrix::from_rows(rows)
}

fn parse_amplitudes(text: &str) -> Result<DiagonalLoss> {
    let values = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split([',', ' ', '\t']))
        .filter(|f| !f.trim().is_empty())
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("{f:?} is not a number")))
        })
        .collect::<Result<Vec<f64>>>()?;
    DiagonalLoss::new(values)
}

fn load_losses(
    path: Option<&Path>,
    digests: &mut BTreeMap<String, String>,
) -> Result<Option<DiagonalLoss>> {
    path.map(|p| read_input(p, digests).and_then(|t| parse_amplitudes(&t)))
        .transpose()
}

fn build_network(
    a: &SimulateArgs,
    digests: &mut BTreeMap<String, String>,
) -> Result<ComplexMatrix> {
    let u = match a.unitary {
        UnitarySource::Fourier => fourier_matrix(a.n)?,
        UnitarySource::Hadamard => hadamard_matrix(a.n)?,
        UnitarySource::File => {
            let path = a.unitary_file.as_deref().ok_or_else(|| {
                Error::OutOfRange("`--unitary file` needs `--unitary-file`".into())
            })?;
            let m = parse_complex_matrix(&read_input(path, digests)?)?;
            if m.rows() != a.n || m.cols() != a.n {
                return Err(Error::DimensionMismatch(format!(
                    "file holds a {}x{} matrix, expected n = {}",
                    m.rows(),
                    m.cols(),
                    a.n
                )));
            }
            m.clone().into_unitary().or_else(|_| m.into_sub_unitary())?
        }
    };
    if a.nonuniform_loss {
        return Ok(u);
    }
    let d_in = load_losses(a.loss_in.as_deref(), digests)?;
    let d_out = load_losses(a.loss_out.as_deref(), digests)?;
    if d_in.is_none() && d_out.is_none() {
        return Ok(u);
    }
    compose_lossy(
        &d_in.unwrap_or_else(|| DiagonalLoss::lossless(a.n)),
        &u,
        &d_out.unwrap_or_else(|| DiagonalLoss::lossless(a.n)),
    )
}

fn build_herald(a: &SimulateArgs, t: &ComplexMatrix) -> Result<HeraldSpec> {
    match (&a.herald_modes, &a.herald_counts) {
        (None, None) if a.output_mode.is_none() => HeraldSpec::default_for(t),
        (Some(modes), counts) => {
            let counts = counts.clone().unwrap_or_else(|| vec![1; modes.len()]);
            let output = match a.output_mode {
                Some(m) => m,
                None => (0..t.cols())
                    .find(|m| !modes.contains(m))
                    .ok_or_else(|| Error::OutOfRange("every mode is measured".into()))?,
            };
            HeraldSpec::new(modes.clone(), counts, output)
        }
        _ => Err(Error::OutOfRange(
            "herald flags need `--herald-modes`".into(),
        )),
    }
}

#[derive(Serialize)]
struct SimulatePoint {
    eps: f64,
    eps_out: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_tot_out: Option<f64>,
    distillation: DistillationReport,
}

#[derive(Serialize)]
struct SimulateResults {
    modes: usize,
    herald: HeraldSpec,
    points: Vec<SimulatePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimality_scan: Option<OptimalityScan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nonuniform_loss: Option<Vec<NonuniformLossResult>>,
}

pub fn simulate(a: &SimulateArgs, seed: u64) -> Result<Outcome> {
    if a.n < 2 {
        return Err(Error::InvalidDimension(format!(
            "need at least two modes, got {}",
            a.n
        )));
    }
    let mut digests = BTreeMap::new();
    let t = build_network(a, &mut digests)?;
    let herald = build_herald(a, &t)?;
    let mut points = Vec::new();
    for &eps in &a.eps {
        let source = PhotonSourceModel::uniform(a.model.into(), a.n, eps)?;
        let report = heralded_distillation(&t, &source, &herald)?;
        let eps_tot_out = a
            .eps_multi
            .map(|m| combine_total_error(report.conditional_error, m))
            .transpose()?;
        points.push(SimulatePoint {
            eps,
            eps_out: report.conditional_error,
            eps_tot_out,
            distillation: report,
        });
    }
    let optimality_scan = a
        .scan_optimality
        .then(|| optimality_scan(a.n, a.trials, a.scan_eps, seed))
        .transpose()?;
    let nonuniform_loss = if a.nonuniform_loss {
        let r = datasets::characterization_reference();
        let d_in = match load_losses(a.loss_in.as_deref(), &mut digests)? {
            Some(d) => d,
            None => DiagonalLoss::new(r.d_in.clone())?,
        };
        let d_out = match load_losses(a.loss_out.as_deref(), &mut digests)? {
            Some(d) => d,
            None => DiagonalLoss::new(r.d_out.clone())?,
        };
        let u_b = beam_splitter(0.5)?;
        let u_d = r.u_d_exp_matrix();
        Some(
            a.eps
                .iter()
                .map(|&e| nonuniform_loss_pipeline(&d_in, &u_d, &d_out, &u_b, e))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let mut table = Table::new(&["eps", "eps_out", "herald_probability", "reduction_factor"]);
    if nonuniform_loss.is_some() {
        table
            .header
            .extend(["eps_out_nonuniform", "eps_out_uniform_loss"].map(String::from));
    }
    for (k, p) in points.iter().enumerate() {
        let mut row = vec![
            num(p.eps),
            num(p.eps_out),
            num(p.distillation.herald_probability),
            p.distillation.reduction_factor.map(num).unwrap_or_default(),
        ];
        if let Some(nl) = &nonuniform_loss {
            row.extend([num(nl[k].eps_out), num(nl[k].eps_out_uniform)]);
        }
        table.push(row);
    }

    let results = SimulateResults {
        modes: a.n,
        herald,
        points,
        optimality_scan,
        nonuniform_loss,
    };
    let mut report = RunReport::new(
        "simulate",
        serde_json::json!({ "flags": a, "seed": seed }),
        results,
    )?;
    report.input_digests = digests;
    Ok(Outcome { report, table })
}

#[derive(Serialize)]
struct CharacterizedFile {
    path: String,
    modes: usize,
    s_norm: u64,
    characterization: CharacterizationResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    reflectivity_spread: Option<ReflectivitySpread>,
}

pub fn characterize(a: &CharacterizeArgs, seed: u64) -> Result<Outcome> {
    let mut digests = BTreeMap::new();
    let opts = CharacterizeOptions {
        gauge: a.gauge.0,
        fit_model: a.fit_model,
        phases: a.phases,
    };
    let mut files = Vec::new();
    let mut table = Table::new(&["file", "input", "output", "eta", "loss_db"]);
    for (k, path) in a.counts.iter().enumerate() {
        let counts = CountMatrix::parse(&read_input(path, &mut digests)?)?;
        let res = characterize_counts(&counts, &opts)?;
        let spread = (counts.rows() == 2 && a.mc_draws > 0)
            .then(|| mc_reflectivity_uncertainty(&counts, a.mc_draws, seed))
            .transpose()?;
        for (i, (eta_row, db_row)) in res
            .transmission
            .eta
            .iter()
            .zip(&res.transmission.loss_db)
            .enumerate()
        {
            for (j, (eta, db)) in eta_row.iter().zip(db_row).enumerate() {
                table.push(vec![
                    k.to_string(),
                    i.to_string(),
                    j.to_string(),
                    num(*eta),
                    num(*db),
                ]);
            }
        }
        files.push(CharacterizedFile {
            path: path.display().to_string(),
            modes: counts.rows(),
            s_norm: counts.s_norm,
            characterization: res,
            reflectivity_spread: spread,
        });
    }
    if let Some(p) = &a.eta_csv {
        std::fs::write(p, table.to_csv()?)
            .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    }
    let mut report = RunReport::new(
        "characterize",
        serde_json::json!({ "flags": a, "seed": seed }),
        &files,
    )?;
    report.input_digests = digests;
    if matches!(opts.gauge, crate::tomography::LossGauge::Balanced) {
        report
            .warnings
            .push("input and output losses share one free scale; the balanced gauge fixes equal geometric means".into());
    }
    Ok(Outcome { report, table })
}

#[derive(Deserialize)]
struct SummaryRow {
    protocol: String,
    n: usize,
    mean: f64,
    sd: f64,
    se: f64,
}

fn read_statistics(text: &str) -> Result<BTreeMap<Protocol, SampleStats>> {
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Error::Parse("correlator file is empty".into()))?;
    let mut stats = BTreeMap::new();
    if header.contains("timestamp") {
        let samples = CorrelatorSamples::parse(text)?;
        for p in Protocol::ALL {
            stats.insert(p, samples.stats(p)?);
        }
    } else if header.contains("mean") {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        for row in reader.deserialize::<SummaryRow>() {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            if row.n < 2 {
                return Err(Error::InsufficientSamples {
                    needed: 2,
                    got: row.n,
                });
            }
            stats.insert(
                row.protocol.parse()?,
                SampleStats {
                    n: row.n,
                    mean: row.mean,
                    sd: row.sd,
                    se: row.se,
                },
            );
        }
        if let Some(p) = Protocol::ALL.into_iter().find(|p| !stats.contains_key(p)) {
            return Err(Error::OccupationMismatch(format!(
                "summary lacks protocol {p}"
            )));
        }
    } else {
        return Err(Error::Parse(
            "expected a `timestamp,protocol,value` or `protocol,n,mean,sd,se` header".into(),
        ));
    }
    Ok(stats)
}

#[derive(Serialize)]
struct ExtractResults {
    statistics: BTreeMap<Protocol, SampleStats>,
    correlators: CorrelatorSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    obb: Option<ErrorBudget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sbb: Option<SbbErrors>,
    zeta: ZetaSensitivity,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo_se: Option<ErrorFields>,
}

pub fn extract(a: &ExtractArgs, seed: u64) -> Result<Outcome> {
    let mut digests = BTreeMap::new();
    let statistics = read_statistics(&read_input(&a.correlators, &mut digests)?)?;
    let g = Protocol::ALL.map(|p| statistics[&p].mean);
    let se = Protocol::ALL.map(|p| statistics[&p].se);
    let cs = CorrelatorSet::new(g, se, a.r1, a.r2)?;
    let budget = extract_errors(&cs, a.se_convention.into())?;
    let sbb = matches!(a.model, ExtractModel::Sbb | ExtractModel::Both)
        .then(|| extract_errors_sbb(&budget))
        .transpose()?;
    let zeta = zeta_sensitivity(budget.eps_multi.value, budget.eps_multi_out.value)?;
    let monte_carlo_se = (a.mc_draws > 0)
        .then(|| monte_carlo_uncertainty(&cs, a.mc_draws, seed))
        .transpose()?;

    let mut table = Table::new(&["quantity", "value", "se", "ci_low", "ci_high"]);
    let estimates = [
        ("v0", budget.v0),
        ("v1", budget.v1),
        ("eps_multi", budget.eps_multi),
        ("eps_multi_out", budget.eps_multi_out),
        ("eps_tot", budget.eps_tot),
        ("eps_tot_out", budget.eps_tot_out),
        ("eps_indist", budget.eps_indist),
        ("eps_indist_out", budget.eps_indist_out),
    ];
    let show_obb = a.model != ExtractModel::Sbb;
    for (name, e) in estimates {
        if show_obb || !name.starts_with("eps_indist") {
            table.push(vec![
                name.into(),
                num(e.value),
                num(e.se),
                num(e.ci_low),
                num(e.ci_high),
            ]);
        }
    }
    if let Some(s) = &sbb {
        table.push(vec![
            "eps_indist_sbb".into(),
            num(s.eps_indist),
            String::new(),
            String::new(),
            String::new(),
        ]);
        table.push(vec![
            "eps_indist_out_sbb".into(),
            num(s.eps_indist_out),
            String::new(),
            String::new(),
            String::new(),
        ]);
    }

    let warnings = budget.warnings.clone();
    let results = ExtractResults {
        statistics,
        correlators: cs,
        obb: Some(budget),
        sbb,
        zeta,
        monte_carlo_se,
    };
    let mut report = RunReport::new(
        "extract",
        serde_json::json!({ "flags": a, "seed": seed }),
        results,
    )?;
    report.input_digests = digests;
    report.warnings = warnings;
    Ok(Outcome { report, table })
}

#[derive(Serialize)]
struct TargetSummary {
    label: String,
    eps_indist: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimum: Option<OptimalScheme>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance_at_optimum: Option<f64>,
    /// Ratio of multi-error to single-error events at the optimum.
    #[serde(skip_serializing_if = "Option::is_none")]
    linear_validity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    infeasible: Option<String>,
}

#[derive(Serialize)]
struct ResourcesResults {
    targets: Vec<TargetSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boundaries: Option<RegimeBoundaries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    isolines: Option<IsolineTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    loss_budget: Option<LossBudget>,
}

fn summarize(label: &str, eps: f64, params: &ResourceParams) -> Result<TargetSummary> {
    let opt = optimal_scheme_size(eps, params)?;
    let distance = required_distance(eps / 2.0 / opt.n_star as f64, params)?;
    let validity = (opt.n_star >= 2)
        .then(|| linear_validity_ratio(eps, opt.n_star))
        .transpose()?;
    Ok(TargetSummary {
        label: label.into(),
        eps_indist: eps,
        optimum: Some(opt),
        distance_at_optimum: Some(distance),
        linear_validity: validity,
        infeasible: None,
    })
}

pub fn resources(a: &ResourcesArgs) -> Result<Outcome> {
    let mut digests = BTreeMap::new();
    let params = ResourceParams {
        b: a.b,
        p_th: a.p_th,
        p_l_target: a.p_l,
        n_grid: a.n_grid.clone().unwrap_or_else(|| (1..=a.n_max).collect()),
        distance_mode: a.distance.into(),
    };
    params.validate()?;
    let sources: Vec<SourceEntry> = match &a.sources_csv {
        Some(p) => parse_sources(&read_input(p, &mut digests)?)?,
        None => default_sources(),
    };

    let mut warnings = Vec::new();
    let mut targets = Vec::new();
    if let Some(eps) = a.eps {
        targets.push(summarize("eps", eps, &params)?);
    } else if let Some(label) = &a.source {
        let s = sources
            .iter()
            .find(|s| &s.label == label)
            .ok_or_else(|| Error::OutOfRange(format!("no source labelled {label:?}")))?;
        targets.push(summarize(&s.label, s.eps_indist, &params)?);
    } else if !a.boundaries && !a.isolines {
        for s in &sources {
            match summarize(&s.label, s.eps_indist, &params) {
                Ok(t) => targets.push(t),
                Err(e @ Error::AboveThreshold { .. }) => {
                    warnings.push(format!(
                        "source {} is above threshold for every size on the grid",
                        s.label
                    ));
                    targets.push(TargetSummary {
                        label: s.label.clone(),
                        eps_indist: s.eps_indist,
                        optimum: None,
                        distance_at_optimum: None,
                        linear_validity: None,
                        infeasible: Some(e.to_string()),
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    for t in &targets {
        if let Some(o) = &t.optimum {
            if o.at_grid_edge && params.n_grid.len() > 1 {
                warnings.push(format!(
                    "optimum for {} sits on the largest grid size N = {}",
                    t.label, o.n_star
                ));
            }
        }
        if t.linear_validity
            .is_some_and(|v| v > crate::resources::LINEAR_VALIDITY_LEVEL)
        {
            warnings.push(format!(
                "first-order error model is marginal for {} at its optimum",
                t.label
            ));
        }
    }

    let boundaries = a
        .boundaries
        .then(|| regime_boundaries(&params))
        .transpose()?;
    let isolines = a
        .isolines
        .then(|| {
            isoline_data(
                &params,
                &sources,
                &a.isoline_sizes,
                &log_grid(1e-2, 1e2, a.isoline_points),
            )
        })
        .transpose()?;
    let loss_budget = match (a.loss, a.gates) {
        (Some(l), Some(g)) => Some(loss_budget_adjust(l, g)?),
        _ => None,
    };

    let table = match &isolines {
        Some(iso) => {
            let mut t = Table::new(&["N", "p_over_pth", "cost_ratio", "valid_linear"]);
            for p in &iso.points {
                t.push(vec![
                    p.n.to_string(),
                    num(p.p_over_pth),
                    num(p.cost_ratio),
                    p.valid_linear.to_string(),
                ]);
            }
            t
        }
        None => {
            let mut t = Table::new(&["label", "eps_indist", "n_star", "cost", "cost_n1", "ratio"]);
            for s in &targets {
                let o = s.optimum.as_ref();
                t.push(vec![
                    s.label.clone(),
                    num(s.eps_indist),
                    o.map(|o| o.n_star.to_string()).unwrap_or_default(),
                    o.map(|o| num(o.cost)).unwrap_or_default(),
                    o.and_then(|o| o.cost_n1).map(num).unwrap_or_default(),
                    o.and_then(|o| o.ratio).map(num).unwrap_or_default(),
                ]);
            }
            t
        }
    };

    let results = ResourcesResults {
        targets,
        boundaries,
        isolines,
        loss_budget,
    };
    let mut report = RunReport::new("resources", serde_json::json!({ "flags": a }), results)?;
    report.input_digests = digests;
    report.warnings = warnings;
    Ok(Outcome { report, table })
}
