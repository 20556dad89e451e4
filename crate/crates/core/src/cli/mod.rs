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

//! Command-line front end.
//!
//! Each subcommand builds a [`RunReport`] that embeds its full flag set, so a
//! report can be replayed to reproduce its results exactly.

mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use commands::{characterize, extract, resources, simulate};
pub use report::{RunReport, Table};

use crate::distill::NoiseModel;
use crate::error::{Error, Result};
use crate::extraction::SeConvention;
use crate::resources::DistanceMode;
use crate::tomography::LossGauge;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NO_HERALD: i32 = 3;
pub const EXIT_NON_CONVERGENCE: i32 = 4;
pub const EXIT_ABOVE_THRESHOLD: i32 = 5;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoHerald { .. } | Error::NoViableHerald(_) => EXIT_NO_HERALD,
        Error::NonConvergence { .. } => EXIT_NON_CONVERGENCE,
        Error::AboveThreshold { .. } => EXIT_ABOVE_THRESHOLD,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Clone, Debug, Parser, Serialize, Deserialize)]
#[command(
    name = "photon-distill",
    version,
    about = "Photon distillation: simulation, characterization, error extraction and resource estimates"
)]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Heralded distillation of partially distinguishable photons.
    Simulate(SimulateArgs),
    /// Loss and unitary decomposition of single-photon count matrices.
    Characterize(CharacterizeArgs),
    /// Error budget from measured correlators.
    Extract(ExtractArgs),
    /// Photon cost of a logical qubit with and without distillation.
    Resources(ResourcesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitarySource {
    Fourier,
    Hadamard,
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Obb,
    Sbb,
}

impl From<ModelArg> for NoiseModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Obb => NoiseModel::Obb,
            ModelArg::Sbb => NoiseModel::Sbb,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = UnitarySource::Fourier)]
    pub unitary: UnitarySource,
    /// CSV of complex entries such as `0.5+0.2i`, used with `--unitary file`.
    #[arg(long)]
    pub unitary_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModelArg::Obb)]
    pub model: ModelArg,
    /// Input errors, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.0759")]
    pub eps: Vec<f64>,
    /// Multiphoton error folded into the reported total error.
    #[arg(long)]
    pub eps_multi: Option<f64>,
    /// Measured output modes; the default picks the most likely pattern.
    #[arg(long, value_delimiter = ',')]
    pub herald_modes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub herald_counts: Option<Vec<u8>>,
    #[arg(long)]
    pub output_mode: Option<usize>,
    /// Input loss amplitudes, one per mode.
    #[arg(long)]
    pub loss_in: Option<PathBuf>,
    /// Output loss amplitudes, one per mode.
    #[arg(long)]
    pub loss_out: Option<PathBuf>,
    /// Compare the network against Haar-random networks.
    #[arg(long)]
    pub scan_optimality: bool,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub scan_eps: f64,
    /// Run the four-mode correlator pipeline on the bundled chip model.
    #[arg(long)]
    pub nonuniform_loss: bool,
}

/// Accepts `balanced` or `anchor:<mode>:<amplitude>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeArg(pub LossGauge);

impl FromStr for GaugeArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "balanced" {
            return Ok(Self(LossGauge::Balanced));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["anchor", mode, amp] => {
                let mode = mode.parse().map_err(|_| format!("bad mode in {s:?}"))?;
                let amplitude: f64 = amp.parse().map_err(|_| format!("bad amplitude in {s:?}"))?;
                Ok(Self(LossGauge::InputAnchor { mode, amplitude }))
            }
            _ => Err(format!(
                "expected `balanced` or `anchor:<mode>:<amplitude>`, got {s:?}"
            )),
        }
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct CharacterizeArgs {
    /// Count files with a `# s_norm=<integer>` header.
    #[arg(required = true)]
    pub counts: Vec<PathBuf>,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub fit_model: bool,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub phases: bool,
    #[arg(long, default_value = "balanced")]
    pub gauge: GaugeArg,
    /// Write the transmission map in dB to this CSV.
    #[arg(long)]
    pub eta_csv: Option<PathBuf>,
    /// Poisson resamplings of two-mode counts.
    #[arg(long, default_value_t = 0)]
    pub mc_draws: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtractModel {
    Obb,
    Sbb,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeConventionArg {
    Conservative,
    Exact,
}

impl From<SeConventionArg> for SeConvention {
    fn from(c: SeConventionArg) -> Self {
        match c {
            SeConventionArg::Conservative => SeConvention::Conservative,
            SeConventionArg::Exact => SeConvention::Exact,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ExtractArgs {
    /// Per-run `timestamp,protocol,value` rows or a `protocol,n,mean,sd,se` summary.
    pub correlators: PathBuf,
    #[arg(long, default_value_t = crate::datasets::R1)]
    pub r1: f64,
    #[arg(long, default_value_t = crate::datasets::R2)]
    pub r2: f64,
    #[arg(long, value_enum, default_value_t = ExtractModel::Obb)]
    pub model: ExtractModel,
    #[arg(long, default_value_t = 0)]
    pub mc_draws: usize,
    #[arg(long, value_enum, default_value_t = SeConventionArg::Conservative)]
    pub se_convention: SeConventionArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceArg {
    Continuous,
    Ceil,
}

impl From<DistanceArg> for DistanceMode {
    fn from(d: DistanceArg) -> Self {
        match d {
            DistanceArg::Continuous => DistanceMode::Continuous,
            DistanceArg::Ceil => DistanceMode::IntegerCeiling,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ResourcesArgs {
    /// Indistinguishability error of the source.
    #[arg(long, conflicts_with = "source")]
    pub eps: Option<f64>,
    /// Label in the source table.
    #[arg(long)]
    pub source: Option<String>,
    /// Source table replacing the bundled one.
    #[arg(long)]
    pub sources_csv: Option<PathBuf>,
    /// Largest distillation size considered.
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
    /// Explicit distillation sizes, overriding `--n-max`.
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Option<Vec<usize>>,
    #[arg(long)]
    pub isolines: bool,
    /// Sizes drawn as isolines.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,12,16,32,64")]
    pub isoline_sizes: Vec<usize>,
    #[arg(long, default_value_t = 121)]
    pub isoline_points: usize,
    #[arg(long)]
    pub boundaries: bool,
    #[arg(long, value_enum, default_value_t = DistanceArg::Continuous)]
    pub distance: DistanceArg,
    #[arg(long, default_value_t = crate::resources::DEFAULT_B)]
    pub b: f64,
    #[arg(long, default_value_t = crate::resources::DEFAULT_P_TH)]
    pub p_th: f64,
    #[arg(long, default_value_t = crate::resources::DEFAULT_P_L)]
    pub p_l: f64,
    /// Component loss to rescale for the distillation layer.
    #[arg(long, requires = "gates")]
    pub loss: Option<f64>,
    /// Gates per photon in the downstream circuit.
    #[arg(long, requires = "loss")]
    pub gates: Option<f64>,
}

/// Report plus the table written under `--format csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: RunReport,
    pub table: Table,
}

impl Outcome {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.report.to_json().map(|mut s| {
                s.push('\n');
                s
            }),
            Format::Csv => self.table.to_csv(),
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Simulate(a) => simulate(a, cli.seed),
        Command::Characterize(a) => characterize(a, cli.seed),
        Command::Extract(a) => extract(a, cli.seed),
        Command::Resources(a) => resources(a),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    let rendered = execute(&cli).and_then(|o| o.render(cli.format));
    let text = match rendered {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_VALIDATION;
            }
        }
        None => print!("{text}"),
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_parsing() {
        assert_eq!(
            "balanced".parse::<GaugeArg>().unwrap().0,
            LossGauge::Balanced
        );
        assert_eq!(
            "anchor:0:0.3568".parse::<GaugeArg>().unwrap().0,
            LossGauge::InputAnchor {
                mode: 0,
                amplitude: 0.3568
            }
        );
        assert!("anchor:x".parse::<GaugeArg>().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NoViableHerald("x".into())), 3);
        assert_eq!(
            exit_code(&Error::NonConvergence {
                iterations: 1,
                residual: 1.0
            }),
            4
        );
        assert_eq!(
            exit_code(&Error::AboveThreshold {
                p_error: 1.0,
                threshold: 0.1
            }),
            5
        );
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
    }

    #[test]
    fn command_line_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
