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

use thiserror::Error;

/// Errors produced by the simulation and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix too large for the exact routine: {size} > {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("matrix fails the {what} check (residual {residual:e})")]
    NotUnitary { what: &'static str, residual: f64 },

    #[error("photon number mismatch: {0}")]
    OccupationMismatch(String),

    #[error("herald never fires (probability {probability:e})")]
    NoHerald { probability: f64 },

    #[error("no herald pattern is compatible with this network: {0}")]
    NoViableHerald(String),

    #[error("amplitude triangle ({a:.6}, {b:.6}, {c:.6}) admits no closing phases")]
    TriangleInequality { a: f64, b: f64, c: f64 },

    #[error("scaling did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("negative radicand in {0}")]
    NegativeRadicand(&'static str),

    #[error("no real root: {0}")]
    NoRealRoot(String),

    #[error("physical error {p_error:e} is not below the threshold {threshold:e}")]
    AboveThreshold { p_error: f64, threshold: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("{name} = {p} is not in [0, 1]")));
    }
    Ok(())
}
