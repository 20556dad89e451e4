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

//! Single-photon count matrices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{ComplexMatrix, TransferMatrix, C64};

/// Detections `S_ij` with photons injected at input `i` and detected at
/// output `j`, out of `s_norm` source excitations per input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountMatrix {
    pub counts: Vec<Vec<u64>>,
    pub s_norm: u64,
    pub duration_s: Option<f64>,
}

impl CountMatrix {
    pub fn new(counts: Vec<Vec<u64>>, s_norm: u64) -> Result<Self> {
        let cols = counts.first().map_or(0, Vec::len);
        if counts.is_empty() || cols == 0 {
            return Err(Error::InvalidDimension("empty count matrix".into()));
        }
        if counts.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged count rows".into()));
        }
        if s_norm > 0 {
            if let Some((i, j)) = find(&counts, |c| c > s_norm) {
                return Err(Error::OutOfRange(format!(
                    "count ({i}, {j}) exceeds s_norm = {s_norm}"
                )));
            }
        }
        Ok(Self {
            counts,
            s_norm,
            duration_s: None,
        })
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn cols(&self) -> usize {
        self.counts[0].len()
    }

    /// Parses `# key=value` header lines (`s_norm` required, `duration_s`
    /// optional; other `#` lines are comments) followed by a comma-separated
    /// integer grid, row `i` = input mode `i`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s_norm = None;
        let mut duration = None;
        for line in text.lines() {
            let Some(rest) = line.trim().strip_prefix('#') else {
                continue;
            };
            let Some((key, value)) = rest.trim().split_once('=') else {
                continue;
            };
            match key.trim() {
                "s_norm" => {
                    let v: f64 = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad s_norm {value:?}")))?;
                    if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0) {
                        return Err(Error::Parse(format!(
                            "s_norm must be a nonnegative integer, got {value:?}"
                        )));
                    }
                    s_norm = Some(v as u64);
                }
                "duration_s" => {
                    duration = Some(
                        value
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad duration {value:?}")))?,
                    )
                }
                _ => {}
            }
        }
        let s_norm =
            s_norm.ok_or_else(|| Error::Parse("missing `# s_norm=<integer>` header".into()))?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut counts = Vec::new();
        for (r, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            let row = record
                .iter()
                .enumerate()
                .map(|(c, f)| {
                    f.parse::<u64>().map_err(|_| {
                        Error::Parse(format!("row {r} column {c}: {f:?} is not a count"))
                    })
                })
                .collect::<Result<Vec<u64>>>()?;
            counts.push(row);
        }
        let mut m = Self::new(counts, s_norm)?;
        m.duration_s = duration;
        Ok(m)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn scaled(&self, factor: u64) -> Result<Self> {
        let counts = self
            .counts
            .iter()
            .map(|r| r.iter().map(|c| c * factor).collect())
            .collect();
        Self::new(counts, self.s_norm * factor)
    }
}

fn find(counts: &[Vec<u64>], pred: impl Fn(u64) -> bool) -> Option<(usize, usize)> {
    counts
        .iter()
        .enumerate()
        .find_map(|(i, r)| r.iter().position(|&c| pred(c)).map(|j| (i, j)))
}

/// `|T_ij| = √(S_ij / s_norm)`.
pub fn amplitudes_from_counts(c: &CountMatrix) -> Result<TransferMatrix> {
    if c.s_norm == 0 {
        return Err(Error::ZeroDenominator("count normalization s_norm"));
    }
    let norm = c.s_norm as f64;
    Ok(ComplexMatrix::from_fn(c.rows(), c.cols(), |i, j| {
        C64::new((c.counts[i][j] as f64 / norm).sqrt(), 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_and_grid() {
        let c = CountMatrix::parse("# s_norm=100\n# duration_s=5\n# rows are inputs\n1,4\n9, 16\n")
            .unwrap();
        assert_eq!(c.s_norm, 100);
        assert_eq!(c.duration_s, Some(5.0));
        let t = amplitudes_from_counts(&c).unwrap();
        assert!((t.get(1, 1).re - 0.4).abs() < 1e-15);
    }

    #[test]
    fn full_scale_and_zero_counts() {
        let full = CountMatrix::new(vec![vec![7]], 7).unwrap();
        assert_eq!(amplitudes_from_counts(&full).unwrap().get(0, 0).re, 1.0);
        let zero = CountMatrix::new(vec![vec![0, 0], vec![0, 0]], 7).unwrap();
        assert!(amplitudes_from_counts(&zero)
            .unwrap()
            .entries()
            .iter()
            .all(|z| z.norm() == 0.0));
        let bad = CountMatrix::new(vec![vec![1]], 0).unwrap();
        assert!(amplitudes_from_counts(&bad).is_err());
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(CountMatrix::parse("1,2\n3,4\n").is_err());
        assert!(CountMatrix::parse("# s_norm=10\n1,2\n3\n").is_err());
        assert!(CountMatrix::parse("# s_norm=10\n1,x\n").is_err());
        assert!(CountMatrix::parse("# s_norm=10\n11\n").is_err());
    }
}
