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

//! Correlator ingestion and sample statistics.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Measurement protocols. `A`/`B` interfere two undistilled photons;
/// `C`/`D` interfere the distilled photon with an undistilled one. The first
/// of each pair blocks one input to measure multiphoton contamination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Protocol {
    A,
    B,
    C,
    D,
}

impl Protocol {
    pub const ALL: [Protocol; 4] = [Protocol::A, Protocol::B, Protocol::C, Protocol::D];
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Protocol::A => "A",
            Protocol::B => "B",
            Protocol::C => "C",
            Protocol::D => "D",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Protocol::A),
            "B" | "b" => Ok(Protocol::B),
            "C" | "c" => Ok(Protocol::C),
            "D" | "d" => Ok(Protocol::D),
            other => Err(Error::Parse(format!("unknown protocol {other:?}"))),
        }
    }
}

/// Raw coincidence counts of one run. Trigger counts must already be
/// corrected for any undersampling of the trigger channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CoincidenceCounts {
    /// Singles `N₃`, `N₄`, coincidences `N₃,₄` and triggers `N_t`.
    Reference {
        n3: f64,
        n4: f64,
        n34: f64,
        n_trigger: f64,
    },
    /// Herald coincidences `N₁,₂` and the higher-order coincidences.
    Distillation {
        n12: f64,
        n123: f64,
        n124: f64,
        n1234: f64,
    },
}

/// `g_{A,B} = N₃,₄ N_t / (N₃ N₄)` and `g_{C,D} = N₁,₂,₃,₄ N₁,₂ / (N₁,₂,₃ N₁,₂,₄)`.
pub fn correlator_from_counts(protocol: Protocol, counts: &CoincidenceCounts) -> Result<f64> {
    match (protocol, *counts) {
        (
            Protocol::A | Protocol::B,
            CoincidenceCounts::Reference {
                n3,
                n4,
                n34,
                n_trigger,
            },
        ) => {
            if n3 <= 0.0 || n4 <= 0.0 {
                return Err(Error::ZeroDenominator("single-detector counts"));
            }
            Ok(n34 * n_trigger / (n3 * n4))
        }
        (
            Protocol::C | Protocol::D,
            CoincidenceCounts::Distillation {
                n12,
                n123,
                n124,
                n1234,
            },
        ) => {
            if n123 <= 0.0 || n124 <= 0.0 {
                return Err(Error::ZeroDenominator("threefold coincidence counts"));
            }
            Ok(n1234 * n12 / (n123 * n124))
        }
        (p, _) => Err(Error::OutOfRange(format!(
            "protocol {p} does not use these counts"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    /// With the `n − 1` denominator.
    pub sd: f64,
    pub se: f64,
}

pub fn sample_stats(samples: &[f64]) -> Result<SampleStats> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("samples".into()));
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let sd = (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    Ok(SampleStats {
        n,
        mean,
        sd,
        se: sd / (n as f64).sqrt(),
    })
}

/// Per-run correlator values grouped by protocol.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorSamples {
    pub values: BTreeMap<Protocol, Vec<f64>>,
    pub timestamps: BTreeMap<Protocol, Vec<f64>>,
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    timestamp: f64,
    protocol: String,
    value: f64,
}

impl CorrelatorSamples {
    /// Reads `timestamp,protocol,value` rows; `#` lines are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut out = Self::default();
        for row in reader.deserialize::<SampleRow>() {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            let p: Protocol = row.protocol.parse()?;
            if !(row.value.is_finite() && row.value >= 0.0) {
                return Err(Error::OutOfRange(format!(
                    "correlator {} for protocol {p}",
                    row.value
                )));
            }
            out.values.entry(p).or_default().push(row.value);
            out.timestamps.entry(p).or_default().push(row.timestamp);
        }
        Ok(out)
    }

    pub fn stats(&self, protocol: Protocol) -> Result<SampleStats> {
        let v = self.values.get(&protocol).map(Vec::as_slice).unwrap_or(&[]);
        sample_stats(v).map_err(|e| match e {
            Error::InsufficientSamples { needed, got } => Error::OccupationMismatch(format!(
                "protocol {protocol} has {got} samples, need at least {needed}"
            )),
            other => other,
        })
    }
}

/// Mean correlators with standard errors and the splitter reflectivities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorSet {
    pub g_a: f64,
    pub g_b: f64,
    pub g_c: f64,
    pub g_d: f64,
    pub se_a: f64,
    pub se_b: f64,
    pub se_c: f64,
    pub se_d: f64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Debug, Deserialize)]
struct SummaryRow {
    protocol: String,
    #[allow(dead_code)]
    n: usize,
    mean: f64,
    #[allow(dead_code)]
    sd: f64,
    se: f64,
}

impl CorrelatorSet {
    pub fn new(g: [f64; 4], se: [f64; 4], r1: f64, r2: f64) -> Result<Self> {
        for r in [r1, r2] {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::OutOfRange(format!(
                    "reflectivity {r} must lie in (0, 1)"
                )));
            }
        }
        if g.iter().chain(&se).any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::OutOfRange(
                "correlators and standard errors must be nonnegative".into(),
            ));
        }
        Ok(Self {
            g_a: g[0],
            g_b: g[1],
            g_c: g[2],
            g_d: g[3],
            se_a: se[0],
            se_b: se[1],
            se_c: se[2],
            se_d: se[3],
            r1,
            r2,
        })
    }

    pub fn from_samples(samples: &CorrelatorSamples, r1: f64, r2: f64) -> Result<Self> {
        let mut g = [0.0; 4];
        let mut se = [0.0; 4];
        for (k, p) in Protocol::ALL.iter().enumerate() {
            let s = samples.stats(*p)?;
            g[k] = s.mean;
            se[k] = s.se;
        }
        Self::new(g, se, r1, r2)
    }

    /// Reads a `protocol,n,mean,sd,se` summary table.
    pub fn from_summary_csv(text: &str, r1: f64, r2: f64) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut g = [f64::NAN; 4];
        let mut se = [f64::NAN; 4];
        for row in reader.deserialize::<SummaryRow>() {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            let k = row.protocol.parse::<Protocol>()? as usize;
            g[k] = row.mean;
            se[k] = row.se;
        }
        if let Some(k) = g.iter().position(|x| x.is_nan()) {
            return Err(Error::Parse(format!(
                "summary lacks protocol {}",
                Protocol::ALL[k]
            )));
        }
        Self::new(g, se, r1, r2)
    }

    pub fn with_correlators(&self, g: [f64; 4]) -> Self {
        Self {
            g_a: g[0],
            g_b: g[1],
            g_c: g[2],
            g_d: g[3],
            ..*self
        }
    }

    pub fn correlators(&self) -> [f64; 4] {
        [self.g_a, self.g_b, self.g_c, self.g_d]
    }

    pub fn standard_errors(&self) -> [f64; 4] {
        [self.se_a, self.se_b, self.se_c, self.se_d]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlator_arithmetic() {
        let zero = CoincidenceCounts::Reference {
            n3: 100.0,
            n4: 100.0,
            n34: 0.0,
            n_trigger: 1e6,
        };
        assert_eq!(correlator_from_counts(Protocol::A, &zero).unwrap(), 0.0);
        let c = CoincidenceCounts::Distillation {
            n12: 1000.0,
            n123: 100.0,
            n124: 100.0,
            n1234: 0.592,
        };
        assert!((correlator_from_counts(Protocol::C, &c).unwrap() - 0.0592).abs() < 1e-15);
        assert!(correlator_from_counts(Protocol::B, &c).is_err());
        let dead = CoincidenceCounts::Reference {
            n3: 0.0,
            n4: 10.0,
            n34: 0.0,
            n_trigger: 1.0,
        };
        assert!(matches!(
            correlator_from_counts(Protocol::A, &dead),
            Err(Error::ZeroDenominator(_))
        ));
    }

    #[test]
    fn uncorrelated_counts_give_unity() {
        // Independent detectors: N₃₄ = N₃ N₄ / N_t in expectation.
        let (nt, p3, p4) = (1e9, 1e-3, 2e-3);
        let c = CoincidenceCounts::Reference {
            n3: nt * p3,
            n4: nt * p4,
            n34: nt * p3 * p4,
            n_trigger: nt,
        };
        assert!((correlator_from_counts(Protocol::B, &c).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stats_by_hand() {
        let s = sample_stats(&[0.0, 2.0]).unwrap();
        assert_eq!(s.mean, 1.0);
        assert!((s.sd - 2f64.sqrt()).abs() < 1e-15);
        assert!((s.se - 1.0).abs() < 1e-15);
        assert_eq!(sample_stats(&[0.3; 5]).unwrap().sd, 0.0);
        assert!(sample_stats(&[1.0]).is_err());
    }

    #[test]
    fn parses_samples_and_requires_every_protocol() {
        let text = "timestamp,protocol,value\n0,A,0.1\n1,A,0.2\n2,B,0.3\n";
        let s = CorrelatorSamples::parse(text).unwrap();
        assert_eq!(s.values[&Protocol::A], vec![0.1, 0.2]);
        assert!(CorrelatorSet::from_samples(&s, 0.5, 0.5).is_err());
        assert!(CorrelatorSamples::parse("timestamp,protocol,value\n0,E,0.1\n").is_err());
    }
}
