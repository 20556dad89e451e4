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

//! Report envelope shared by every subcommand.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Significant digits kept for every floating-point number in a report.
pub const REPORT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: String,
    /// SHA-256 of every input file, keyed by the path as given.
    pub input_digests: BTreeMap<String, String>,
    pub parameters: Value,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, parameters: impl Serialize, results: impl Serialize) -> Result<Self> {
        Ok(Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digests: BTreeMap::new(),
            parameters: to_rounded_value(parameters)?,
            results: to_rounded_value(results)?,
            warnings: Vec::new(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .map(|x| round_significant(x, REPORT_DIGITS))
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn to_rounded_value(x: impl Serialize) -> Result<Value> {
    let mut v = serde_json::to_value(x).map_err(|e| Error::Parse(e.to_string()))?;
    round_value(&mut v);
    Ok(v)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads an input file and records its digest in `digests`.
pub fn read_input(path: &Path, digests: &mut BTreeMap<String, String>) -> Result<String> {
    let bytes =
        std::fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    digests.insert(path.display().to_string(), sha256_hex(&bytes));
    String::from_utf8(bytes).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Plain rectangular table for CSV output.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(&self.header).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Formats a number the same way reports store it.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        round_significant(x, REPORT_DIGITS).to_string()
    } else {
        String::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_significant(0.1 + 0.2, 12), 0.3);
        assert_eq!(
            round_significant(-1.234567890123456e-7, 12),
            -1.23456789012e-7
        );
        assert_eq!(round_significant(0.0, 12), 0.0);
        let v = to_rounded_value(serde_json::json!({"a": [1.0000000000001, 3], "b": 2})).unwrap();
        assert_eq!(v, serde_json::json!({"a": [1.0, 3], "b": 2}));
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn csv_table() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![num(0.5), num(f64::NAN)]);
        assert_eq!(t.to_csv().unwrap(), "x,y\n0.5,\n");
    }
}
