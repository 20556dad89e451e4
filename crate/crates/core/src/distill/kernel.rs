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

//! Multi-species permanent rule and outcome tables.
//!
//! Photons that share a species label add amplitudes; different species add
//! probabilities. Lossy networks are handled through a row-orthonormal
//! dilation `W = [T | L]` with `L L† = I − T T†`, and the extra loss columns
//! are summed out after squaring.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::source::{expand_species, PhotonSourceModel, SpeciesTerm};
use crate::error::{Error, Result};
use crate::optics::{permanent, psd_sqrt, ComplexMatrix, TransferMatrix, C64, UNITARY_TOL};

/// Photon count per mode.
pub type Occupation = Vec<u8>;

/// A transfer matrix together with a row-orthonormal completion.
#[derive(Clone, Debug)]
pub struct Dilation {
    w: ComplexMatrix,
    physical: usize,
}

impl Dilation {
    pub fn new(t: &TransferMatrix) -> Result<Self> {
        let n = t.rows();
        let m = t.cols();
        let gram = t.matmul(&t.adjoint())?;
        let slack = ComplexMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            C64::new(id, 0.0) - gram.get(i, j)
        });
        let residual = slack.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual <= UNITARY_TOL {
            return Ok(Self {
                w: t.clone(),
                physical: m,
            });
        }
        let l = psd_sqrt(&slack, UNITARY_TOL).ok_or(Error::NotUnitary {
            what: "sub-unitarity",
            residual: t.max_singular_value() - 1.0,
        })?;
        let w = ComplexMatrix::from_fn(
            n,
            m + n,
            |i, j| if j < m { t.get(i, j) } else { l.get(i, j - m) },
        );
        Ok(Self { w, physical: m })
    }

    pub fn physical_modes(&self) -> usize {
        self.physical
    }

    pub fn is_lossless(&self) -> bool {
        self.w.cols() == self.physical
    }

    /// Distribution of physical output occupations for one species whose
    /// photons enter through `rows` (repeats allowed).
    pub fn species_distribution(&self, rows: &[usize]) -> Result<Vec<(Occupation, f64)>> {
        let total_modes = self.w.cols();
        let in_norm: f64 = multiplicity_factorials(rows, self.w.rows());
        let mut acc: BTreeMap<Occupation, f64> = BTreeMap::new();
        let mut err = None;
        for_each_multiset(rows.len(), total_modes, |cols| {
            if err.is_some() {
                return;
            }
            let sub = self.w.select(rows, cols);
            match permanent(&sub) {
                Ok(a) => {
                    let out_norm = multiplicity_factorials(cols, total_modes);
                    let p = a.norm_sqr() / (in_norm * out_norm);
                    if p > 0.0 {
                        let mut occ = vec![0u8; self.physical];
                        for &c in cols {
                            if c < self.physical {
                                occ[c] += 1;
                            }
                        }
                        *acc.entry(occ).or_insert(0.0) += p;
                    }
                }
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        Ok(acc.into_iter().collect())
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

fn multiplicity_factorials(indices: &[usize], modes: usize) -> f64 {
    let mut counts = vec![0usize; modes];
    for &i in indices {
        counts[i] += 1;
    }
    counts.iter().map(|&c| factorial(c)).product()
}

/// Visits every non-decreasing index list of length `k` over `modes` values.
fn for_each_multiset(k: usize, modes: usize, mut visit: impl FnMut(&[usize])) {
    if k == 0 {
        visit(&[]);
        return;
    }
    if modes == 0 {
        return;
    }
    let mut idx = vec![0usize; k];
    loop {
        visit(&idx);
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == modes - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return;
        }
        let v = idx[pos - 1] + 1;
        for slot in &mut idx[pos - 1..] {
            *slot = v;
        }
    }
}

/// All occupations of `photons` photons over `modes` modes, in a fixed order.
pub fn occupations(photons: usize, modes: usize) -> Vec<Occupation> {
    let mut out = Vec::new();
    for_each_multiset(photons, modes, |cols| {
        let mut occ = vec![0u8; modes];
        for &c in cols {
            occ[c] += 1;
        }
        out.push(occ);
    });
    out
}

fn group_by_species(inputs: &[usize], term: &SpeciesTerm) -> BTreeMap<usize, Vec<usize>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&row, &label) in inputs.iter().zip(&term.species_of_photon) {
        groups.entry(label).or_default().push(row);
    }
    groups
}

fn check_inputs(t: &TransferMatrix, inputs: &[usize], term: &SpeciesTerm) -> Result<()> {
    if inputs.len() != term.species_of_photon.len() {
        return Err(Error::OccupationMismatch(format!(
            "{} inputs but {} species labels",
            inputs.len(),
            term.species_of_photon.len()
        )));
    }
    if let Some(&bad) = inputs.iter().find(|&&i| i >= t.rows()) {
        return Err(Error::OutOfRange(format!(
            "input mode {bad} of {}",
            t.rows()
        )));
    }
    Ok(())
}

/// Probability of observing `outcome` when the photons of `term` enter at
/// `inputs`. Unitary networks must conserve photon number; for sub-unitary
/// networks fewer output photons are allowed and the lost ones are traced out.
pub fn event_probability(
    t: &TransferMatrix,
    inputs: &[usize],
    term: &SpeciesTerm,
    outcome: &[u8],
) -> Result<f64> {
    check_inputs(t, inputs, term)?;
    if outcome.len() != t.cols() {
        return Err(Error::OccupationMismatch(format!(
            "outcome over {} modes for {} outputs",
            outcome.len(),
            t.cols()
        )));
    }
    let detected: usize = outcome.iter().map(|&c| c as usize).sum();
    let d = Dilation::new(t)?;
    if detected > inputs.len() || (d.is_lossless() && detected != inputs.len()) {
        return Err(Error::OccupationMismatch(format!(
            "{} photons in, {detected} out",
            inputs.len()
        )));
    }
    let groups = group_by_species(inputs, term);
    if d.is_lossless() {
        let rows: Vec<&Vec<usize>> = groups.values().collect();
        return split_outcome(t, &rows, outcome.to_vec());
    }
    let mut partial: BTreeMap<Occupation, f64> = BTreeMap::new();
    partial.insert(vec![0; d.physical_modes()], 1.0);
    for rows in groups.values() {
        let dist = d.species_distribution(rows)?;
        let mut next = BTreeMap::new();
        for (occ, p) in &partial {
            for (s_occ, q) in &dist {
                let sum: Occupation = occ.iter().zip(s_occ).map(|(a, b)| a + b).collect();
                if sum.iter().zip(outcome).all(|(a, b)| a <= b) {
                    *next.entry(sum).or_insert(0.0) += p * q;
                }
            }
        }
        partial = next;
    }
    Ok(partial.get(outcome).copied().unwrap_or(0.0))
}

/// Sum over all ways of sharing the outcome between species of the product
/// of single-species probabilities.
fn split_outcome(t: &TransferMatrix, groups: &[&Vec<usize>], remaining: Occupation) -> Result<f64> {
    let Some((rows, rest)) = groups.split_first() else {
        return Ok(if remaining.iter().all(|&c| c == 0) {
            1.0
        } else {
            0.0
        });
    };
    let k = rows.len();
    let modes = remaining.len();
    let in_norm = multiplicity_factorials(rows, t.rows());
    let mut total = 0.0;
    for occ in occupations(k, modes) {
        if occ.iter().zip(&remaining).any(|(a, b)| a > b) {
            continue;
        }
        let cols: Vec<usize> = occ
            .iter()
            .enumerate()
            .flat_map(|(j, &c)| std::iter::repeat_n(j, c as usize))
            .collect();
        let a = permanent(&t.select(rows, &cols))?;
        let out_norm: f64 = occ.iter().map(|&c| factorial(c as usize)).product();
        let p = a.norm_sqr() / (in_norm * out_norm);
        if p == 0.0 {
            continue;
        }
        let left: Occupation = remaining.iter().zip(&occ).map(|(a, b)| a - b).collect();
        total += p * split_outcome(t, rest, left)?;
    }
    Ok(total)
}

/// Joint weight of one detected occupation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeWeight {
    /// Probability per number of bad photons in the source term.
    pub class_probability: Vec<f64>,
    /// Expected number of bad photons per output mode, jointly with the
    /// outcome, split by the same classes.
    pub class_bad_in_mode: Vec<Vec<f64>>,
}

impl OutcomeWeight {
    fn new(classes: usize, modes: usize) -> Self {
        Self {
            class_probability: vec![0.0; classes],
            class_bad_in_mode: vec![vec![0.0; modes]; classes],
        }
    }

    pub fn probability(&self) -> f64 {
        self.class_probability.iter().sum()
    }

    pub fn bad_in_mode(&self, mode: usize) -> f64 {
        self.class_bad_in_mode.iter().map(|v| v[mode]).sum()
    }
}

/// Every detected occupation reachable from a source through a network,
/// with its probability and bad-photon bookkeeping.
#[derive(Clone, Debug)]
pub struct OutcomeTable {
    modes: usize,
    photons: usize,
    entries: BTreeMap<Occupation, OutcomeWeight>,
}

impl OutcomeTable {
    /// Injects photon `i` of `source` into input mode `i`.
    pub fn build(t: &TransferMatrix, source: &PhotonSourceModel) -> Result<Self> {
        let n = source.photons();
        if n > t.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{n} photons for {} input modes",
                t.rows()
            )));
        }
        let inputs: Vec<usize> = (0..n).collect();
        let terms = expand_species(source)?;
        Self::from_terms(t, &inputs, &terms)
    }

    pub fn from_terms(t: &TransferMatrix, inputs: &[usize], terms: &[SpeciesTerm]) -> Result<Self> {
        let d = Dilation::new(t)?;
        let modes = d.physical_modes();
        let classes = inputs.len() + 1;
        let mut cache: BTreeMap<Vec<usize>, Vec<(Occupation, f64)>> = BTreeMap::new();
        let mut entries: BTreeMap<Occupation, OutcomeWeight> = BTreeMap::new();
        for term in terms {
            check_inputs(t, inputs, term)?;
            let class = term.bad_count();
            let groups = group_by_species(inputs, term);
            // partial state: (total occupation, bad occupation) -> probability
            let mut partial: BTreeMap<(Occupation, Occupation), f64> = BTreeMap::new();
            partial.insert((vec![0; modes], vec![0; modes]), 1.0);
            for (&label, rows) in &groups {
                if !cache.contains_key(rows) {
                    cache.insert(rows.clone(), d.species_distribution(rows)?);
                }
                let dist = &cache[rows];
                let mut next = BTreeMap::new();
                for ((occ, bad), p) in &partial {
                    for (s_occ, q) in dist {
                        let total: Occupation = occ.iter().zip(s_occ).map(|(a, b)| a + b).collect();
                        let bad: Occupation = if label == 0 {
                            bad.clone()
                        } else {
                            bad.iter().zip(s_occ).map(|(a, b)| a + b).collect()
                        };
                        *next.entry((total, bad)).or_insert(0.0) += p * q;
                    }
                }
                partial = next;
            }
            for ((occ, bad), p) in partial {
                let w = term.weight * p;
                let e = entries
                    .entry(occ)
                    .or_insert_with(|| OutcomeWeight::new(classes, modes));
                e.class_probability[class] += w;
                for (slot, &b) in e.class_bad_in_mode[class].iter_mut().zip(&bad) {
                    *slot += w * b as f64;
                }
            }
        }
        Ok(Self {
            modes,
            photons: inputs.len(),
            entries,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &OutcomeWeight)> {
        self.entries.iter()
    }

    pub fn probability(&self, outcome: &[u8]) -> f64 {
        self.entries
            .get(outcome)
            .map_or(0.0, OutcomeWeight::probability)
    }

    pub fn total_probability(&self) -> f64 {
        self.entries.values().map(OutcomeWeight::probability).sum()
    }

    /// Probability that every listed mode registers at least one photon.
    pub fn click_probability(&self, modes: &[usize]) -> f64 {
        self.entries
            .iter()
            .filter(|(occ, _)| modes.iter().all(|&m| occ[m] >= 1))
            .map(|(_, w)| w.probability())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distill::source::NoiseModel;
    use crate::optics::{beam_splitter, compose_lossy, fourier_matrix, DiagonalLoss};

    #[test]
    fn single_photon_identity() {
        let id = ComplexMatrix::identity(2);
        let p = event_probability(&id, &[1], &SpeciesTerm::all_good(1), &[0, 1]).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let bs = beam_splitter(0.5).unwrap();
        let good = SpeciesTerm::all_good(2);
        assert!(
            event_probability(&bs, &[0, 1], &good, &[1, 1])
                .unwrap()
                .abs()
                < 1e-15
        );
        let mixed = SpeciesTerm {
            weight: 1.0,
            species_of_photon: vec![0, 1],
        };
        assert!((event_probability(&bs, &[0, 1], &mixed, &[1, 1]).unwrap() - 0.5).abs() < 1e-15);
        assert!((event_probability(&bs, &[0, 1], &good, &[2, 0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn photon_number_is_checked() {
        let bs = beam_splitter(0.5).unwrap();
        let err = event_probability(&bs, &[0, 1], &SpeciesTerm::all_good(2), &[1, 0]).unwrap_err();
        assert!(matches!(err, Error::OccupationMismatch(_)));
    }

    #[test]
    fn lossy_single_photon_marginal() {
        let bs = beam_splitter(0.5).unwrap();
        let half = DiagonalLoss::new(vec![0.5f64.sqrt(); 2]).unwrap();
        let t = compose_lossy(&half, &bs, &DiagonalLoss::lossless(2)).unwrap();
        let term = SpeciesTerm::all_good(1);
        assert!((event_probability(&t, &[0], &term, &[0, 0]).unwrap() - 0.5).abs() < 1e-12);
        assert!((event_probability(&t, &[0], &term, &[1, 0]).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn table_matches_direct_rule() {
        let f = fourier_matrix(3).unwrap();
        let source = PhotonSourceModel::uniform(NoiseModel::Obb, 3, 0.2).unwrap();
        let table = OutcomeTable::build(&f, &source).unwrap();
        let terms = expand_species(&source).unwrap();
        for occ in occupations(3, 3) {
            let direct: f64 = terms
                .iter()
                .map(|t| t.weight * event_probability(&f, &[0, 1, 2], t, &occ).unwrap())
                .sum();
            assert!((direct - table.probability(&occ)).abs() < 1e-14);
        }
        assert!((table.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lossy_table_is_normalized() {
        let f = fourier_matrix(3).unwrap();
        let d = DiagonalLoss::new(vec![0.9, 0.5, 0.7]).unwrap();
        let t = compose_lossy(&d, &f, &d).unwrap();
        let source = PhotonSourceModel::uniform(NoiseModel::Obb, 3, 0.1).unwrap();
        let table = OutcomeTable::build(&t, &source).unwrap();
        assert!((table.total_probability() - 1.0).abs() < 1e-12);
        let p = table.probability(&[1, 1, 0]);
        let terms = expand_species(&source).unwrap();
        let direct: f64 = terms
            .iter()
            .map(|term| term.weight * event_probability(&t, &[0, 1, 2], term, &[1, 1, 0]).unwrap())
            .sum();
        assert!((p - direct).abs() < 1e-14);
    }

    #[test]
    fn multiset_enumeration_counts() {
        assert_eq!(occupations(3, 3).len(), 10);
        assert_eq!(occupations(0, 4), vec![vec![0, 0, 0, 0]]);
        assert_eq!(occupations(4, 8).len(), 330);
    }
}
