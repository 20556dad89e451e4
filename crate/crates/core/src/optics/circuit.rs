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

//! Chains of block-diagonal stages.

use super::matrix::{ComplexMatrix, MatrixKind, C64};
use crate::error::{Error, Result};

/// A matrix acting on the consecutive modes `offset..offset + dim`.
#[derive(Clone, Debug)]
pub struct Placement {
    pub matrix: ComplexMatrix,
    pub offset: usize,
}

impl Placement {
    pub fn new(matrix: ComplexMatrix, offset: usize) -> Self {
        Self { matrix, offset }
    }
}

/// One layer of non-overlapping placements; untouched modes pass through.
pub type Stage = Vec<Placement>;

/// Embeds every stage into `modes` modes and multiplies the layers in
/// application order (first stage first).
pub fn direct_sum_and_chain(modes: usize, stages: &[Stage]) -> Result<ComplexMatrix> {
    let mut total = ComplexMatrix::identity(modes);
    let mut all_unitary = true;
    for (s, stage) in stages.iter().enumerate() {
        let layer = embed_stage(modes, stage, s)?;
        all_unitary &= stage.iter().all(|p| p.matrix.kind() == MatrixKind::Unitary);
        total = total.matmul(&layer)?;
    }
    if all_unitary {
        total.into_unitary()
    } else {
        Ok(total)
    }
}

fn embed_stage(modes: usize, stage: &Stage, index: usize) -> Result<ComplexMatrix> {
    let mut owner: Vec<Option<usize>> = vec![None; modes];
    for (p, placement) in stage.iter().enumerate() {
        let dim = placement.matrix.require_square()?;
        let end = placement.offset + dim;
        if end > modes {
            return Err(Error::OutOfRange(format!(
                "stage {index} placement {p} covers modes {}..{end} of {modes}",
                placement.offset
            )));
        }
        for slot in &mut owner[placement.offset..end] {
            if slot.is_some() {
                return Err(Error::OutOfRange(format!(
                    "stage {index} placements overlap"
                )));
            }
            *slot = Some(p);
        }
    }
    Ok(ComplexMatrix::from_fn(modes, modes, |i, j| {
        match (owner[i], owner[j]) {
            (Some(a), Some(b)) if a == b => {
                let pl = &stage[a];
                pl.matrix.get(i - pl.offset, j - pl.offset)
            }
            (None, None) if i == j => C64::new(1.0, 0.0),
            _ => C64::new(0.0, 0.0),
        }
    }))
}
