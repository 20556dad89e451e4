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

//! Linear-optical networks: matrices, permanents and standard interferometers.

mod circuit;
mod matrix;
mod networks;
mod permanent;

pub use circuit::{direct_sum_and_chain, Placement, Stage};
pub use matrix::{
    psd_sqrt, ComplexMatrix, DiagonalLoss, MatrixKind, TransferMatrix, C64, UNITARY_TOL,
};
pub use networks::{
    beam_splitter, compose_lossy, fourier_matrix, haar_unitary, hadamard_matrix, trace_fidelity,
    TraceFidelity,
};
pub use permanent::{permanent, permanent_by_permutations, MAX_PERMANENT_DIM};
