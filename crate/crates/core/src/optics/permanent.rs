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

//! Matrix permanents.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Largest dimension accepted by [`permanent`].
pub const MAX_PERMANENT_DIM: usize = 20;

/// Permanent by Ryser's inclusion–exclusion formula, visiting column subsets
/// in Gray-code order so that each step updates the row sums by a single
/// column. Cost is `O(2^n · n)`; the summation order is fixed, so results are
/// bit-reproducible.
pub fn permanent(m: &ComplexMatrix) -> Result<C64> {
    let n = m.require_square()?;
    if n > MAX_PERMANENT_DIM {
        return Err(Error::SizeLimit {
            size: n,
            limit: MAX_PERMANENT_DIM,
        });
    }
    Ok(ryser(m, n))
}

fn ryser(m: &ComplexMatrix, n: usize) -> C64 {
    match n {
        0 => return C64::new(1.0, 0.0),
        1 => return m.get(0, 0),
        2 => return m.get(0, 0) * m.get(1, 1) + m.get(0, 1) * m.get(1, 0),
        _ => {}
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let next = k ^ (k >> 1);
        let col = (next ^ gray).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        gray = next;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += m.get(i, col);
            } else {
                *s -= m.get(i, col);
            }
        }
        let prod: C64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

/// Permanent as the plain sum over all `n!` permutations. Only meant as an
/// independent reference for small matrices.
pub fn permanent_by_permutations(m: &ComplexMatrix) -> Result<C64> {
    let n = m.require_square()?;
    if n > 10 {
        return Err(Error::SizeLimit { size: n, limit: 10 });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = C64::new(0.0, 0.0);
    heap_permutations(n, &mut perm, &mut |p| {
        total += p
            .iter()
            .enumerate()
            .map(|(i, &j)| m.get(i, j))
            .product::<C64>();
    });
    Ok(total)
}

fn heap_permutations(k: usize, p: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(p);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(k - 1, p, visit);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
    heap_permutations(k - 1, p, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_and_ones() {
        let id = ComplexMatrix::identity(3);
        assert!(close(permanent(&id).unwrap(), C64::new(1.0, 0.0), 1e-15));
        let ones = ComplexMatrix::from_fn(3, 3, |_, _| C64::new(1.0, 0.0));
        assert!(close(permanent(&ones).unwrap(), C64::new(6.0, 0.0), 1e-12));
    }

    #[test]
    fn unnormalized_dft3_is_minus_three() {
        let m = ComplexMatrix::from_fn(3, 3, |j, k| {
            C64::from_polar(1.0, 2.0 * PI * (j * k) as f64 / 3.0)
        });
        assert!(close(permanent(&m).unwrap(), C64::new(-3.0, 0.0), 1e-12));
        assert!(close(
            permanent_by_permutations(&m).unwrap(),
            C64::new(-3.0, 0.0),
            1e-12
        ));
    }

    #[test]
    fn empty_matrix_has_unit_permanent() {
        assert_eq!(
            permanent(&ComplexMatrix::zeros(0, 0)).unwrap(),
            C64::new(1.0, 0.0)
        );
    }

    #[test]
    fn rejects_rectangular_and_oversized() {
        assert!(matches!(
            permanent(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            permanent(&ComplexMatrix::zeros(21, 21)),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn all_ones_matches_factorial() {
        let ones = ComplexMatrix::from_fn(8, 8, |_, _| C64::new(1.0, 0.0));
        assert!(close(
            permanent(&ones).unwrap(),
            C64::new(40320.0, 0.0),
            1e-8
        ));
    }
}
