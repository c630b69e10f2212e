//! Integer sparse-matrix kernels behind the exact spectral checks.
//!
//! Rational matrices are scaled by a common denominator first, so every power and
//! polynomial evaluation below is pure big-integer arithmetic. Work is split by
//! starting row: row `i` of `Q^k` is `e_i · Q^k`, so rows evolve independently.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

/// Square integer matrix stored as sparse rows of `(column, value)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSparse {
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl IntSparse {
    pub fn new(rows: Vec<Vec<(usize, BigInt)>>) -> Self {
        IntSparse { rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// `v · self` for a dense row vector `v`.
    pub fn left_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.order()];
        for (j, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (l, q) in &self.rows[j] {
                out[*l] += coeff * q;
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.order()];
        v[i] = BigInt::from(1);
        v
    }
}

/// `tr(Q^k)` for `k = 0..=max_power`.
pub fn power_traces(q: &IntSparse, max_power: usize) -> Vec<BigInt> {
    let n = q.order();
    let per_row: Vec<Vec<BigInt>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut v = q.unit(i);
            let mut diag = Vec::with_capacity(max_power + 1);
            diag.push(v[i].clone());
            for _ in 0..max_power {
                v = q.left_mul(&v);
                diag.push(v[i].clone());
            }
            diag
        })
        .collect();
    (0..=max_power)
        .map(|k| per_row.iter().map(|d| &d[k]).sum())
        .collect()
}

/// Evaluates `∏_s (Q - s·I)` and returns the first nonzero entry `(row, col, value)`,
/// or `None` when the product is the zero matrix.
pub fn product_of_shifts_witness(
    q: &IntSparse,
    shifts: &[BigInt],
) -> Option<(usize, usize, BigInt)> {
    let n = q.order();
    (0..n).into_par_iter().find_map_first(|i| {
        let mut v = q.unit(i);
        for s in shifts {
            let mut next = q.left_mul(&v);
            for (slot, x) in next.iter_mut().zip(&v) {
                if !x.is_zero() {
                    *slot -= s * x;
                }
            }
            v = next;
            if v.iter().all(Zero::is_zero) {
                return None;
            }
        }
        v.iter()
            .position(|x| !x.is_zero())
            .map(|j| (i, j, v[j].clone()))
    })
}
