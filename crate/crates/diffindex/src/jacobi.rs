//! Jacobi number of an order matrix.
//!
//! For a non-negative integer matrix with r ≤ n, the Jacobi number is the
//! maximum of `Σ_i a[i][τ(i)]` over injections τ from rows into columns.
//! Small instances are enumerated exhaustively; larger ones go through a
//! maximum-weight assignment (Hungarian algorithm with potentials, padded
//! to a square matrix with zero rows). Ties are broken toward the
//! lexicographically smallest witness.

use crate::poly::System;
use thiserror::Error;

/// Exhaustive enumeration is used up to this many rows.
const EXHAUSTIVE_LIMIT: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JacobiError {
    #[error("order matrix has {r} rows but only {n} columns")]
    RowsExceedColumns { r: usize, n: usize },
    #[error("order matrix rows have unequal lengths")]
    Ragged,
}

/// A maximizing injection: `witness[i]` is the 0-based column assigned to
/// row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiAssignment {
    pub value: u64,
    pub witness: Vec<usize>,
}

fn validate(matrix: &[Vec<u32>]) -> Result<(usize, usize), JacobiError> {
    let r = matrix.len();
    let n = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|row| row.len() != n) {
        return Err(JacobiError::Ragged);
    }
    if r > n {
        return Err(JacobiError::RowsExceedColumns { r, n });
    }
    Ok((r, n))
}

pub fn jacobi_number(matrix: &[Vec<u32>]) -> Result<JacobiAssignment, JacobiError> {
    let (r, _) = validate(matrix)?;
    if r <= EXHAUSTIVE_LIMIT {
        Ok(exhaustive(matrix))
    } else {
        Ok(by_matching_impl(matrix))
    }
}

/// The assignment route, exposed so tests can compare it against the
/// exhaustive one on small instances.
pub fn jacobi_number_by_matching(matrix: &[Vec<u32>]) -> Result<JacobiAssignment, JacobiError> {
    validate(matrix)?;
    Ok(by_matching_impl(matrix))
}

/// `J(ℰ₀) + e − min ϵ`, the upper bound for ω + ord of a quasi-regular
/// system. The minimum runs over all matrix entries, absent-variable zeros
/// included.
pub fn jacobi_bound(system: &System) -> u64 {
    let assignment =
        jacobi_number(system.order_matrix()).expect("system metadata guarantees r <= n");
    assignment.value + system.max_order() as u64 - system.min_order_entry() as u64
}

fn exhaustive(matrix: &[Vec<u32>]) -> JacobiAssignment {
    let r = matrix.len();
    let n = matrix.first().map_or(0, Vec::len);
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut current = Vec::with_capacity(r);
    let mut used = vec![false; n];
    // columns are tried in ascending order and only strict improvements are
    // kept, so the first maximum found is the lexicographically smallest
    fn go(
        matrix: &[Vec<u32>],
        row: usize,
        sum: u64,
        current: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<(u64, Vec<usize>)>,
    ) {
        if row == matrix.len() {
            if best.as_ref().is_none_or(|(v, _)| sum > *v) {
                *best = Some((sum, current.clone()));
            }
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                current.push(c);
                go(
                    matrix,
                    row + 1,
                    sum + matrix[row][c] as u64,
                    current,
                    used,
                    best,
                );
                current.pop();
                used[c] = false;
            }
        }
    }
    go(matrix, 0, 0, &mut current, &mut used, &mut best);
    let (value, witness) = best.unwrap_or((0, Vec::new()));
    JacobiAssignment { value, witness }
}

fn by_matching_impl(matrix: &[Vec<u32>]) -> JacobiAssignment {
    let r = matrix.len();
    let n = matrix.first().map_or(0, Vec::len);
    let all_rows: Vec<usize> = (0..r).collect();
    let all_cols: Vec<usize> = (0..n).collect();
    let mut target = max_injection_value(matrix, &all_rows, &all_cols);
    let value = target;

    // greedy lexicographic recovery: lock each row to the smallest column
    // that keeps the remaining subproblem at the optimal value
    let mut witness = Vec::with_capacity(r);
    let mut free: Vec<usize> = all_cols;
    for i in 0..r {
        let rest_rows: Vec<usize> = (i + 1..r).collect();
        let mut locked = None;
        for (pos, &c) in free.iter().enumerate() {
            let mut rest_cols = free.clone();
            rest_cols.remove(pos);
            let rest = max_injection_value(matrix, &rest_rows, &rest_cols);
            if matrix[i][c] as u64 + rest == target {
                locked = Some((pos, c));
                break;
            }
        }
        let (pos, c) = locked.expect("an optimal column always exists");
        target -= matrix[i][c] as u64;
        free.remove(pos);
        witness.push(c);
    }
    JacobiAssignment { value, witness }
}

/// Maximum injection weight of the selected rows into the selected columns,
/// via a min-cost assignment on the negated, zero-padded square matrix.
fn max_injection_value(matrix: &[Vec<u32>], rows: &[usize], cols: &[usize]) -> u64 {
    let m = cols.len();
    if rows.is_empty() || m == 0 {
        return 0;
    }
    let cost: Vec<Vec<i64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i < rows.len() {
                        -(matrix[rows[i]][cols[j]] as i64)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    (-hungarian_min_cost(&cost)) as u64
}

/// Classic O(n³) Hungarian algorithm with row/column potentials; `a` must
/// be square. Returns the minimum assignment cost.
fn hungarian_min_cost(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| a[p[j] - 1][j - 1]).sum()
}
