//! The pseudo-Jacobian block matrices and their rank over the residue ring
//! of a prolongation ideal.
//!
//! For a system of r equations in n variables with maximal shift e, the
//! matrix at block level k and index i ≥ e−1 is the kr×kn lower block
//! triangular Jacobian of the transforms F^(i−e+1), …, F^(i−e+k) with
//! respect to the shifted variables Y^(i+1), …, Y^(i+k). Because partial
//! derivatives commute with the transform, block (a, b) is the transform by
//! i−e+a of ∂F/∂Y^(e+b−a), and every diagonal block is a transform of
//! ∂F/∂Y^(e).

use crate::groebner::GroebnerBasis;
use crate::poly::{Polynomial, System, Variable};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JacobianError {
    #[error("pseudo-Jacobian block level k must be at least 1")]
    LevelTooSmall,
    #[error("pseudo-Jacobian index i = {i} must be at least e - 1 = {min}")]
    IndexTooSmall { i: u32, min: u32 },
    #[error(
        "zero divisor during rank elimination: pivot ({pivot}) times entry ({entry}) \
         reduces to zero modulo the prolongation ideal, which is therefore not prime; \
         the quasi-regularity assumptions are violated"
    )]
    ZeroDivisor { pivot: String, entry: String },
}

/// One r×n block: the Jacobian of `F^(p)` with respect to `Y^(q)`.
#[derive(Debug, Clone)]
pub struct JacobianBlock {
    /// Transform level `p` applied to the equations.
    pub transform_level: u32,
    /// Shift `q` of the variables the block differentiates by.
    pub var_order: u32,
    /// r×n entries, `entries[l][j] = ∂ f_{l+1}^(p) / ∂ y_{j+1}^(q)`.
    pub entries: Vec<Vec<Polynomial>>,
}

/// The kr×kn block lower triangular matrix at level `k` and index `i`.
#[derive(Debug, Clone)]
pub struct PseudoJacobian {
    k: usize,
    i: u32,
    r: usize,
    n: usize,
    /// `blocks[a]` holds the nonzero blocks `(a, 0..=a)` of block row `a`.
    blocks: Vec<Vec<JacobianBlock>>,
}

/// Corank datum of one pseudo-Jacobian: `mu = kr − rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuValue {
    pub k: usize,
    pub rank: usize,
    pub mu: usize,
}

impl PseudoJacobian {
    pub fn build(system: &System, k: usize, i: u32) -> Result<Self, JacobianError> {
        let e = system.max_order();
        if k == 0 {
            return Err(JacobianError::LevelTooSmall);
        }
        if i + 1 < e {
            return Err(JacobianError::IndexTooSmall { i, min: e - 1 });
        }
        let r = system.num_equations();
        let n = system.num_vars();

        // base Jacobians ∂F/∂Y^(d) for d = 0..=e
        let base: Vec<Vec<Vec<Polynomial>>> = (0..=e)
            .map(|d| {
                system
                    .equations()
                    .iter()
                    .map(|f| {
                        (1..=n as u32)
                            .map(|j| f.partial(Variable::new(j, d)))
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let mut blocks = Vec::with_capacity(k);
        for a in 0..k {
            let p = i + 1 + a as u32 - e; // i − e + (a+1) ≥ 0
            let mut row = Vec::with_capacity(a + 1);
            for b in 0..=a {
                let gap = (a - b) as u32;
                let entries = if gap > e {
                    vec![vec![Polynomial::zero(); n]; r]
                } else {
                    let d = e - gap;
                    base[d as usize]
                        .iter()
                        .map(|row| row.iter().map(|p_| p_.transform(p)).collect())
                        .collect()
                };
                row.push(JacobianBlock {
                    transform_level: p,
                    var_order: i + 1 + b as u32,
                    entries,
                });
            }
            blocks.push(row);
        }
        Ok(PseudoJacobian { k, i, r, n, blocks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn rows(&self) -> usize {
        self.k * self.r
    }

    pub fn cols(&self) -> usize {
        self.k * self.n
    }

    /// Block `(a, b)`, 0-based; `None` above the diagonal where the matrix
    /// is structurally zero.
    pub fn block(&self, a: usize, b: usize) -> Option<&JacobianBlock> {
        self.blocks.get(a).and_then(|row| row.get(b))
    }

    /// The full kr×kn matrix, upper blocks filled with zeros.
    pub fn to_matrix(&self) -> Vec<Vec<Polynomial>> {
        let mut m = vec![vec![Polynomial::zero(); self.cols()]; self.rows()];
        for (a, row) in self.blocks.iter().enumerate() {
            for (b, block) in row.iter().enumerate() {
                for (l, brow) in block.entries.iter().enumerate() {
                    for (j, entry) in brow.iter().enumerate() {
                        m[a * self.r + l][b * self.n + j] = entry.clone();
                    }
                }
            }
        }
        m
    }

    /// Number of identically zero rows; the order data guarantees at least
    /// `Σ_j min{k, e − e_j}` of them.
    pub fn zero_row_count(&self) -> usize {
        self.to_matrix()
            .iter()
            .filter(|row| row.iter().all(Polynomial::is_zero))
            .count()
    }

    /// Rank over the residue ring of the prolongation ideal presented by
    /// `gb` (an entry counts as zero iff its normal form vanishes), together
    /// with the corank `mu`. The reduction uses fraction-free elimination
    /// with every intermediate entry kept in normal form.
    pub fn rank_mod(&self, gb: &GroebnerBasis) -> Result<MuValue, JacobianError> {
        let rank = rank_modulo(&self.to_matrix(), gb)?;
        Ok(MuValue {
            k: self.k,
            rank,
            mu: self.rows() - rank,
        })
    }
}

/// Rank of a polynomial matrix over the residue ring presented by `gb`,
/// by fraction-free Gaussian elimination. Pivots prefer entries whose
/// normal form has the lowest total degree (so nonzero constants win),
/// breaking ties by position. Fails if two entries that are nonzero modulo
/// the ideal multiply to zero modulo it — the zero-divisor symptom showing
/// the ideal is not prime.
pub fn rank_modulo(matrix: &[Vec<Polynomial>], gb: &GroebnerBasis) -> Result<usize, JacobianError> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Polynomial>> = matrix
        .iter()
        .map(|row| row.iter().map(|p| gb.normal_form(p)).collect())
        .collect();
    let mut row_free = vec![true; rows];
    let mut col_free = vec![true; cols];
    let mut rank = 0;

    loop {
        let mut pivot: Option<(usize, usize, u32)> = None;
        for (rr, row) in m.iter().enumerate().filter(|&(rr, _)| row_free[rr]) {
            for (cc, entry) in row.iter().enumerate().filter(|&(cc, _)| col_free[cc]) {
                if entry.is_zero() {
                    continue;
                }
                let deg = entry.total_degree();
                if pivot.as_ref().is_none_or(|&(_, _, d)| deg < d) {
                    pivot = Some((rr, cc, deg));
                }
            }
        }
        let Some((pr, pc, _)) = pivot else {
            return Ok(rank);
        };
        rank += 1;
        row_free[pr] = false;
        col_free[pc] = false;
        let pivot_row = m[pr].clone();
        let pivot_val = pivot_row[pc].clone();

        for rr in (0..rows).filter(|&rr| row_free[rr]) {
            let factor = m[rr][pc].clone();
            if factor.is_zero() {
                continue;
            }
            let cross = gb.normal_form(&(&pivot_val * &factor));
            if cross.is_zero() {
                return Err(JacobianError::ZeroDivisor {
                    pivot: pivot_val.to_string(),
                    entry: factor.to_string(),
                });
            }
            for cc in (0..cols).filter(|&cc| col_free[cc]) {
                let combo = &(&pivot_val * &m[rr][cc]) - &(&factor * &pivot_row[cc]);
                m[rr][cc] = gb.normal_form(&combo);
            }
            m[rr][pc] = Polynomial::zero();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::Prolongation;
    use crate::poly::Polynomial;

    fn v(base: u32, order: u32) -> Variable {
        Variable::new(base, order)
    }

    fn var(base: u32, order: u32) -> Polynomial {
        Polynomial::variable(v(base, order))
    }

    fn golden_system() -> System {
        let f1 = &var(1, 1) - &(&var(1, 0) * &var(3, 0));
        let f2 = &var(2, 1) - &(&var(2, 0) * &var(3, 0));
        let f3 = &(&var(1, 0) + &var(2, 0)) - &Polynomial::one();
        System::new(vec![f1, f2, f3], 3).unwrap()
    }

    fn shift_system() -> System {
        System::new(vec![&var(1, 1) - &var(1, 0)], 1).unwrap()
    }

    fn int(n: i64) -> Polynomial {
        Polynomial::from_int(n)
    }

    #[test]
    fn golden_level_one_matrix() {
        let sys = golden_system();
        let j = PseudoJacobian::build(&sys, 1, 0).unwrap();
        let expected = vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(0)],
        ];
        assert_eq!(j.to_matrix(), expected);
    }

    #[test]
    fn shift_system_level_two_matrix() {
        let sys = shift_system();
        let j = PseudoJacobian::build(&sys, 2, 0).unwrap();
        let expected = vec![vec![int(1), int(0)], vec![int(-1), int(1)]];
        assert_eq!(j.to_matrix(), expected);
    }

    #[test]
    fn golden_subdiagonal_block_before_reduction() {
        let sys = golden_system();
        let j = PseudoJacobian::build(&sys, 2, 0).unwrap();
        let block = j.block(1, 0).unwrap();
        assert_eq!(block.transform_level, 1);
        assert_eq!(block.var_order, 1);
        let expected = vec![
            vec![-&var(3, 1), int(0), -&var(1, 1)],
            vec![int(0), -&var(3, 1), -&var(2, 1)],
            vec![int(1), int(1), int(0)],
        ];
        assert_eq!(block.entries, expected);
        assert!(j.block(0, 1).is_none());
    }

    #[test]
    fn build_rejects_bad_indices() {
        let sys = golden_system();
        assert_eq!(
            PseudoJacobian::build(&sys, 0, 0).unwrap_err(),
            JacobianError::LevelTooSmall
        );
        let two_step =
            System::new(vec![&var(1, 2) - &var(2, 0), &var(2, 1) - &var(1, 0)], 2).unwrap();
        assert_eq!(
            PseudoJacobian::build(&two_step, 1, 0).unwrap_err(),
            JacobianError::IndexTooSmall { i: 0, min: 1 }
        );
    }

    #[test]
    fn shifting_i_transforms_the_matrix() {
        let sys = golden_system();
        let j0 = PseudoJacobian::build(&sys, 2, 0).unwrap();
        let j1 = PseudoJacobian::build(&sys, 2, 1).unwrap();
        let shifted: Vec<Vec<Polynomial>> = j0
            .to_matrix()
            .iter()
            .map(|row| row.iter().map(|p| p.transform(1)).collect())
            .collect();
        assert_eq!(j1.to_matrix(), shifted);
    }

    #[test]
    fn recursion_identities_hold_structurally() {
        let sys = golden_system();
        for k in 1..=2usize {
            let small = PseudoJacobian::build(&sys, k, 0).unwrap().to_matrix();
            let big = PseudoJacobian::build(&sys, k + 1, 0).unwrap().to_matrix();
            let (r, n) = (3, 3);
            // leading principal block grid is the lower-level matrix
            for row in 0..k * r {
                for col in 0..k * n {
                    assert_eq!(big[row][col], small[row][col]);
                }
            }
            // trailing block grid is its transform (the matrix at i+1)
            let at_next_i = PseudoJacobian::build(&sys, k, 1).unwrap().to_matrix();
            for row in 0..k * r {
                for col in 0..k * n {
                    assert_eq!(big[r + row][n + col], at_next_i[row][col]);
                }
            }
        }
    }

    #[test]
    fn golden_ranks_match_the_worked_example() {
        let sys = golden_system();
        for (k, rank, mu) in [(1usize, 2usize, 1usize), (2, 4, 2), (3, 7, 2)] {
            let mut prol = Prolongation::new(&sys, k);
            let gb = prol.gb_degrevlex();
            let j = PseudoJacobian::build(&sys, k, 0).unwrap();
            let got = j.rank_mod(gb).unwrap();
            assert_eq!(got, MuValue { k, rank, mu }, "at k = {k}");
        }
    }

    #[test]
    fn unit_triangular_matrices_have_full_rank() {
        let sys = shift_system();
        for k in 1..=4usize {
            let mut prol = Prolongation::new(&sys, k);
            let gb = prol.gb_degrevlex();
            let j = PseudoJacobian::build(&sys, k, 0).unwrap();
            let got = j.rank_mod(gb).unwrap();
            assert_eq!(got.rank, k);
            assert_eq!(got.mu, 0);
        }
    }

    #[test]
    fn null_row_lower_bound() {
        let sys = golden_system();
        let e = sys.max_order();
        for k in 1..=3usize {
            let j = PseudoJacobian::build(&sys, k, 0).unwrap();
            let lower: usize = sys
                .equation_orders()
                .iter()
                .map(|&ej| k.min((e - ej) as usize))
                .sum();
            assert!(j.zero_row_count() >= lower);
        }
    }

    #[test]
    fn zero_divisor_is_detected_for_a_non_prime_prolongation() {
        // f = y1 * (y1^(1) - 1) generates a non-prime ideal; at k = 2 the
        // elimination multiplies y1 by y1^(2) - 1, whose product reduces to
        // zero modulo the prolongation.
        let f = &(&var(1, 0) * &var(1, 1)) - &var(1, 0);
        let sys = System::new(vec![f], 1).unwrap();
        let mut prol = Prolongation::new(&sys, 2);
        let gb = prol.gb_degrevlex().clone();
        let j = PseudoJacobian::build(&sys, 2, 0).unwrap();
        assert!(matches!(
            j.rank_mod(&gb),
            Err(JacobianError::ZeroDivisor { .. })
        ));
    }
}
