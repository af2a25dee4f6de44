//! The difference index pipeline: corank sequence μ_k, its stabilization
//! point ω, the order e·r − μ_ω, the constraint-chain cross-check, the
//! regularity table, and the quasi-regularity verification.
//!
//! All computations run in the unlocalized truncations A_k; the prolongation
//! ideals are assumed prime there (this holds whenever the difference ideal
//! generated by the system is itself reflexive and prime). The tool cannot
//! decide that hypothesis; the zero-divisor guard in the rank elimination is
//! the only runtime symptom of its failure.

use crate::groebner::{GroebnerBasis, MonomialOrder, Prolongation};
use crate::jacobi::{jacobi_bound, jacobi_number, JacobiAssignment};
use crate::poly::{Polynomial, System, Variable};
use crate::pseudo_jacobian::{rank_modulo, JacobianError, MuValue, PseudoJacobian};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(
        "corank sequence did not stabilize within the cap {cap}; \
         the quasi-regularity assumptions are violated"
    )]
    NotStabilized { cap: usize },
    #[error("corank mu_{k} = {mu} violates the structural bounds [{lower}, {upper}]")]
    MuBounds {
        k: usize,
        mu: usize,
        lower: usize,
        upper: usize,
    },
    #[error("corank sequence decreased at k = {k} (mu went from {prev} to {mu})")]
    MuDecreased { k: usize, prev: usize, mu: usize },
    #[error("constraint chain not stationary within the cap {cap}")]
    ChainNotStationary { cap: usize },
    #[error("constraint chain stalled at h = {h} but grew again two steps later")]
    ChainResumed { h: usize },
    #[error("the level-{level} prolongation is the unit ideal; the system is inconsistent")]
    UnitIdeal { level: usize },
    #[error("index i = {i} must be at least e - 1 = {min}")]
    IndexTooSmall { i: u32, min: u32 },
    #[error(
        "regularity table mismatch at i = {i}: trdeg = {trdeg} but the dimension \
         polynomial gives {phi}"
    )]
    RegularityMismatch { i: u32, trdeg: usize, phi: usize },
}

/// The corank sequence μ_0, …, μ_{ω+1} with its stabilization point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuProfile {
    values: Vec<usize>,
    ranks: Vec<usize>,
    omega: usize,
    cap: usize,
}

impl MuProfile {
    /// μ_0 = 0 up to μ_{ω+1}; strictly increasing before ω, then constant.
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// rank of the level-k matrix for k = 1..=ω+1.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn mu_omega(&self) -> usize {
        self.values[self.omega]
    }
}

/// Structural bounds for μ_k from the per-equation shifts:
/// `Σ_j min{k, e−e_j} ≤ μ_k ≤ min{k, e}·r`.
pub fn mu_bounds(system: &System, k: usize) -> (usize, usize) {
    let e = system.max_order();
    let lower = system
        .equation_orders()
        .iter()
        .map(|&ej| k.min((e - ej) as usize))
        .sum();
    let upper = k.min(e as usize) * system.num_equations();
    (lower, upper)
}

/// One corank value, computed at index `i` with the zero test taken modulo
/// the prolongation `level_shift` steps above the natural one.
pub fn mu_value(
    system: &System,
    k: usize,
    i: u32,
    level_shift: usize,
) -> Result<MuValue, AnalysisError> {
    let e = system.max_order();
    if i + 1 < e {
        return Err(AnalysisError::IndexTooSmall { i, min: e - 1 });
    }
    let level = (i + 1 - e) as usize + k + level_shift;
    let mut prol = Prolongation::new(system, level);
    let gb = prol.gb_degrevlex();
    if gb.is_unit_ideal() {
        return Err(AnalysisError::UnitIdeal { level });
    }
    let jac = PseudoJacobian::build(system, k, i)?;
    Ok(jac.rank_mod(gb)?)
}

/// Runs the corank sequence at the default index i = e−1 until the first
/// repetition μ_{k+1} = μ_k; the k where that happens is the difference
/// index ω. Fails if the sequence has not stabilized by the cap
/// `e + Σ e_j + 1`, decreases, or leaves the structural bounds — each of
/// which falsifies the quasi-regularity assumptions.
pub fn mu_sequence(system: &System) -> Result<MuProfile, AnalysisError> {
    mu_sequence_with(system, system.max_order() - 1, 0)
}

pub fn mu_sequence_with(
    system: &System,
    i: u32,
    level_shift: usize,
) -> Result<MuProfile, AnalysisError> {
    let cap = system.mu_cap();
    let mut values = vec![0usize];
    let mut ranks = Vec::new();
    for k in 1..=cap {
        let mv = mu_value(system, k, i, level_shift)?;
        let (lower, upper) = mu_bounds(system, k);
        if mv.mu < lower || mv.mu > upper {
            return Err(AnalysisError::MuBounds {
                k,
                mu: mv.mu,
                lower,
                upper,
            });
        }
        let prev = *values.last().unwrap();
        if mv.mu < prev {
            return Err(AnalysisError::MuDecreased { k, prev, mu: mv.mu });
        }
        values.push(mv.mu);
        ranks.push(mv.rank);
        if mv.mu == prev {
            return Ok(MuProfile {
                values,
                ranks,
                omega: k - 1,
                cap,
            });
        }
    }
    Err(AnalysisError::NotStabilized { cap })
}

/// One row of the forced corank table (no stabilization logic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuRow {
    pub k: usize,
    pub rank: usize,
    pub mu: usize,
    pub lower: usize,
    pub upper: usize,
}

pub fn mu_table(
    system: &System,
    k_max: usize,
    i: u32,
    level_shift: usize,
) -> Result<Vec<MuRow>, AnalysisError> {
    (1..=k_max)
        .map(|k| {
            let mv = mu_value(system, k, i, level_shift)?;
            let (lower, upper) = mu_bounds(system, k);
            Ok(MuRow {
                k,
                rank: mv.rank,
                mu: mv.mu,
                lower,
                upper,
            })
        })
        .collect()
}

/// `ord = e·r − μ_ω`, the constant term of the dimension polynomial.
pub fn order_of_ideal(profile: &MuProfile, system: &System) -> usize {
    let er = system.max_order() as usize * system.num_equations();
    er - profile.mu_omega()
}

fn truncation_at(system: &System, level: usize, i: u32) -> Result<GroebnerBasis, AnalysisError> {
    let mut prol = Prolongation::with_ambient(system, level, i);
    if prol
        .gb(MonomialOrder::Eliminate { keep_max_order: i })
        .is_unit_ideal()
    {
        return Err(AnalysisError::UnitIdeal { level });
    }
    Ok(prol.truncation_ideal(i))
}

/// Independent oracle for ω through the manifold of constraints: the least
/// h at which the chain of truncated prolongation ideals
/// `Δ_{i−e+1+h} ∩ A_i` becomes stationary (checked for two further steps).
pub fn omega_by_constraints(system: &System, i: u32) -> Result<usize, AnalysisError> {
    let e = system.max_order();
    if i + 1 < e {
        return Err(AnalysisError::IndexTooSmall { i, min: e - 1 });
    }
    let base = (i + 1 - e) as usize;
    let cap = system.mu_cap();
    let mut prev = truncation_at(system, base, i)?;
    for h in 0..=cap {
        let next = truncation_at(system, base + h + 1, i)?;
        if prev.same_ideal(&next) {
            let confirm = truncation_at(system, base + h + 2, i)?;
            if !next.same_ideal(&confirm) {
                return Err(AnalysisError::ChainResumed { h });
            }
            return Ok(h);
        }
        prev = next;
    }
    Err(AnalysisError::ChainNotStationary { cap })
}

/// Transcendence degree of `Frac(A_i / (Δ_level ∩ A_i))`, computed as the
/// Krull dimension of the truncated prolongation ideal.
pub fn trdeg_prolongation(system: &System, i: u32, level: usize) -> Result<usize, AnalysisError> {
    truncation_at(system, level, i)?
        .krull_dimension()
        .ok_or(AnalysisError::UnitIdeal { level })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityRow {
    pub i: u32,
    pub level: usize,
    pub trdeg: usize,
    pub phi: usize,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub rows: Vec<RegularityRow>,
    /// e − 1, the proven bound for the regularity.
    pub regularity_bound: u32,
    /// least i from which the table agrees with the dimension polynomial
    pub observed_regularity: u32,
}

/// Tabulates trdeg(A_i/(Δ ∩ A_i)) against the dimension polynomial
/// `φ(i) = (n−r)(i+1) + ord` for i = 0..=e+1. Agreement is mandatory for
/// i ≥ e−1; smaller i may disagree, which is what the regularity measures.
pub fn regularity_report(system: &System) -> Result<RegularityReport, AnalysisError> {
    let profile = mu_sequence(system)?;
    regularity_report_with(system, &profile)
}

pub fn regularity_report_with(
    system: &System,
    profile: &MuProfile,
) -> Result<RegularityReport, AnalysisError> {
    let e = system.max_order();
    let n = system.num_vars();
    let r = system.num_equations();
    let ord = order_of_ideal(profile, system);
    let omega = profile.omega();
    let mut rows = Vec::new();
    for i in 0..=e + 1 {
        // the chain over A_i is stationary from this level on
        let level = omega + (i + 1).saturating_sub(e) as usize;
        let trdeg = trdeg_prolongation(system, i, level)?;
        let phi = (n - r) * (i as usize + 1) + ord;
        let matches = trdeg == phi;
        if i + 1 >= e && !matches {
            return Err(AnalysisError::RegularityMismatch { i, trdeg, phi });
        }
        rows.push(RegularityRow {
            i,
            level,
            trdeg,
            phi,
            matches,
        });
    }
    let observed_regularity = rows
        .iter()
        .rev()
        .take_while(|row| row.matches)
        .last()
        .map(|row| row.i)
        .unwrap_or(e + 1);
    Ok(RegularityReport {
        rows,
        regularity_bound: e - 1,
        observed_regularity,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiRegularityRow {
    pub k: usize,
    pub rank: usize,
    pub expected: usize,
    pub full: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiRegularityReport {
    pub rows: Vec<QuasiRegularityRow>,
    pub verified_up_to: usize,
    pub first_failure: Option<usize>,
}

/// Verifies, for k = 1..=k_max, that the full Jacobian of the first k
/// transforms of every equation with respect to all of Y^[k−1+e] has full
/// row rank modulo the level-k prolongation. This checks the defining
/// condition of quasi-regularity for finitely many k; the universal
/// statement over all k is not decidable here.
pub fn quasi_regularity_check(
    system: &System,
    k_max: usize,
) -> Result<QuasiRegularityReport, AnalysisError> {
    let mut rows = Vec::new();
    let mut first_failure = None;
    for k in 1..=k_max {
        let mut prol = Prolongation::new(system, k);
        let vars: Vec<Variable> = prol.ambient_vars();
        let matrix: Vec<Vec<Polynomial>> = prol
            .generators()
            .iter()
            .map(|g| vars.iter().map(|&v| g.partial(v)).collect())
            .collect();
        let gb = prol.gb_degrevlex();
        if gb.is_unit_ideal() {
            return Err(AnalysisError::UnitIdeal { level: k });
        }
        let rank = rank_modulo(&matrix, gb)?;
        let expected = k * system.num_equations();
        let full = rank == expected;
        rows.push(QuasiRegularityRow {
            k,
            rank,
            expected,
            full,
        });
        if !full {
            first_failure = Some(k);
            break;
        }
    }
    let verified_up_to = match first_failure {
        Some(k) => k - 1,
        None => k_max,
    };
    Ok(QuasiRegularityReport {
        rows,
        verified_up_to,
        first_failure,
    })
}

/// Everything the index analysis produces, including the cross-check of ω
/// against the constraint-chain oracle.
#[derive(Debug, Clone)]
pub struct IndexReport {
    pub mu: MuProfile,
    pub order: usize,
    pub jacobi: JacobiAssignment,
    pub jacobi_bound: u64,
    pub bound_satisfied: bool,
    pub regularity: RegularityReport,
    pub omega_constraints: usize,
    pub cross_check_agrees: bool,
}

pub fn index_report(system: &System, i: Option<u32>) -> Result<IndexReport, AnalysisError> {
    let default_i = system.max_order() - 1;
    let i = i.unwrap_or(default_i);
    let mu = mu_sequence_with(system, i, 0)?;
    let order = order_of_ideal(&mu, system);
    let jacobi = jacobi_number(system.order_matrix()).expect("system metadata guarantees r <= n");
    let bound = jacobi_bound(system);
    let bound_satisfied = (mu.omega() + order) as u64 <= bound;
    let regularity = regularity_report_with(system, &mu)?;
    let omega_constraints = omega_by_constraints(system, i)?;
    let cross_check_agrees = omega_constraints == mu.omega();
    Ok(IndexReport {
        mu,
        order,
        jacobi,
        jacobi_bound: bound,
        bound_satisfied,
        regularity,
        omega_constraints,
        cross_check_agrees,
    })
}
