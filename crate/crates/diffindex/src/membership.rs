//! Effective membership in the difference ideal generated by a system:
//! transform-order bounds, explicit cofactor certificates, and the degree
//! audit against the bound `deg(f) + D^{r(N+1)}`.
//!
//! A membership question for `f` is decided inside the level-(N+1)
//! prolongation: `f` lies in the difference ideal (restricted to the
//! ambient truncation) iff it reduces to zero there, and on success the
//! basis representations compose into cofactors `g_ij` with
//! `f = Σ g_ij · f_i^(j)`, `0 ≤ j ≤ N`. With `N` at least the order bound,
//! a failed reduction certifies non-membership under the quasi-regularity
//! assumptions.

use crate::groebner::Prolongation;
use crate::index::{mu_sequence, AnalysisError, MuProfile};
use crate::jacobi::jacobi_number;
use crate::poly::{Polynomial, System};
use num_bigint::BigUint;

/// `N = ω + max{−1, ord(f) − e}`, clamped at zero. (The clamp only acts in
/// the degenerate case ω = 0 and ord(f) < e, where the unclamped bound is
/// −1 because the only member of order below e is 0 itself; level 0 is
/// still sound since the truncation chain is increasing.)
pub fn order_bound_with(profile: &MuProfile, system: &System, f: &Polynomial) -> usize {
    let shortfall = f.order() as i64 - system.max_order() as i64;
    let n = profile.omega() as i64 + shortfall.max(-1);
    n.max(0) as usize
}

/// The order bound computed from scratch (runs the corank sequence).
pub fn order_bound(system: &System, f: &Polynomial) -> Result<usize, AnalysisError> {
    let profile = mu_sequence(system)?;
    Ok(order_bound_with(&profile, system, f))
}

/// The coarser bound `J(ℰ₀) − min ϵ + max{ord(f), e−1}`, available without
/// knowing ω.
pub fn coarse_order_bound(system: &System, f: &Polynomial) -> usize {
    let jacobi = jacobi_number(system.order_matrix()).expect("system metadata guarantees r <= n");
    let slack = jacobi.value - system.min_order_entry() as u64;
    let tail = f.order().max(system.max_order() - 1) as u64;
    (slack + tail) as usize
}

/// Degree bookkeeping for a certificate: every product `g_ij · f_i^(j)`
/// must stay within `deg(f) + D^{r(N+1)}` where `D` bounds the generator
/// degrees. At desk scale the bound is enormous compared to the observed
/// degrees; both are recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeAudit {
    /// D, the maximal total degree among the equations.
    pub degree_base: u32,
    /// deg(f) + D^{r(N+1)}
    pub bound: BigUint,
    /// deg(g_ij · f_i^(j)) per nonzero cofactor.
    pub term_degrees: Vec<((usize, usize), u32)>,
    pub max_term_degree: u32,
    pub within_bound: bool,
}

/// An explicit membership certificate `f = Σ g_ij · f_i^(j)`.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub query: Polynomial,
    /// N: the largest transform order of a generator the certificate uses.
    pub order_cap: usize,
    /// `((i, j), g_ij)` with i the 1-based equation index and j ≤ N the
    /// shift; zero cofactors are omitted.
    pub cofactors: Vec<((usize, usize), Polynomial)>,
    pub audit: DegreeAudit,
}

impl Certificate {
    /// Re-expands the certificate; equals the query for every certificate
    /// this module produces.
    pub fn expand(&self, system: &System) -> Polynomial {
        let mut acc = Polynomial::zero();
        for ((i, j), g) in &self.cofactors {
            let gen = system.equation(*i - 1).transform(*j as u32);
            acc = &acc + &(g * &gen);
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Member(Box<Certificate>),
    /// Not reducible at this transform-order cap; when the cap reaches the
    /// order bound this certifies non-membership under the quasi-regularity
    /// assumptions.
    NotMember {
        order_cap: usize,
    },
}

/// Decides membership of `f` at transform-order cap `N` and produces the
/// certificate on success.
pub fn certify(system: &System, f: &Polynomial, order_cap: usize) -> Verdict {
    let level = order_cap + 1;
    let mut prol = Prolongation::with_ambient(system, level, f.order());

    // a generator certifies itself
    let direct = prol.generators().iter().position(|g| g == f);
    let cofactors: Vec<((usize, usize), Polynomial)> = if let Some(pos) = direct {
        vec![(prol.labels()[pos], Polynomial::one())]
    } else {
        let gb = prol.gb_degrevlex();
        match gb.is_member(f) {
            None => return Verdict::NotMember { order_cap },
            Some(cof) => prol
                .labels()
                .iter()
                .zip(cof)
                .filter(|(_, g)| !g.is_zero())
                .map(|(&label, g)| (label, g))
                .collect(),
        }
    };

    let degree_base = system.max_total_degree();
    let exponent = (system.num_equations() * (order_cap + 1)) as u32;
    let bound = BigUint::from(f.total_degree()) + BigUint::from(degree_base).pow(exponent);
    let term_degrees: Vec<((usize, usize), u32)> = cofactors
        .iter()
        .map(|&((i, j), ref g)| {
            // total degree is additive over an integral domain
            let d = g.total_degree() + system.equation(i - 1).total_degree();
            ((i, j), d)
        })
        .collect();
    let max_term_degree = term_degrees.iter().map(|&(_, d)| d).max().unwrap_or(0);
    let within_bound = BigUint::from(max_term_degree) <= bound;

    let certificate = Certificate {
        query: f.clone(),
        order_cap,
        cofactors,
        audit: DegreeAudit {
            degree_base,
            bound,
            term_degrees,
            max_term_degree,
            within_bound,
        },
    };
    debug_assert_eq!(certificate.expand(system), *f);
    Verdict::Member(Box::new(certificate))
}
