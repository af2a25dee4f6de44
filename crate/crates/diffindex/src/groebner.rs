//! Commutative-algebra kernel over the finite truncations `A_k` of the
//! shifted polynomial ring: Buchberger's algorithm with representation
//! tracking, normal forms, block-elimination ideals, ideal equality and
//! Krull dimension, plus the prolongation ideals built from a system.
//!
//! Every basis carries, for each element, an explicit cofactor vector over
//! the original generators; membership tests therefore come with exact
//! certificates.

use crate::poly::{cmp_degrevlex, cmp_degrevlex_by, Monomial, Polynomial, System, Variable};
use num_rational::BigRational;
use num_traits::One;
use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

/// Monomial order used for basis computations.
///
/// The elimination variant is a block order: monomials are compared first on
/// the variables with shift greater than `keep_max_order` (degrevlex), then
/// on the remaining block. Any monomial touching the upper block therefore
/// outranks every monomial inside `K[Y^[keep_max_order]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    DegRevLex,
    Eliminate { keep_max_order: u32 },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::DegRevLex => cmp_degrevlex(a, b),
            MonomialOrder::Eliminate { keep_max_order } => {
                cmp_degrevlex_by(a, b, |v| v.order() > keep_max_order)
                    .then_with(|| cmp_degrevlex_by(a, b, |v| v.order() <= keep_max_order))
            }
        }
    }
}

fn leading<'a>(
    p: &'a Polynomial,
    order: &MonomialOrder,
) -> Option<(&'a Monomial, &'a BigRational)> {
    p.leading_term_by(|a, b| order.cmp(a, b))
}

struct Reducer {
    poly: Polynomial,
    lm: Monomial,
    lc: BigRational,
}

impl Reducer {
    fn new(poly: Polynomial, order: &MonomialOrder) -> Self {
        let (lm, lc) = leading(&poly, order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .expect("reducer polynomial is nonzero");
        Reducer { poly, lm, lc }
    }
}

/// One event in a top-reduction chain.
enum ReductionStep {
    /// subtract `coef · mono · work[reducer]` from the running polynomial
    Subtract {
        reducer: usize,
        mono: Monomial,
        coef: BigRational,
    },
    /// the running polynomial was rescaled to primitive integer form
    Rescale { factor: BigRational },
}

/// A reduced S-pair: `poly = factor · fold(steps over t_l · work[left] −
/// t_r · work[right])`.
struct Combination {
    left: usize,
    right: usize,
    left_term: (Monomial, BigRational),
    right_term: (Monomial, BigRational),
    steps: Vec<ReductionStep>,
    factor: BigRational,
}

/// How a basis candidate arose. Cofactor vectors over the input generators
/// are expanded from these records after the algorithm finishes, and only
/// for the elements the final basis depends on; tracking them eagerly
/// through every reduction (most of which end in zero) dominates the whole
/// computation otherwise.
enum Derivation {
    /// `poly = factor · generators[generator]`
    Input {
        generator: usize,
        factor: BigRational,
    },
    Reduced(Box<Combination>),
}

struct WorkPoly {
    poly: Polynomial,
    lm: Monomial,
    lc: BigRational,
    derivation: Derivation,
}

impl WorkPoly {
    fn new(poly: Polynomial, derivation: Derivation, order: &MonomialOrder) -> Self {
        let (lm, lc) = leading(&poly, order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .expect("work polynomial is nonzero");
        WorkPoly {
            poly,
            lm,
            lc,
            derivation,
        }
    }
}

/// Positive factor that turns a nonzero polynomial into a primitive integer
/// one (integer coefficients with gcd 1). Keeping basis elements primitive
/// stops the rational coefficients from compounding across reductions.
fn primitive_scale(p: &Polynomial) -> Option<BigRational> {
    use num_integer::Integer;
    if p.is_zero() {
        return None;
    }
    let mut denom_lcm = num_bigint::BigInt::one();
    let mut numer_gcd = num_bigint::BigInt::from(0);
    for (_, c) in p.terms() {
        denom_lcm = denom_lcm.lcm(c.denom());
        numer_gcd = numer_gcd.gcd(c.numer());
    }
    Some(BigRational::new(denom_lcm, numer_gcd))
}

/// Reduces the leading term of `f` until it is irreducible, logging every
/// subtraction. After each step the running polynomial is rescaled to
/// primitive integer form (also logged), which stops quotient denominators
/// from compounding along long chains. Tails are left alone; the final
/// inter-reduction cleans them up.
fn top_reduce(
    mut f: Polynomial,
    steps: &mut Vec<ReductionStep>,
    work: &[WorkPoly],
    order: &MonomialOrder,
) -> Polynomial {
    loop {
        let Some((lm, lc)) = leading(&f, order).map(|(m, c)| (m.clone(), c.clone())) else {
            return f;
        };
        let Some(b) = work.iter().position(|w| w.lm.divides(&lm)) else {
            return f;
        };
        let w = &work[b];
        let q_mono = w.lm.quotient_into(&lm).expect("divisibility was checked");
        let q_coef = &lc / &w.lc;
        f = &f - &w.poly.mul_term(&q_mono, &q_coef);
        steps.push(ReductionStep::Subtract {
            reducer: b,
            mono: q_mono,
            coef: q_coef,
        });
        if let Some(factor) = primitive_scale(&f) {
            if !factor.is_one() {
                f = f.scale(&factor);
                steps.push(ReductionStep::Rescale { factor });
            }
        }
    }
}

/// Fills `memo[idx]` with the cofactor vector of `work[idx]` over the input
/// generators, expanding the derivation records on demand.
fn expand_rep(
    idx: usize,
    work: &[WorkPoly],
    gen_count: usize,
    memo: &mut Vec<Option<Vec<Polynomial>>>,
) {
    if memo[idx].is_some() {
        return;
    }
    let rep = match &work[idx].derivation {
        Derivation::Input { generator, factor } => {
            let mut rep = vec![Polynomial::zero(); gen_count];
            rep[*generator] = Polynomial::constant(factor.clone());
            rep
        }
        Derivation::Reduced(combination) => {
            let Combination {
                left,
                right,
                left_term,
                right_term,
                steps,
                factor,
            } = combination.as_ref();
            expand_rep(*left, work, gen_count, memo);
            expand_rep(*right, work, gen_count, memo);
            for step in steps {
                if let ReductionStep::Subtract { reducer, .. } = step {
                    expand_rep(*reducer, work, gen_count, memo);
                }
            }
            let left_rep = memo[*left].as_ref().unwrap();
            let right_rep = memo[*right].as_ref().unwrap();
            let mut rep: Vec<Polynomial> = left_rep
                .iter()
                .zip(right_rep)
                .map(|(a, b)| {
                    &a.mul_term(&left_term.0, &left_term.1)
                        - &b.mul_term(&right_term.0, &right_term.1)
                })
                .collect();
            for step in steps {
                match step {
                    ReductionStep::Subtract {
                        reducer,
                        mono,
                        coef,
                    } => {
                        let step_rep = memo[*reducer].as_ref().unwrap();
                        for (slot, r) in rep.iter_mut().zip(step_rep) {
                            *slot = &*slot - &r.mul_term(mono, coef);
                        }
                    }
                    ReductionStep::Rescale { factor } => {
                        for slot in rep.iter_mut() {
                            *slot = slot.scale(factor);
                        }
                    }
                }
            }
            rep.iter().map(|r| r.scale(factor)).collect()
        }
    };
    memo[idx] = Some(rep);
}

/// A reduced Gröbner basis with cofactor tracking over the input generators.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    ambient: Vec<Variable>,
    generators: Vec<Polynomial>,
    basis: Vec<Polynomial>,
    reps: Vec<Vec<Polynomial>>,
}

impl GroebnerBasis {
    /// Runs Buchberger's algorithm (normal selection strategy, product and
    /// chain criteria) and inter-reduces the result. The reduced basis is
    /// unique for the ideal and order, so equal ideals yield equal bases.
    pub fn compute(
        generators: Vec<Polynomial>,
        ambient: Vec<Variable>,
        order: MonomialOrder,
    ) -> Self {
        let ambient_set: BTreeSet<Variable> = ambient.iter().copied().collect();
        for g in &generators {
            for v in g.variables() {
                assert!(
                    ambient_set.contains(&v),
                    "generator variable {v} outside the ambient ring"
                );
            }
        }

        let mut work: Vec<WorkPoly> = Vec::new();
        for (l, g) in generators.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let factor = primitive_scale(g).unwrap();
            work.push(WorkPoly::new(
                g.scale(&factor),
                Derivation::Input {
                    generator: l,
                    factor,
                },
                &order,
            ));
        }

        type PairKey = (u32, Monomial, usize, usize);
        let mut queue: BinaryHeap<Reverse<PairKey>> = BinaryHeap::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        let push_pair = |queue: &mut BinaryHeap<Reverse<PairKey>>,
                         pending: &mut HashSet<(usize, usize)>,
                         work: &[WorkPoly],
                         i: usize,
                         j: usize| {
            let lcm = work[i].lm.lcm(&work[j].lm);
            // product criterion: coprime leading monomials reduce to zero
            if lcm == work[i].lm.mul(&work[j].lm) {
                return;
            }
            pending.insert((i, j));
            queue.push(Reverse((lcm.degree(), lcm, i, j)));
        };

        for i in 0..work.len() {
            for j in i + 1..work.len() {
                push_pair(&mut queue, &mut pending, &work, i, j);
            }
        }

        while let Some(Reverse((_, lcm, i, j))) = queue.pop() {
            if !pending.remove(&(i, j)) {
                continue;
            }
            // chain criterion: some k divides the lcm and both flanking
            // pairs were already treated
            let chained = (0..work.len()).any(|k| {
                k != i
                    && k != j
                    && work[k].lm.divides(&lcm)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chained {
                continue;
            }

            let (wi, wj) = (&work[i], &work[j]);
            let mi = wi.lm.quotient_into(&lcm).unwrap();
            let mj = wj.lm.quotient_into(&lcm).unwrap();
            let ci = BigRational::one() / &wi.lc;
            let cj = BigRational::one() / &wj.lc;
            let spoly = &wi.poly.mul_term(&mi, &ci) - &wj.poly.mul_term(&mj, &cj);

            let mut steps = Vec::new();
            let remainder = top_reduce(spoly, &mut steps, &work, &order);
            if remainder.is_zero() {
                continue;
            }
            let factor = primitive_scale(&remainder).unwrap();
            let derivation = Derivation::Reduced(Box::new(Combination {
                left: i,
                right: j,
                left_term: (mi, ci),
                right_term: (mj, cj),
                steps,
                factor: factor.clone(),
            }));
            let t = work.len();
            work.push(WorkPoly::new(remainder.scale(&factor), derivation, &order));
            for k in 0..t {
                push_pair(&mut queue, &mut pending, &work, k, t);
            }
        }

        // minimal basis: drop elements whose leading monomial is divisible
        // by another retained leading monomial
        let mut by_lm: Vec<usize> = (0..work.len()).collect();
        by_lm.sort_by(|&a, &b| order.cmp(&work[a].lm, &work[b].lm));
        let mut kept: Vec<usize> = Vec::new();
        for idx in by_lm {
            if !kept.iter().any(|&k| work[k].lm.divides(&work[idx].lm)) {
                kept.push(idx);
            }
        }

        // cofactor vectors over the original generators, expanded only for
        // the elements the final basis needs
        let mut memo: Vec<Option<Vec<Polynomial>>> = vec![None; work.len()];
        for &idx in &kept {
            expand_rep(idx, &work, generators.len(), &mut memo);
        }

        // inter-reduce tails and normalize to monic form
        let mut reduced: Vec<(Polynomial, Vec<Polynomial>, Monomial)> = Vec::new();
        for (pos, &idx) in kept.iter().enumerate() {
            let other_indices: Vec<usize> = kept
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != pos)
                .map(|(_, &k)| k)
                .collect();
            let others: Vec<Reducer> = other_indices
                .iter()
                .map(|&k| Reducer {
                    poly: work[k].poly.clone(),
                    lm: work[k].lm.clone(),
                    lc: work[k].lc.clone(),
                })
                .collect();
            let mut rep = memo[idx].clone().unwrap();
            let mut quots = vec![Polynomial::zero(); others.len()];
            let tail =
                reduce_with_quotients_impl(work[idx].poly.clone(), &others, &order, &mut quots);
            for (q, &k) in quots.iter().zip(&other_indices) {
                if q.is_zero() {
                    continue;
                }
                let other_rep = memo[k].as_ref().unwrap();
                for (slot, r) in rep.iter_mut().zip(other_rep) {
                    *slot = &*slot - &(q * r);
                }
            }
            debug_assert!(!tail.is_zero(), "minimal basis element reduced to zero");
            let lc = leading(&tail, &order).unwrap().1.clone();
            let inv = BigRational::one() / &lc;
            let poly = tail.scale(&inv);
            let rep: Vec<Polynomial> = rep.iter().map(|r| r.scale(&inv)).collect();
            let lm = leading(&poly, &order).unwrap().0.clone();
            reduced.push((poly, rep, lm));
        }

        reduced.sort_by(|a, b| order.cmp(&b.2, &a.2));
        let (basis, reps) = reduced.into_iter().map(|(p, r, _)| (p, r)).unzip();
        let gb = GroebnerBasis {
            order,
            ambient,
            generators,
            basis,
            reps,
        };
        debug_assert!(gb.representations_are_exact());
        gb
    }

    /// The zero ideal in the given ring.
    pub fn zero_ideal(ambient: Vec<Variable>, order: MonomialOrder) -> Self {
        GroebnerBasis {
            order,
            ambient,
            generators: Vec::new(),
            basis: Vec::new(),
            reps: Vec::new(),
        }
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn ambient(&self) -> &[Variable] {
        &self.ambient
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    /// Cofactor vector of `basis()[idx]` over `generators()`.
    pub fn representation(&self, idx: usize) -> &[Polynomial] {
        &self.reps[idx]
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.iter().any(|b| b.is_constant() && !b.is_zero())
    }

    fn representations_are_exact(&self) -> bool {
        self.basis.iter().zip(&self.reps).all(|(b, rep)| {
            let mut acc = Polynomial::zero();
            for (c, g) in rep.iter().zip(&self.generators) {
                acc = &acc + &(c * g);
            }
            acc == *b
        })
    }

    /// Remainder of `f` on division by the basis: no term of the result is
    /// divisible by a leading monomial, and `f - result` lies in the ideal.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        self.reduce_with_quotients(f).0
    }

    /// Division with quotient tracking: `f = Σ q_b · basis_b + remainder`.
    pub fn reduce_with_quotients(&self, f: &Polynomial) -> (Polynomial, Vec<Polynomial>) {
        let reducers: Vec<Reducer> = self
            .basis
            .iter()
            .map(|b| Reducer::new(b.clone(), &self.order))
            .collect();
        let mut quots = vec![Polynomial::zero(); reducers.len()];
        let rem = reduce_with_quotients_impl(f.clone(), &reducers, &self.order, &mut quots);
        (rem, quots)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Membership test with certificate: on success returns cofactors `a_l`
    /// over the original generators with `f = Σ a_l · g_l` exactly.
    pub fn is_member(&self, f: &Polynomial) -> Option<Vec<Polynomial>> {
        let (rem, quots) = self.reduce_with_quotients(f);
        if !rem.is_zero() {
            return None;
        }
        let mut cofactors = vec![Polynomial::zero(); self.generators.len()];
        for (q, rep) in quots.iter().zip(&self.reps) {
            if q.is_zero() {
                continue;
            }
            for (slot, r) in cofactors.iter_mut().zip(rep) {
                *slot = &*slot + &(q * r);
            }
        }
        Some(cofactors)
    }

    /// Two bases present the same ideal iff they were computed in the same
    /// ring under the same order and their reduced bases coincide.
    pub fn same_ideal(&self, other: &GroebnerBasis) -> bool {
        self.order == other.order && self.ambient == other.ambient && self.basis == other.basis
    }

    /// Restricts a block-order basis to the kept block, yielding the reduced
    /// basis of the intersection with `K[Y^[keep_max_order]]`.
    pub fn elimination_ideal(&self) -> GroebnerBasis {
        let MonomialOrder::Eliminate { keep_max_order } = self.order else {
            panic!("elimination requires a block order");
        };
        let mut basis = Vec::new();
        let mut reps = Vec::new();
        for (b, rep) in self.basis.iter().zip(&self.reps) {
            let lm = leading(b, &self.order).unwrap().0;
            if lm.max_order().is_none_or(|o| o <= keep_max_order) {
                debug_assert!(b.order() <= keep_max_order);
                basis.push(b.clone());
                reps.push(rep.clone());
            }
        }
        GroebnerBasis {
            order: MonomialOrder::DegRevLex,
            ambient: self
                .ambient
                .iter()
                .copied()
                .filter(|v| v.order() <= keep_max_order)
                .collect(),
            generators: self.generators.clone(),
            basis,
            reps,
        }
    }

    /// Krull dimension of the quotient ring, read off the leading-term
    /// ideal as the largest variable set meeting no leading support.
    /// `None` for the unit ideal (the quotient is the zero ring).
    pub fn krull_dimension(&self) -> Option<usize> {
        if self.is_unit_ideal() {
            return None;
        }
        let mut supports: Vec<BTreeSet<Variable>> = Vec::new();
        for b in &self.basis {
            let lm = leading(b, &self.order).unwrap().0;
            let support: BTreeSet<Variable> = lm.powers().iter().map(|&(v, _)| v).collect();
            supports.push(support);
        }
        supports.sort_by_key(|s| s.len());
        supports.dedup();
        let mut minimal: Vec<BTreeSet<Variable>> = Vec::new();
        for s in supports {
            if !minimal.iter().any(|t| t.is_subset(&s)) {
                minimal.push(s);
            }
        }
        let mut best = minimal.len(); // hitting one variable per set always works
        min_hitting_set(&minimal, 0, &mut best);
        Some(self.ambient.len() - best)
    }
}

fn min_hitting_set(sets: &[BTreeSet<Variable>], chosen: usize, best: &mut usize) {
    if chosen >= *best {
        return;
    }
    let Some(first) = sets.first() else {
        *best = chosen;
        return;
    };
    for &v in first {
        let remaining: Vec<BTreeSet<Variable>> =
            sets.iter().filter(|s| !s.contains(&v)).cloned().collect();
        min_hitting_set(&remaining, chosen + 1, best);
    }
}

fn reduce_with_quotients_impl(
    mut f: Polynomial,
    reducers: &[Reducer],
    order: &MonomialOrder,
    quots: &mut [Polynomial],
) -> Polynomial {
    loop {
        let mut target: Option<(Monomial, BigRational, usize)> = None;
        for (m, c) in f.terms() {
            if let Some(b) = reducers.iter().position(|w| w.lm.divides(m)) {
                let better = match &target {
                    None => true,
                    Some((tm, _, _)) => order.cmp(m, tm) == Ordering::Greater,
                };
                if better {
                    target = Some((m.clone(), c.clone(), b));
                }
            }
        }
        let Some((m, c, b)) = target else {
            return f;
        };
        let w = &reducers[b];
        let q_mono = w.lm.quotient_into(&m).expect("divisibility was checked");
        let q_coef = &c / &w.lc;
        f = &f - &w.poly.mul_term(&q_mono, &q_coef);
        quots[b].add_term(q_mono, q_coef);
    }
}

/// The ideal generated by the first `level` transforms of every equation,
/// living in the truncation `A_{ambient_order}`. Level 0 is the zero ideal.
#[derive(Debug, Clone)]
pub struct Prolongation {
    level: usize,
    ambient_order: u32,
    n: usize,
    generators: Vec<Polynomial>,
    labels: Vec<(usize, usize)>,
    cache: HashMap<MonomialOrder, GroebnerBasis>,
}

impl Prolongation {
    pub fn new(system: &System, level: usize) -> Self {
        Self::with_ambient(system, level, 0)
    }

    /// Builds the level-`level` prolongation, widening the ambient ring to
    /// at least `Y^[min_order]` when requested (needed when intersecting
    /// with a truncation larger than the generators' natural ring).
    pub fn with_ambient(system: &System, level: usize, min_order: u32) -> Self {
        let e = system.max_order();
        let natural = if level == 0 {
            e - 1
        } else {
            level as u32 - 1 + e
        };
        let ambient_order = natural.max(min_order);
        let mut generators = Vec::with_capacity(level * system.num_equations());
        let mut labels = Vec::with_capacity(level * system.num_equations());
        for (i, f) in system.equations().iter().enumerate() {
            for j in 0..level {
                generators.push(f.transform(j as u32));
                labels.push((i + 1, j));
            }
        }
        Prolongation {
            level,
            ambient_order,
            n: system.num_vars(),
            generators,
            labels,
            cache: HashMap::new(),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn ambient_order(&self) -> u32 {
        self.ambient_order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// `(equation index 1..=r, shift)` for each generator, in order.
    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    /// All variables of `A_{ambient_order}` in ascending order.
    pub fn ambient_vars(&self) -> Vec<Variable> {
        (0..=self.ambient_order)
            .flat_map(|o| (1..=self.n as u32).map(move |b| Variable::new(b, o)))
            .collect()
    }

    /// The reduced basis under `order`, computed once and cached.
    pub fn gb(&mut self, order: MonomialOrder) -> &GroebnerBasis {
        if !self.cache.contains_key(&order) {
            let gb = GroebnerBasis::compute(self.generators.clone(), self.ambient_vars(), order);
            self.cache.insert(order, gb);
        }
        &self.cache[&order]
    }

    pub fn gb_degrevlex(&mut self) -> &GroebnerBasis {
        self.gb(MonomialOrder::DegRevLex)
    }

    /// Reduced basis of the intersection with `A_keep`.
    pub fn truncation_ideal(&mut self, keep: u32) -> GroebnerBasis {
        assert!(
            keep <= self.ambient_order,
            "truncation exceeds the ambient ring"
        );
        self.gb(MonomialOrder::Eliminate {
            keep_max_order: keep,
        })
        .elimination_ideal()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::System;

    fn v(base: u32, order: u32) -> Variable {
        Variable::new(base, order)
    }

    fn var(base: u32, order: u32) -> Polynomial {
        Polynomial::variable(v(base, order))
    }

    fn vars_up_to(n: u32, order: u32) -> Vec<Variable> {
        (0..=order)
            .flat_map(|o| (1..=n).map(move |b| Variable::new(b, o)))
            .collect()
    }

    fn golden_system() -> System {
        let f1 = &var(1, 1) - &(&var(1, 0) * &var(3, 0));
        let f2 = &var(2, 1) - &(&var(2, 0) * &var(3, 0));
        let f3 = &(&var(1, 0) + &var(2, 0)) - &Polynomial::one();
        System::new(vec![f1, f2, f3], 3).unwrap()
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let gb =
            GroebnerBasis::compute(vec![var(1, 0)], vars_up_to(1, 0), MonomialOrder::DegRevLex);
        assert_eq!(gb.basis(), &[var(1, 0)]);
    }

    #[test]
    fn golden_level_one_basis_contains_the_algebraic_constraint() {
        let sys = golden_system();
        let mut p = Prolongation::new(&sys, 1);
        let gb = p.gb_degrevlex();
        let constraint = &(&var(1, 0) + &var(2, 0)) - &Polynomial::one();
        assert!(gb.basis().contains(&constraint), "basis: {:?}", gb.basis());
    }

    #[test]
    fn saturation_to_unit_ideal() {
        // S-pair chase by hand: S(y1^2, y1*y2 - 1) = y1, then
        // S(y1*y2 - 1, y1) = -1, so the ideal is the whole ring and the
        // reduced basis is {1}. Explicitly:
        // 1 = y2^2 * y1^2 - (y1*y2 + 1) * (y1*y2 - 1).
        let g1 = &var(1, 0) * &var(1, 0);
        let g2 = &(&var(1, 0) * &var(2, 0)) - &Polynomial::one();
        let gb = GroebnerBasis::compute(
            vec![g1.clone(), g2.clone()],
            vars_up_to(2, 0),
            MonomialOrder::DegRevLex,
        );
        assert_eq!(gb.basis(), &[Polynomial::one()]);
        assert!(gb.is_unit_ideal());
        let cof = gb.is_member(&Polynomial::one()).unwrap();
        let expanded = &(&cof[0] * &g1) + &(&cof[1] * &g2);
        assert_eq!(expanded, Polynomial::one());
    }

    #[test]
    fn membership_in_level_two_prolongation() {
        let sys = golden_system();
        let mut p = Prolongation::new(&sys, 2);
        let gens = p.generators().to_vec();
        let gb = p.gb_degrevlex();

        let query = &var(3, 0) - &Polynomial::one();
        let cof = gb
            .is_member(&query)
            .expect("y3 - 1 lies in the prolongation");
        let mut acc = Polynomial::zero();
        for (c, g) in cof.iter().zip(&gens) {
            acc = &acc + &(c * g);
        }
        assert_eq!(acc, query);

        assert!(
            gb.is_member(&var(1, 0)).is_none(),
            "y1 is a free coordinate"
        );

        let zero_cof = gb.is_member(&Polynomial::zero()).unwrap();
        assert!(zero_cof.iter().all(Polynomial::is_zero));
    }

    #[test]
    fn normal_form_is_idempotent_and_congruent() {
        let sys = golden_system();
        let mut p = Prolongation::new(&sys, 2);
        let gens = p.generators().to_vec();
        let gb = p.gb_degrevlex();
        let f = &(&var(1, 2) * &var(3, 1)) + &var(2, 1);
        let nf = gb.normal_form(&f);
        assert_eq!(gb.normal_form(&nf), nf);
        // f - nf lies in the ideal, witnessed by exact cofactors
        let diff = &f - &nf;
        let cof = gb.is_member(&diff).expect("difference must be a member");
        let mut acc = Polynomial::zero();
        for (c, g) in cof.iter().zip(&gens) {
            acc = &acc + &(c * g);
        }
        assert_eq!(acc, diff);
    }

    #[test]
    fn every_spair_of_a_computed_basis_reduces_to_zero() {
        let sys = golden_system();
        let mut p = Prolongation::new(&sys, 2);
        let gb = p.gb_degrevlex().clone();
        let basis = gb.basis();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let (lmi, lci) = leading(&basis[i], &gb.order()).unwrap();
                let (lmj, lcj) = leading(&basis[j], &gb.order()).unwrap();
                let lcm = lmi.lcm(lmj);
                let s = &basis[i].mul_term(
                    &lmi.quotient_into(&lcm).unwrap(),
                    &(BigRational::one() / lci),
                ) - &basis[j].mul_term(
                    &lmj.quotient_into(&lcm).unwrap(),
                    &(BigRational::one() / lcj),
                );
                assert!(gb.normal_form(&s).is_zero(), "S({i},{j}) did not reduce");
            }
        }
    }

    #[test]
    fn golden_truncation_chain() {
        let sys = golden_system();
        let c1 = Prolongation::new(&sys, 1).truncation_ideal(0);
        let c2 = Prolongation::new(&sys, 2).truncation_ideal(0);
        let c3 = Prolongation::new(&sys, 3).truncation_ideal(0);

        let constraint = &(&var(1, 0) + &var(2, 0)) - &Polynomial::one();
        let closure = &var(3, 0) - &Polynomial::one();
        assert_eq!(c1.basis(), std::slice::from_ref(&constraint));
        assert_eq!(c2.basis(), &[closure, constraint]);
        assert!(c2.same_ideal(&c3));
        assert!(!c1.same_ideal(&c2));
    }

    #[test]
    fn elimination_matches_whole_polynomial_filter() {
        // brute-force check: keeping exactly the block-order basis elements
        // all of whose variables stay in the kept block gives the same set
        let sys = golden_system();
        let mut p = Prolongation::new(&sys, 2);
        let block = p.gb(MonomialOrder::Eliminate { keep_max_order: 0 }).clone();
        let filtered: Vec<Polynomial> = block
            .basis()
            .iter()
            .filter(|b| b.order() == 0)
            .cloned()
            .collect();
        let eliminated = block.elimination_ideal();
        assert_eq!(eliminated.basis(), filtered.as_slice());
    }

    #[test]
    fn cyclic_three_is_zero_dimensional() {
        // x + y + z, xy + yz + zx, xyz − 1 cuts out six points
        let (x, y, z) = (var(1, 0), var(2, 0), var(3, 0));
        let g1 = &(&x + &y) + &z;
        let g2 = &(&(&x * &y) + &(&y * &z)) + &(&z * &x);
        let g3 = &(&(&x * &y) * &z) - &Polynomial::one();
        let gens = vec![g1, g2, g3];
        let gb = GroebnerBasis::compute(gens.clone(), vars_up_to(3, 0), MonomialOrder::DegRevLex);
        assert!(!gb.is_unit_ideal());
        assert_eq!(gb.krull_dimension(), Some(0));
        // exact cofactors for a known member: x^3 − 1 vanishes on all six
        // points, but x does not cut the variety, so x^2 has to fail
        let member = &x.pow(3) - &Polynomial::one();
        let cof = gb.is_member(&member).expect("x^3 - 1 lies in the ideal");
        let mut acc = Polynomial::zero();
        for (c, g) in cof.iter().zip(&gens) {
            acc = &acc + &(c * g);
        }
        assert_eq!(acc, member);
        assert!(gb.is_member(&x.pow(2)).is_none());
    }

    #[test]
    fn krull_dimension_cases() {
        let sys = golden_system();
        let trunc = Prolongation::new(&sys, 2).truncation_ideal(0);
        assert_eq!(trunc.krull_dimension(), Some(1));

        let zero = GroebnerBasis::zero_ideal(vars_up_to(3, 0), MonomialOrder::DegRevLex);
        assert_eq!(zero.krull_dimension(), Some(3));

        let full = GroebnerBasis::compute(
            vec![var(1, 0), var(2, 0), var(3, 0)],
            vars_up_to(3, 0),
            MonomialOrder::DegRevLex,
        );
        assert_eq!(full.krull_dimension(), Some(0));

        let unit = GroebnerBasis::compute(
            vec![Polynomial::one()],
            vars_up_to(3, 0),
            MonomialOrder::DegRevLex,
        );
        assert_eq!(unit.krull_dimension(), None);
    }

    #[test]
    fn prolongation_shape() {
        let sys = golden_system();
        let p = Prolongation::new(&sys, 2);
        assert_eq!(p.generators().len(), 6);
        assert_eq!(p.ambient_order(), 2);
        assert_eq!(
            p.labels(),
            &[(1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1)]
        );
        assert!(p
            .generators()
            .iter()
            .all(|g| g.order() <= p.ambient_order()));
        let p0 = Prolongation::new(&sys, 0);
        assert!(p0.generators().is_empty());
        assert_eq!(p0.ambient_order(), 0);
    }
}
