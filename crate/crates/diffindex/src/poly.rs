//! Sparse difference polynomials over the rationals.
//!
//! A difference polynomial is an ordinary polynomial in the doubly indexed
//! indeterminates `y_j^(i)` — variable `j` shifted `i` times. The transform
//! operator raises every shift by one and fixes coefficients (the base field
//! is ℚ with the identity endomorphism). Coefficients are exact arbitrary
//! precision rationals so that zero tests and rank computations are exact.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// A single indeterminate `y_j^(i)`: base variable `base` (1-based) shifted
/// `order` times.
///
/// Variables are totally ordered by `(order, base)`: higher shifts compare
/// greater, and within one shift level a larger base index compares greater.
/// This order is what monomial orders and block eliminations build on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    order: u32,
    base: u32,
}

impl Variable {
    pub fn new(base: u32, order: u32) -> Self {
        assert!(base >= 1, "variable base index is 1-based");
        Variable { order, base }
    }

    /// The `j` of `y_j^(i)` (1-based).
    pub fn base(&self) -> u32 {
        self.base
    }

    /// The shift `i` of `y_j^(i)`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The same base variable shifted `k` further times.
    pub fn shifted(&self, k: u32) -> Self {
        Variable {
            order: self.order + k,
            base: self.base,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 0 {
            write!(f, "y{}", self.base)
        } else {
            write!(f, "y{}^({})", self.base, self.order)
        }
    }
}

/// Power product of variables. Exponents are sorted by variable and never
/// zero, so two equal monomials are structurally equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    powers: Vec<(Variable, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn variable(v: Variable) -> Self {
        Monomial {
            powers: vec![(v, 1)],
        }
    }

    /// Builds a monomial from arbitrary (variable, exponent) pairs, merging
    /// duplicates and dropping zero exponents.
    pub fn from_powers<I: IntoIterator<Item = (Variable, u32)>>(iter: I) -> Self {
        let mut map: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in iter {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            powers: map.into_iter().collect(),
        }
    }

    pub fn powers(&self) -> &[(Variable, u32)] {
        &self.powers
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_of(&self, v: Variable) -> u32 {
        self.powers
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, e)| e)
    }

    /// Highest shift among the variables present, if any.
    pub fn max_order(&self) -> Option<u32> {
        self.powers.iter().map(|&(v, _)| v.order).max()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut powers = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut a, mut b) = (
            self.powers.iter().peekable(),
            other.powers.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        powers.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        powers.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        powers.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => {
                    powers.extend(a.cloned());
                    break;
                }
                (None, Some(_)) => {
                    powers.extend(b.cloned());
                    break;
                }
                (None, None) => break,
            }
        }
        Monomial { powers }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.powers.iter().all(|&(v, e)| other.degree_of(v) >= e)
    }

    /// `other / self`, if the quotient has no negative exponents.
    pub fn quotient_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let powers = other
            .powers
            .iter()
            .filter_map(|&(v, e)| {
                let q = e - self.degree_of(v);
                (q > 0).then_some((v, q))
            })
            .collect();
        Some(Monomial { powers })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<Variable, u32> = self.powers.iter().copied().collect();
        for &(v, e) in &other.powers {
            let slot = map.entry(v).or_insert(0);
            *slot = (*slot).max(e);
        }
        Monomial {
            powers: map.into_iter().collect(),
        }
    }

    /// Every variable shifted `k` further times. Exponents are unchanged.
    pub fn shifted(&self, k: u32) -> Monomial {
        Monomial {
            powers: self
                .powers
                .iter()
                .map(|&(v, e)| (v.shifted(k), e))
                .collect(),
        }
    }
}

/// Degree–reverse-lexicographic comparison restricted to the variables
/// accepted by `keep`. With `keep = |_| true` this is plain degrevlex over
/// the `(order, base)` variable order.
pub fn cmp_degrevlex_by<F: Fn(Variable) -> bool>(a: &Monomial, b: &Monomial, keep: F) -> Ordering {
    let deg = |m: &Monomial| -> u64 {
        m.powers
            .iter()
            .filter(|&&(v, _)| keep(v))
            .map(|&(_, e)| e as u64)
            .sum()
    };
    match deg(a).cmp(&deg(b)) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Graded tie: walk both supports from the smallest variable up; at the
    // first variable where the exponents differ, the monomial with the
    // larger exponent is the smaller one.
    let mut ia = a.powers.iter().filter(|&&(v, _)| keep(v));
    let mut ib = b.powers.iter().filter(|&&(v, _)| keep(v));
    let (mut pa, mut pb) = (ia.next(), ib.next());
    loop {
        match (pa, pb) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                Ordering::Less => return Ordering::Less,
                Ordering::Greater => return Ordering::Greater,
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    pa = ia.next();
                    pb = ib.next();
                }
            },
        }
    }
}

pub fn cmp_degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    cmp_degrevlex_by(a, b, |_| true)
}

/// Sparse polynomial in the shifted variables with exact rational
/// coefficients. The term map never stores zero coefficients, so structural
/// equality coincides with mathematical equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Polynomial::constant(BigRational::from_integer(n.into()))
    }

    pub fn variable(v: Variable) -> Self {
        Polynomial::term(Monomial::variable(v), BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Highest shift occurring in the polynomial; 0 for constants.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .filter_map(Monomial::max_order)
            .max()
            .unwrap_or(0)
    }

    /// Highest shift at which base variable `base` occurs, or `None` if the
    /// variable does not occur at all.
    pub fn order_of_base(&self, base: u32) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.powers.iter())
            .filter(|&&(v, _)| v.base == base)
            .map(|&(v, _)| v.order)
            .max()
    }

    pub fn max_base(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.powers.iter())
            .map(|&(v, _)| v.base)
            .max()
    }

    /// All variables that occur with nonzero exponent.
    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        let mut seen = std::collections::BTreeSet::new();
        self.terms
            .keys()
            .flat_map(|m| m.powers.iter().map(|&(v, _)| v))
            .filter(move |v| seen.insert(*v))
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one();
        for _ in 0..n {
            result = &result * self;
        }
        result
    }

    /// Applies the transform `k` times: every variable's shift is raised by
    /// `k`, coefficients stay fixed. This is a ring endomorphism.
    pub fn transform(&self, k: u32) -> Polynomial {
        if k == 0 {
            return self.clone();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.shifted(k), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: Variable) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.degree_of(v);
            if e == 0 {
                continue;
            }
            let lowered = Monomial::from_powers(m.powers.iter().map(|&(w, k)| {
                if w == v {
                    (w, k - 1)
                } else {
                    (w, k)
                }
            }));
            out.add_term(lowered, c * BigRational::from_integer(e.into()));
        }
        out
    }

    /// Leading term under the comparison `cmp` (largest monomial).
    pub fn leading_term_by<F>(&self, cmp: F) -> Option<(&Monomial, &BigRational)>
    where
        F: Fn(&Monomial, &Monomial) -> Ordering,
    {
        self.terms.iter().max_by(|(m1, _), (m2, _)| cmp(m1, m2))
    }

    /// Renders the polynomial with a custom base-variable naming. Terms are
    /// listed in descending degrevlex order; the output is re-parseable.
    pub fn to_string_with<F: Fn(u32) -> String>(&self, name_of: F) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|(m1, _), (m2, _)| cmp_degrevlex(m2, m1));
        let mut out = String::new();
        for (idx, (m, c)) in terms.iter().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let abs = c.abs();
            let mono = render_monomial(m, &name_of);
            match mono {
                None => out.push_str(&abs.to_string()),
                Some(s) => {
                    if abs.is_one() {
                        out.push_str(&s);
                    } else {
                        out.push_str(&abs.to_string());
                        out.push('*');
                        out.push_str(&s);
                    }
                }
            }
        }
        out
    }
}

fn render_monomial<F: Fn(u32) -> String>(m: &Monomial, name_of: &F) -> Option<String> {
    if m.is_one() {
        return None;
    }
    let parts: Vec<String> = m
        .powers
        .iter()
        .map(|&(v, e)| {
            let mut s = name_of(v.base);
            if v.order > 0 {
                s.push_str(&format!("^({})", v.order));
            }
            if e > 1 {
                s.push_str(&format!("^{}", e));
            }
            s
        })
        .collect();
    Some(parts.join("*"))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(|b| format!("y{}", b)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: Self) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: Self) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: Self) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("system has no equations")]
    Empty,
    #[error("system has {r} equations but only {n} variables")]
    TooManyEquations { r: usize, n: usize },
    #[error("equation f{index} is constant")]
    ConstantEquation { index: usize },
    #[error("equation f{index} uses y{base}, but only {n} variables are declared")]
    VariableOutOfRange { index: usize, base: u32, n: usize },
    #[error("no equation involves a transformed variable (maximal shift is 0)")]
    NoTransform,
}

/// A difference algebraic system `f_1, …, f_r` in `n` base variables,
/// together with derived metadata: the maximal shift `e`, the per-equation
/// shifts, and the order matrix whose `(i, j)` entry is the highest shift of
/// `y_j` in `f_i` (0 when `y_j` is absent from `f_i`).
#[derive(Debug, Clone)]
pub struct System {
    n: usize,
    equations: Vec<Polynomial>,
    max_order: u32,
    equation_orders: Vec<u32>,
    order_matrix: Vec<Vec<u32>>,
}

impl System {
    pub fn new(equations: Vec<Polynomial>, n: usize) -> Result<Self, SystemError> {
        if equations.is_empty() {
            return Err(SystemError::Empty);
        }
        let r = equations.len();
        if r > n {
            return Err(SystemError::TooManyEquations { r, n });
        }
        let mut order_matrix = Vec::with_capacity(r);
        let mut equation_orders = Vec::with_capacity(r);
        for (idx, f) in equations.iter().enumerate() {
            if f.is_constant() {
                return Err(SystemError::ConstantEquation { index: idx + 1 });
            }
            if let Some(base) = f.max_base() {
                if base as usize > n {
                    return Err(SystemError::VariableOutOfRange {
                        index: idx + 1,
                        base,
                        n,
                    });
                }
            }
            let row: Vec<u32> = (1..=n as u32)
                .map(|j| f.order_of_base(j).unwrap_or(0))
                .collect();
            order_matrix.push(row);
            equation_orders.push(f.order());
        }
        let max_order = equation_orders.iter().copied().max().unwrap_or(0);
        if max_order == 0 {
            return Err(SystemError::NoTransform);
        }
        Ok(System {
            n,
            equations,
            max_order,
            equation_orders,
            order_matrix,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn equation(&self, i: usize) -> &Polynomial {
        &self.equations[i]
    }

    /// The maximal shift `e` over all equations and variables; always ≥ 1.
    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// Per-equation maximal shifts `e_j`.
    pub fn equation_orders(&self) -> &[u32] {
        &self.equation_orders
    }

    pub fn order_matrix(&self) -> &[Vec<u32>] {
        &self.order_matrix
    }

    /// Minimal entry of the order matrix, absent-variable zeros included.
    pub fn min_order_entry(&self) -> u32 {
        self.order_matrix
            .iter()
            .flatten()
            .copied()
            .min()
            .unwrap_or(0)
    }

    /// Search cap for the corank sequence: `e + Σ e_j + 1`.
    pub fn mu_cap(&self) -> usize {
        self.max_order as usize
            + self
                .equation_orders
                .iter()
                .map(|&o| o as usize)
                .sum::<usize>()
            + 1
    }

    /// Maximal total degree among the equations.
    pub fn max_total_degree(&self) -> u32 {
        self.equations
            .iter()
            .map(Polynomial::total_degree)
            .max()
            .unwrap_or(0)
    }
}
