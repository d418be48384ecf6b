//! Tau-perturbed problems `D y_n = f + H_n`, solved exactly.
//!
//! `H_n = sum_{i=1..M} tau_i rho_{n-i+1}` with `rho_k` a shifted Chebyshev or
//! Legendre polynomial and `M = nu + h`. The unknowns are the `tau_i` and one
//! free constant per kernel element. Range membership of `f + H_n` gives one
//! matching equation per inaccessible degree, the supplementary conditions give
//! `nu` more, and the resulting square system is solved over the rationals.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::canonical::{generate, CanonicalBasis};
use crate::echelon::{echelon_of, PivotRule};
use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::DiffOperator;
use crate::ratpoly::{classical_poly, rat, ClassicalKind, Polynomial, Rational};

/// `constant + sum_k coeffs[k] * v_k` over a fixed set of unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: Rational,
    pub coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn zero(nvars: usize) -> Self {
        Self {
            constant: Rational::zero(),
            coeffs: vec![Rational::zero(); nvars],
        }
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        Self {
            constant: c,
            ..Self::zero(nvars)
        }
    }

    /// The unknown `v_k` itself.
    pub fn var(k: usize, nvars: usize) -> Self {
        let mut f = Self::zero(nvars);
        f.coeffs[k] = rat(1);
        f
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(Zero::is_zero)
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &LinearForm, c: &Rational) {
        if c.is_zero() {
            return;
        }
        self.constant += c * &other.constant;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += c * b;
        }
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(values)
            .fold(self.constant.clone(), |acc, (a, v)| acc + a * v)
    }
}

/// Polynomial whose coefficients are affine in a set of unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicPoly {
    /// `terms[k]` is the coefficient of `x^k`.
    pub terms: Vec<LinearForm>,
    nvars: usize,
}

impl SymbolicPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            terms: Vec::new(),
            nvars,
        }
    }

    pub fn from_poly(p: &Polynomial, nvars: usize) -> Self {
        Self {
            terms: p
                .coeffs()
                .iter()
                .map(|c| LinearForm::constant(c.clone(), nvars))
                .collect(),
            nvars,
        }
    }

    /// `g_0 + g_1 x + ... + g_n x^n` with every coefficient its own unknown.
    pub fn generic(degree: usize) -> Self {
        let nvars = degree + 1;
        Self {
            terms: (0..nvars).map(|k| LinearForm::var(k, nvars)).collect(),
            nvars,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Highest power with a non-identically-zero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().rposition(|t| !t.is_zero())
    }

    pub fn coeff(&self, k: usize) -> LinearForm {
        self.terms
            .get(k)
            .cloned()
            .unwrap_or_else(|| LinearForm::zero(self.nvars))
    }

    /// `self += form * p`
    pub fn add_poly_times(&mut self, p: &Polynomial, form: &LinearForm) {
        if self.terms.len() < p.coeffs().len() {
            self.terms.resize(p.coeffs().len(), LinearForm::zero(self.nvars));
        }
        for (k, c) in p.coeffs().iter().enumerate() {
            self.terms[k].add_scaled(form, c);
        }
    }

    pub fn derivative(&self, order: usize) -> Self {
        let terms = (order..self.terms.len())
            .map(|k| {
                let factor: i64 = ((k - order + 1)..=k).map(|v| v as i64).product();
                let mut t = LinearForm::zero(self.nvars);
                t.add_scaled(&self.terms[k], &rat(factor));
                t
            })
            .collect();
        Self {
            terms,
            nvars: self.nvars,
        }
    }

    /// Value at `x` as an affine form in the unknowns.
    pub fn eval_at(&self, x: &Rational) -> LinearForm {
        let mut out = LinearForm::zero(self.nvars);
        let mut power = rat(1);
        for t in &self.terms {
            out.add_scaled(t, &power);
            power *= x;
        }
        out
    }

    /// Substitutes numeric values for every unknown.
    pub fn instantiate(&self, values: &[Rational]) -> Polynomial {
        Polynomial::new(self.terms.iter().map(|t| t.eval(values)).collect())
    }
}

/// Matching conditions for `g` to lie in the range of `D`: one affine form per
/// inaccessible degree `s`, `g_s - sum_{i not in S} g_i r_{i,s}`, which must vanish.
pub fn stmc(basis: &CanonicalBasis, g: &SymbolicPoly) -> Result<Vec<(usize, LinearForm)>> {
    if basis.inaccessible.is_empty() {
        return Ok(Vec::new());
    }
    let deg = g.degree().unwrap_or(0);
    if deg > basis.bound {
        return Err(Error::BoundExceeded {
            degree: deg,
            bound: basis.bound,
        });
    }
    Ok(basis
        .inaccessible
        .iter()
        .map(|&s| {
            let mut eq = g.coeff(s);
            for (&i, entry) in basis.entries.range(..=deg) {
                let r = entry.r.coeff(s);
                eq.add_scaled(&g.coeff(i), &-r);
            }
            (s, eq)
        })
        .collect())
}

/// `sum_{i not in S} g_i q_i` as a symbolic polynomial. Satisfies `D y = g`
/// exactly whenever the matching conditions hold.
pub fn particular_solution(basis: &CanonicalBasis, g: &SymbolicPoly) -> Result<SymbolicPoly> {
    let deg = g.degree().unwrap_or(0);
    if g.degree().is_some() && deg > basis.bound {
        return Err(Error::BoundExceeded {
            degree: deg,
            bound: basis.bound,
        });
    }
    let mut y = SymbolicPoly::zero(g.nvars());
    for (&i, entry) in basis.entries.range(..=deg) {
        y.add_poly_times(&entry.q, &g.coeff(i));
    }
    Ok(y)
}

/// General polynomial solution of `D y = g`: `particular + sum_w C_w kernel[w]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralSolution {
    pub particular: Polynomial,
    pub kernel: Vec<Polynomial>,
}

impl GeneralSolution {
    pub fn with_constants(&self, constants: &[Rational]) -> Polynomial {
        self.kernel
            .iter()
            .zip(constants)
            .fold(self.particular.clone(), |acc, (u, c)| &acc + &u.scale(c))
    }
}

/// Exact polynomial solution of `D y = g`, or [`Error::NotInRange`] when `g` is
/// not in the image of `D`.
pub fn exact_solve(basis: &CanonicalBasis, g: &Polynomial) -> Result<GeneralSolution> {
    let sym = SymbolicPoly::from_poly(g, 0);
    for (s, eq) in stmc(basis, &sym)? {
        if !eq.constant.is_zero() {
            return Err(Error::NotInRange { index: s });
        }
    }
    let particular = particular_solution(basis, &sym)?.instantiate(&[]);
    Ok(GeneralSolution {
        particular,
        kernel: basis.null_cps.clone(),
    })
}

/// One linear functional term `weight * y^(order)(point)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionTerm {
    pub point: Rational,
    pub order: usize,
    pub weight: Rational,
}

/// `sum weight * y^(order)(point) = rhs`, a point or mixed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub terms: Vec<ConditionTerm>,
    pub rhs: Rational,
}

impl Condition {
    /// `y^(order)(point) = rhs`
    pub fn point_value(point: Rational, order: usize, rhs: Rational) -> Self {
        Self {
            terms: vec![ConditionTerm {
                point,
                order,
                weight: rat(1),
            }],
            rhs,
        }
    }

    pub fn apply(&self, y: &Polynomial) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, t| {
            acc + &t.weight * y.derivative(t.order).eval(&t.point)
        })
    }

    fn apply_symbolic(&self, y: &SymbolicPoly) -> LinearForm {
        let mut out = LinearForm::zero(y.nvars());
        for t in &self.terms {
            out.add_scaled(&y.derivative(t.order).eval_at(&t.point), &t.weight);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub kind: ClassicalKind,
    pub interval: (Rational, Rational),
}

impl Default for Perturbation {
    fn default() -> Self {
        Self {
            kind: ClassicalKind::ChebyshevFirst,
            interval: (rat(-1), rat(1)),
        }
    }
}

impl Perturbation {
    pub fn poly(&self, k: usize) -> Result<Polynomial> {
        classical_poly(self.kind, k, &self.interval.0, &self.interval.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauProblem {
    pub operator: DiffOperator,
    pub rhs: Polynomial,
    pub conditions: Vec<Condition>,
    pub perturbation: Perturbation,
}

impl TauProblem {
    pub fn new(
        operator: DiffOperator,
        rhs: Polynomial,
        conditions: Vec<Condition>,
        perturbation: Perturbation,
    ) -> Result<Self> {
        if conditions.len() != operator.order() {
            return Err(Error::ConditionCount {
                expected: operator.order(),
                got: conditions.len(),
            });
        }
        if let Some(k) = conditions.iter().position(|c| c.terms.is_empty()) {
            return Err(Error::EmptyCondition(k));
        }
        let (a, b) = &perturbation.interval;
        if a >= b {
            return Err(Error::InvalidInterval {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        Ok(Self {
            operator,
            rhs,
            conditions,
            perturbation,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauSolution {
    pub order: usize,
    pub y: Polynomial,
    /// `tau_1..tau_M`; `tau_i` weighs `rho_{n-i+1}`.
    pub taus: Vec<Rational>,
    /// One constant per kernel element, in kernel-basis order.
    pub free_constants: Vec<Rational>,
    pub kernel: Vec<Polynomial>,
    /// `H_n`
    pub perturbation: Polynomial,
    /// Side of the square system that was solved (`nu + card S`).
    pub system_size: usize,
}

/// Number of tau parameters, `nu + h`.
pub fn tau_count(op: &DiffOperator) -> usize {
    let m = op.order() as i64 + op.height();
    debug_assert!(m >= 0, "h >= -nu always");
    m as usize
}

/// Solves the tau problem of order `n`, which must exceed the cutoff `N`.
pub fn solve_tau(problem: &TauProblem, n: usize) -> Result<TauSolution> {
    let op = &problem.operator;
    let profile = op.profile();
    if n as i64 <= profile.cutoff {
        return Err(Error::OrderTooLow {
            order: n,
            cutoff: profile.cutoff,
        });
    }
    let m = tau_count(op);
    if m > n + 1 {
        return Err(Error::TooManyTaus { order: n, tau_count: m });
    }

    let ech = echelon_of(op, &profile, PivotRule::SmallestIndex);
    let bound = n.max(problem.rhs.degree().unwrap_or(0));
    let basis = generate(op, &ech, bound);

    // unknowns: C_0..C_{alpha-1}, then tau_1..tau_M
    let alpha = ech.kernel_dim();
    let nvars = alpha + m;
    let rho: Vec<Polynomial> = (1..=m)
        .map(|i| problem.perturbation.poly(n + 1 - i))
        .collect::<Result<_>>()?;

    let mut g = SymbolicPoly::from_poly(&problem.rhs, nvars);
    for (i, p) in rho.iter().enumerate() {
        g.add_poly_times(p, &LinearForm::var(alpha + i, nvars));
    }

    let mut y = particular_solution(&basis, &g)?;
    for (w, u) in ech.kernel_basis().iter().enumerate() {
        y.add_poly_times(u, &LinearForm::var(w, nvars));
    }

    let mut equations: Vec<LinearForm> = stmc(&basis, &g)?.into_iter().map(|(_, e)| e).collect();
    for c in &problem.conditions {
        let mut e = c.apply_symbolic(&y);
        e.constant -= &c.rhs;
        equations.push(e);
    }
    // card(S) - alpha = h, so this is square
    assert_eq!(equations.len(), nvars, "tau system must be square");

    let a: Vec<Vec<Rational>> = equations.iter().map(|e| e.coeffs.clone()).collect();
    let b: Vec<Rational> = equations.iter().map(|e| -&e.constant).collect();
    let values = linalg::solve_square(a, b).ok_or(Error::SingularSystem)?;

    let taus = values[alpha..].to_vec();
    let perturbation = rho
        .iter()
        .zip(&taus)
        .fold(Polynomial::zero(), |acc, (p, t)| &acc + &p.scale(t));
    Ok(TauSolution {
        order: n,
        y: y.instantiate(&values),
        free_constants: values[..alpha].to_vec(),
        taus,
        kernel: ech.kernel_basis().to_vec(),
        perturbation,
        system_size: nvars,
    })
}

/// Post-solve diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    /// `(x, H_n(x))` at each sample point.
    pub perturbation_values: Vec<(Rational, Rational)>,
    pub max_abs_tau: Rational,
    /// `condition(y_n) - rhs` for each condition.
    pub condition_residuals: Vec<Rational>,
    /// `D y_n - f - H_n`
    pub equation_residual: Polynomial,
}

impl ResidualReport {
    pub fn is_exact(&self) -> bool {
        self.equation_residual.is_zero() && self.condition_residuals.iter().all(Zero::is_zero)
    }
}

pub fn residual_report(sol: &TauSolution, problem: &TauProblem, sample_points: &[Rational]) -> ResidualReport {
    let max_abs_tau = sol.taus.iter().map(|t| t.abs()).max().unwrap_or_else(Rational::zero);
    let equation_residual = &(&problem.operator.apply(&sol.y) - &problem.rhs) - &sol.perturbation;
    ResidualReport {
        perturbation_values: sample_points
            .iter()
            .map(|x| (x.clone(), sol.perturbation.eval(x)))
            .collect(),
        max_abs_tau,
        condition_residuals: problem.conditions.iter().map(|c| c.apply(&sol.y) - &c.rhs).collect(),
        equation_residual,
    }
}

/// Solutions for several orders, keyed by order. Orders are independent.
pub fn solve_orders(
    problem: &TauProblem,
    orders: impl IntoIterator<Item = usize>,
) -> BTreeMap<usize, Result<TauSolution>> {
    orders.into_iter().map(|n| (n, solve_tau(problem, n))).collect()
}
