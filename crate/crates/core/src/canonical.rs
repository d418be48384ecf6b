//! Canonical polynomials.
//!
//! For every accessible degree `m` (not in `S`) a canonical polynomial `q_m`
//! satisfies `D q_m = x^m + r_m`, where the residual `r_m` is supported on the
//! inaccessible degrees `S` and has degree below `m`. They are generated in
//! increasing `m` from the rows of the echelon form:
//!
//! ```text
//! q_sigma_j = (s_j - sum_{i < sigma_j, i not in S} a_ji q_i) / a_j,sigma_j
//! ```
//!
//! Rows come from the reduced finite block first and from `D(x^n)`, `n > N`,
//! afterwards; the latter block is already echelon with `sigma_n = n + h`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::echelon::EchelonResult;
use crate::linalg;
use crate::operator::{DiffOperator, OperatorProfile};
use crate::ratpoly::Polynomial;

/// Classification of a canonical polynomial by how its index is reached from `D(x^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalClass {
    /// Kernel element.
    Null,
    /// `m = deg D(x^n)` for some `n` with `deg D(x^n) = n + h`.
    PrimaryGeneric,
    /// `m = deg D(x^n)` only for `n` with `deg D(x^n) != n + h`.
    PrimarySingular,
    /// No monomial image has degree `m`.
    DerivedSingular,
}

impl CanonicalClass {
    pub fn name(self) -> &'static str {
        match self {
            CanonicalClass::Null => "null",
            CanonicalClass::PrimaryGeneric => "primary_generic",
            CanonicalClass::PrimarySingular => "primary_singular",
            CanonicalClass::DerivedSingular => "derived_singular",
        }
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalEntry {
    pub index: usize,
    pub q: Polynomial,
    pub r: Polynomial,
    /// Standard-basis element the recurrence started from.
    pub source: Polynomial,
    pub class: CanonicalClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalBasis {
    pub null_cps: Vec<Polynomial>,
    pub entries: BTreeMap<usize, CanonicalEntry>,
    pub inaccessible: BTreeSet<usize>,
    /// `n -> deg D(x^n)` for every nonzero monomial image of degree `<= bound`.
    pub monomial_sigma: BTreeMap<usize, usize>,
    pub height: i64,
    pub cutoff: i64,
    pub bound: usize,
}

impl CanonicalBasis {
    pub fn get(&self, m: usize) -> Option<&CanonicalEntry> {
        self.entries.get(&m)
    }

    pub fn q(&self, m: usize) -> Option<&Polynomial> {
        self.entries.get(&m).map(|e| &e.q)
    }

    /// Accessible degrees up to the bound.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// Whether `candidate` is another canonical polynomial of index `m`, i.e.
    /// differs from `q_m` by a kernel element.
    pub fn same_coset(&self, m: usize, candidate: &Polynomial) -> bool {
        self.q(m)
            .is_some_and(|q| linalg::in_span(&self.null_cps, &(candidate - q)))
    }
}

/// Runs the recurrence for every accessible degree `m <= degree_bound`.
pub fn generate(op: &DiffOperator, ech: &EchelonResult, degree_bound: usize) -> CanonicalBasis {
    let profile = op.profile();
    let s = &ech.inaccessible;
    let mut entries: BTreeMap<usize, CanonicalEntry> = BTreeMap::new();

    // (sigma, row coefficients, source) in ascending sigma
    let top = ech
        .nonzero_rows()
        .map(|(k, sigma, src)| (sigma, ech.reduced.row_poly(k), src.clone()));
    let first_bottom = (profile.cutoff + 1) as usize;
    let bottom = (first_bottom..)
        .map(|n| ((n as i64 + profile.height) as usize, n))
        .take_while(|&(sigma, _)| sigma <= degree_bound)
        .map(|(sigma, n)| (sigma, op.monomial_image(n), Polynomial::x_pow(n)));

    for (sigma, row, source) in top.chain(bottom) {
        if sigma > degree_bound {
            continue;
        }
        let pivot = row.coeff(sigma);
        debug_assert!(!pivot.is_zero());
        let mut acc = source.clone();
        for (i, a) in row.coeffs()[..sigma].iter().enumerate() {
            if a.is_zero() || s.contains(&i) {
                continue;
            }
            let qi = &entries.get(&i).expect("lower accessible indices are generated first").q;
            acc = &acc - &qi.scale(a);
        }
        let q = acc.scale(&pivot.recip());
        let r = &op.apply(&q) - &Polynomial::x_pow(sigma);
        debug_assert!(r.support().all(|k| s.contains(&k) && k < sigma));
        entries.insert(
            sigma,
            CanonicalEntry {
                index: sigma,
                q,
                r,
                source,
                class: CanonicalClass::Null,
            },
        );
    }

    let mut basis = CanonicalBasis {
        null_cps: ech.kernel_basis().to_vec(),
        entries,
        inaccessible: s.clone(),
        monomial_sigma: monomial_sigma(op, &profile, degree_bound),
        height: profile.height,
        cutoff: profile.cutoff,
        bound: degree_bound,
    };
    for (m, class) in classify(op, &basis) {
        basis.entries.get_mut(&m).unwrap().class = class;
    }
    basis
}

/// `n -> deg D(x^n)` for nonzero images with degree `<= bound`.
fn monomial_sigma(op: &DiffOperator, profile: &OperatorProfile, bound: usize) -> BTreeMap<usize, usize> {
    let last = profile.cutoff.max(bound as i64 - profile.height);
    if last < 0 {
        return BTreeMap::new();
    }
    (0..=last as usize)
        .filter_map(|n| op.monomial_image(n).degree().map(|d| (n, d)))
        .filter(|&(_, d)| d <= bound)
        .collect()
}

pub fn residuals(basis: &CanonicalBasis) -> BTreeMap<usize, crate::ratpoly::Polynomial> {
    basis.entries.iter().map(|(&m, e)| (m, e.r.clone())).collect()
}

/// Index-based classification of every entry. It depends only on `D`: the
/// monomial images `D(x^n)` decide, not the standard basis used for generation.
/// When several `n` reach `m`, one generic `n` is enough for `PrimaryGeneric`.
pub fn classify(op: &DiffOperator, basis: &CanonicalBasis) -> BTreeMap<usize, CanonicalClass> {
    let profile = op.profile();
    let bound = basis.entries.keys().next_back().copied().unwrap_or(0);
    let sigma = monomial_sigma(op, &profile, bound);
    basis
        .entries
        .keys()
        .map(|&m| (m, class_from_sigma(&sigma, profile.height, m)))
        .collect()
}

fn class_from_sigma(sigma: &BTreeMap<usize, usize>, height: i64, m: usize) -> CanonicalClass {
    let mut reached = sigma.iter().filter(|&(_, &s)| s == m).peekable();
    if reached.peek().is_none() {
        return CanonicalClass::DerivedSingular;
    }
    if reached.any(|(&n, _)| m as i64 == n as i64 + height) {
        CanonicalClass::PrimaryGeneric
    } else {
        CanonicalClass::PrimarySingular
    }
}

/// Classification of one canonical polynomial through the standard element it
/// was built from. A monomial source `x^n` with `deg D(x^n) = m` is generic when
/// `m = n + h` and singular otherwise; any other source falls back to the index
/// rule of [`classify`].
pub fn classify_with_source(op: &DiffOperator, m: usize, source: &Polynomial) -> CanonicalClass {
    let h = op.height();
    if let Some(n) = source.as_monomial() {
        if op.monomial_image(n).degree() == Some(m) {
            return if m as i64 == n as i64 + h {
                CanonicalClass::PrimaryGeneric
            } else {
                CanonicalClass::PrimarySingular
            };
        }
    }
    let profile = op.profile();
    class_from_sigma(&monomial_sigma(op, &profile, m), h, m)
}

/// Whether every complete sequence of canonical polynomials contains a
/// derived-singular one, i.e. some accessible degree is never `deg D(x^n)`.
///
/// Beyond the finite block `sigma_n = n + h` reaches every degree, so only
/// the columns `0..N+h+1` need checking.
pub fn has_derived_singular(op: &DiffOperator, ech: &EchelonResult) -> bool {
    let profile = op.profile();
    let width = profile.finite_width();
    if width == 0 {
        return false;
    }
    let reached: BTreeSet<usize> = (0..=profile.cutoff.max(0) as usize)
        .filter_map(|n| op.monomial_image(n).degree())
        .collect();
    (0..width).any(|m| !ech.inaccessible.contains(&m) && !reached.contains(&m))
}
