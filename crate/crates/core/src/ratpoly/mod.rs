//! Exact rational scalars, dense polynomials, falling factorials, natural
//! roots and the classical orthogonal families used as perturbation terms.

mod poly;
mod rational;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use poly::Polynomial;
pub use rational::{display_rational, format_rational, parse_rational, rat, ratio, to_f64, Rational};

use crate::error::{Error, Result};

/// The falling factorial `n(n-1)...(n-i+1)` as a polynomial in `n`.
pub fn falling_factorial(i: usize) -> Polynomial {
    (0..i).fold(Polynomial::one(), |acc, k| {
        &acc * &Polynomial::from_ints(&[-(k as i64), 1])
    })
}

/// Every nonnegative integer root of `p`.
///
/// Exhaustive search over `[0, B]` with the Cauchy bound
/// `B = 1 + max|a_i| / |a_d|`, further capped by the integer-root divisor
/// bound once the factor `n^k` has been split off.
pub fn natural_roots(p: &Polynomial) -> Result<BTreeSet<u64>> {
    let lead = p.leading_coeff().ok_or(Error::ZeroPolynomial)?;
    let mut roots = BTreeSet::new();
    let low = p.lowest_power().unwrap_or(0);
    if low > 0 {
        roots.insert(0);
    }

    let coeffs = &p.coeffs()[low..];
    let max_ratio = coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| rational::abs(c) / rational::abs(lead))
        .max()
        .unwrap_or_else(Rational::zero);
    let cauchy = (max_ratio + Rational::one()).ceil().to_integer();

    // integer form of the reduced polynomial; any integer root divides its constant term
    let denom_lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let constant = (&coeffs[0] * Rational::from_integer(denom_lcm)).to_integer().abs();
    let limit = cauchy.min(constant);
    let limit = limit.to_u64().unwrap_or(u64::MAX);

    for n in 1..=limit {
        if p.eval(&Rational::from_integer(BigInt::from(n))).is_zero() {
            roots.insert(n);
        }
    }
    Ok(roots)
}

/// Classical orthogonal family used for perturbation terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalKind {
    ChebyshevFirst,
    Legendre,
}

impl ClassicalKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassicalKind::ChebyshevFirst => "chebyshev",
            ClassicalKind::Legendre => "legendre",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "chebyshev" | "chebyshev_first" | "t" => Some(ClassicalKind::ChebyshevFirst),
            "legendre" | "p" => Some(ClassicalKind::Legendre),
            _ => None,
        }
    }
}

/// `T_k` or `P_k` shifted to `[a, b]` through `t = (2x - a - b) / (b - a)`.
pub fn classical_poly(kind: ClassicalKind, k: usize, a: &Rational, b: &Rational) -> Result<Polynomial> {
    Ok(classical_family(kind, k, a, b)?.pop().expect("k+1 members"))
}

/// Members `0..=k` of the shifted family.
pub fn classical_family(kind: ClassicalKind, k: usize, a: &Rational, b: &Rational) -> Result<Vec<Polynomial>> {
    if a >= b {
        return Err(Error::InvalidInterval {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let width = b - a;
    let t = Polynomial::new(vec![-(a + b) / &width, rat(2) / &width]);

    let mut family = vec![Polynomial::one()];
    if k >= 1 {
        family.push(t.clone());
    }
    for j in 1..k {
        let next = match kind {
            ClassicalKind::ChebyshevFirst => &(&t * &family[j]).scale(&rat(2)) - &family[j - 1],
            ClassicalKind::Legendre => {
                let jj = j as i64;
                let lhs = (&t * &family[j]).scale(&rat(2 * jj + 1));
                (&lhs - &family[j - 1].scale(&rat(jj))).scale(&ratio(1, jj + 1))
            }
        };
        family.push(next);
    }
    Ok(family)
}
