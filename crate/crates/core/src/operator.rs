//! Linear differential operators with polynomial coefficients,
//! `D = sum_i p_i(x) d^i/dx^i`, and their structural constants.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ratpoly::{falling_factorial, natural_roots, rat, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    /// `coeffs[i]` multiplies `d^i/dx^i`; the last entry is nonzero.
    coeffs: Vec<Polynomial>,
}

/// Height, depth, leading-coefficient polynomial `xi(n)`, its natural roots and the cutoff `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorProfile {
    pub height: i64,
    pub depth: i64,
    pub xi: Polynomial,
    pub omega: BTreeSet<u64>,
    /// Largest natural root of `xi`, or -1 when there is none.
    pub cutoff: i64,
}

impl DiffOperator {
    /// Builds from coefficients `p_0..p_nu`. Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<Polynomial>) -> Result<Self> {
        while coeffs.last().is_some_and(Polynomial::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroOperator);
        }
        Ok(Self { coeffs })
    }

    /// Builds from `(derivative order, coefficient)` pairs; repeated orders are summed.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Polynomial)>,
    {
        let mut coeffs: Vec<Polynomial> = Vec::new();
        for (order, p) in terms {
            if coeffs.len() <= order {
                coeffs.resize(order + 1, Polynomial::zero());
            }
            coeffs[order] = &coeffs[order] + &p;
        }
        Self::new(coeffs)
    }

    /// Order `nu`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// Nonzero `(order, coefficient)` pairs in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.coeffs.iter().enumerate().filter(|(_, p)| !p.is_zero())
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        self.terms()
            .fold(Polynomial::zero(), |acc, (i, c)| &acc + &(c * &p.derivative(i)))
    }

    /// `D(x^n)`, the `n`-th row of the matrix of `D` in the monomial basis.
    pub fn monomial_image(&self, n: usize) -> Polynomial {
        let mut out = Vec::new();
        for (i, p) in self.terms() {
            if n < i {
                continue;
            }
            let factor = falling_factorial(i).eval(&rat(n as i64));
            for (j, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let k = n - i + j;
                if out.len() <= k {
                    out.resize(k + 1, Rational::zero());
                }
                out[k] += c * &factor;
            }
        }
        Polynomial::new(out)
    }

    /// `max(deg p_i - i)` over nonzero coefficients.
    pub fn height(&self) -> i64 {
        self.terms()
            .map(|(i, p)| p.degree().unwrap() as i64 - i as i64)
            .max()
            .expect("operator has a nonzero term")
    }

    /// `min(lowest power of p_i - i)` over nonzero coefficients.
    pub fn depth(&self) -> i64 {
        self.terms()
            .map(|(i, p)| p.lowest_power().unwrap() as i64 - i as i64)
            .min()
            .expect("operator has a nonzero term")
    }

    /// Leading-diagonal polynomial: the coefficient of `x^(n+h)` in `D(x^n)` as a function of `n`.
    pub fn xi(&self) -> Polynomial {
        let h = self.height();
        self.terms()
            .filter(|(i, p)| p.degree().unwrap() as i64 - *i as i64 == h)
            .fold(Polynomial::zero(), |acc, (i, p)| {
                &acc + &falling_factorial(i).scale(p.leading_coeff().unwrap())
            })
    }

    pub fn profile(&self) -> OperatorProfile {
        let xi = self.xi();
        let omega = natural_roots(&xi).expect("xi is a nonzero combination of falling factorials");
        let cutoff = omega.iter().next_back().map_or(-1, |&n| n as i64);
        OperatorProfile {
            height: self.height(),
            depth: self.depth(),
            xi,
            omega,
            cutoff,
        }
    }

    /// Checks `h = beta - alpha` (the height equals minus the index).
    pub fn verify_height_index(&self, kernel_dim: usize, deficiency: usize) -> bool {
        self.height() == deficiency as i64 - kernel_dim as i64
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, p) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({p})y")?,
                1 => write!(f, "({p})y'")?,
                _ => write!(f, "({p})y^({i})")?,
            }
        }
        Ok(())
    }
}

impl OperatorProfile {
    /// `N + h + 1`, the number of columns touched by the finite block (clamped at 0).
    pub fn finite_width(&self) -> usize {
        (self.cutoff + self.height + 1).max(0) as usize
    }
}
