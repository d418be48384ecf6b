use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{display_rational, format_rational, parse_rational, rat, Rational};
use crate::error::Result;

/// Dense univariate polynomial over the rationals.
///
/// `coeffs[k]` is the coefficient of `x^k`. The last stored coefficient is
/// never zero, so the zero polynomial is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    /// `x^k`
    pub fn x_pow(k: usize) -> Self {
        Self::monomial(Rational::one(), k)
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Lowest power carrying a nonzero coefficient.
    pub fn lowest_power(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Powers with nonzero coefficients.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
    }

    /// If `self` is `c * x^k` with `c != 0`, returns `k`.
    pub fn as_monomial(&self) -> Option<usize> {
        let mut support = self.support();
        let k = support.next()?;
        support.next().is_none().then_some(k)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// The `order`-th derivative. Zero when `order` exceeds the degree.
    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= order {
            return Self::zero();
        }
        let coeffs = (order..self.coeffs.len())
            .map(|k| {
                // k!/(k-order)!
                let factor: i64 = ((k - order + 1)..=k).map(|v| v as i64).product();
                &self.coeffs[k] * rat(factor)
            })
            .collect();
        Self::new(coeffs)
    }

    /// Composition `self(inner(x))` by Horner's scheme.
    pub fn compose(&self, inner: &Polynomial) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// Ascending `"p/q"` strings, the shared wire format.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    /// Human-readable rendering in the given variable name, highest power first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = mag.is_one();
            if k == 0 || !unit {
                out.push_str(&display_rational(&mag));
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{k}")),
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::ratio;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn arithmetic_examples() {
        // (x^2+1)(1-3x)
        assert_eq!(&p(&[1, 0, 1]) * &p(&[1, -3]), p(&[1, -3, 1, -3]));
        assert_eq!(&p(&[-1, 1]) * &p(&[1, 1]), p(&[-1, 0, 1]));
        let q = p(&[2, 0, 5]);
        assert_eq!(&q + &Polynomial::zero(), q);
        assert_eq!(&q - &q, Polynomial::zero());
        assert_eq!(
            q.scale(&ratio(1, 2)),
            Polynomial::new(vec![rat(1), rat(0), ratio(5, 2)])
        );
    }

    #[test]
    fn normalization_drops_trailing_zeros() {
        let q = p(&[1, 2, 0, 0]);
        assert_eq!(q.degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[0]).is_zero());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(Polynomial::x_pow(4).derivative(4), p(&[24]));
        assert_eq!(Polynomial::x_pow(2).derivative(3), Polynomial::zero());
        // x^5 + 10x^3 -> 20x^3 + 60x
        assert_eq!(p(&[0, 0, 0, 10, 0, 1]).derivative(2), p(&[0, 60, 0, 20]));
    }

    #[test]
    fn lowest_power_and_monomial() {
        assert_eq!(p(&[0, 0, 3, 1]).lowest_power(), Some(2));
        assert_eq!(Polynomial::zero().lowest_power(), None);
        assert_eq!(p(&[0, 0, 0, 0, 0, 7]).as_monomial(), Some(5));
        assert_eq!(p(&[1, 1]).as_monomial(), None);
    }

    #[test]
    fn eval_and_compose() {
        let q = p(&[1, -3, 1]);
        assert_eq!(q.eval(&rat(2)), rat(-1));
        // q(x+1) = (x+1)^2 - 3(x+1) + 1 = x^2 - x - 1
        assert_eq!(q.compose(&p(&[1, 1])), p(&[-1, -1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[24, 0, -12]).to_string(), "-12x^2 + 24");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(
            Polynomial::new(vec![ratio(-1, 2), rat(0), ratio(3, 2)]).display_in("n"),
            "3/2n^2 - 1/2"
        );
    }

    #[test]
    fn wire_format() {
        let q = p(&[0, 1, -3]);
        assert_eq!(q.to_strings(), vec!["0/1", "1/1", "-3/1"]);
        assert_eq!(Polynomial::from_strings(&q.to_strings()).unwrap(), q);
    }
}
