//! Self-checks over an operator. The canonical sequence must satisfy its
//! defining identity and agree with a brute-force truncated solve; the height
//! must equal minus the index.

use num_traits::Zero;

use crate::canonical::{generate, CanonicalBasis};
use crate::echelon::{echelon_of, EchelonResult, PivotRule};
use crate::linalg;
use crate::operator::DiffOperator;
use crate::ratpoly::{Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// A canonical polynomial of index `m` found by solving
/// `D(c_0 + ... + c_K x^K) - sum_{s in S} t_s x^s = x^m` directly, with
/// `K = max(m - h + 2, N)`. No solution of higher degree is ever needed:
/// beyond `N` the top term of `D y` has degree exactly `deg y + h`.
pub fn truncated_canonical(op: &DiffOperator, ech: &EchelonResult, m: usize) -> Option<Polynomial> {
    let prof = op.profile();
    let k_max = (m as i64 - prof.height + 2).max(prof.cutoff).max(0) as usize;
    let images: Vec<Polynomial> = (0..=k_max).map(|n| op.monomial_image(n)).collect();
    let s: Vec<usize> = ech.inaccessible.iter().copied().collect();
    let nrows = images
        .iter()
        .filter_map(Polynomial::degree)
        .chain(s.iter().copied())
        .chain([m])
        .max()
        .unwrap()
        + 1;
    let ncols = images.len() + s.len();
    let a: Vec<Vec<Rational>> = (0..nrows)
        .map(|row| {
            let mut r: Vec<Rational> = images.iter().map(|p| p.coeff(row)).collect();
            r.extend(s.iter().map(|&si| {
                if si == row {
                    -Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let b: Vec<Rational> = (0..nrows)
        .map(|row| Rational::from_integer(((row == m) as i64).into()))
        .collect();
    let sol = linalg::solve_any(a, b, ncols)?;
    Some(Polynomial::new(sol[..images.len()].to_vec()))
}

pub fn check_defining_identity(op: &DiffOperator, basis: &CanonicalBasis) -> CheckOutcome {
    let bad: Vec<usize> = basis
        .entries
        .values()
        .filter(|e| {
            op.apply(&e.q) != &Polynomial::x_pow(e.index) + &e.r
                || !e.r.support().all(|k| basis.inaccessible.contains(&k) && k < e.index)
        })
        .map(|e| e.index)
        .collect();
    let kernel_ok = basis.null_cps.iter().all(|u| op.apply(u).is_zero());
    let complete = (0..=basis.bound)
        .filter(|m| !basis.inaccessible.contains(m))
        .eq(basis.entries.keys().copied());
    let passed = bad.is_empty() && kernel_ok && complete;
    let detail = if passed {
        format!(
            "{} canonical polynomials up to degree {}",
            basis.entries.len(),
            basis.bound
        )
    } else {
        format!("failing indices {bad:?}, kernel ok: {kernel_ok}, complete: {complete}")
    };
    CheckOutcome::new("defining identity D(q_m) = x^m + r_m", passed, detail)
}

pub fn check_height_index(op: &DiffOperator, ech: &EchelonResult) -> CheckOutcome {
    let passed = op.verify_height_index(ech.kernel_dim(), ech.deficiency());
    CheckOutcome::new(
        "height equals minus index",
        passed,
        format!(
            "h = {}, card(S) = {}, dim Ker = {}",
            op.height(),
            ech.deficiency(),
            ech.kernel_dim()
        ),
    )
}

pub fn check_oracle(op: &DiffOperator, ech: &EchelonResult, basis: &CanonicalBasis, up_to: usize) -> CheckOutcome {
    let mut bad = Vec::new();
    for (&m, e) in basis.entries.range(..=up_to) {
        let ok = truncated_canonical(op, ech, m).is_some_and(|qh| linalg::in_span(&basis.null_cps, &(&qh - &e.q)));
        if !ok {
            bad.push(m);
        }
    }
    CheckOutcome::new(
        "brute-force truncated solve agrees modulo kernel",
        bad.is_empty(),
        if bad.is_empty() {
            format!("indices up to {up_to}")
        } else {
            format!("failing indices {bad:?}")
        },
    )
}

/// Runs every check with canonical polynomials up to `bound`.
pub fn check_all(op: &DiffOperator, bound: usize) -> Vec<CheckOutcome> {
    let ech = echelon_of(op, &op.profile(), PivotRule::SmallestIndex);
    let basis = generate(op, &ech, bound);
    vec![
        check_defining_identity(op, &basis),
        check_height_index(op, &ech),
        check_oracle(op, &ech, &basis, bound),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::fixtures::*;
    use crate::testutil::random_operator;
    use proptest::prelude::*;

    #[test]
    fn examples_pass() {
        for op in [golden_regular(), golden_derived(), derivative(1), derivative(3)] {
            for c in check_all(&op, 10) {
                assert!(c.passed, "{}: {}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn oracle_detects_tampering() {
        let op = golden_derived();
        let ech = echelon_of(&op, &op.profile(), PivotRule::SmallestIndex);
        let mut basis = generate(&op, &ech, 6);
        basis.entries.get_mut(&2).unwrap().q = Polynomial::x_pow(4);
        assert!(!check_oracle(&op, &ech, &basis, 6).passed);
        assert!(!check_defining_identity(&op, &basis).passed);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_operators_pass(op in random_operator()) {
            for c in check_all(&op, 8) {
                prop_assert!(c.passed, "{}: {}", c.name, c.detail);
            }
        }
    }
}
