//! Small exact Gauss-Jordan routines over the rationals.

use num_traits::Zero;

use crate::ratpoly::{Polynomial, Rational};

/// Solves the square system `a x = b`. `None` when `a` is singular.
pub(crate) fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n, "system must be square");
    for c in 0..n {
        let p = (c..n).find(|&k| !a[k][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        b[c] *= &inv;
        for k in 0..n {
            if k == c || a[k][c].is_zero() {
                continue;
            }
            let f = a[k][c].clone();
            let prow = a[c].clone();
            for (v, pv) in a[k].iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
            let bc = b[c].clone();
            b[k] -= &f * &bc;
        }
    }
    Some(b)
}

/// Some solution of the possibly rectangular system `a x = b` (free unknowns set
/// to zero), or `None` when it is inconsistent.
pub(crate) fn solve_any(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>, ncols: usize) -> Option<Vec<Rational>> {
    for r in a.iter_mut() {
        r.resize(ncols, Rational::zero());
    }
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for c in 0..ncols {
        let Some(p) = (row..a.len()).find(|&k| !a[k][c].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][c].recip();
        for v in a[row].iter_mut() {
            *v *= &inv;
        }
        b[row] *= &inv;
        for k in 0..a.len() {
            if k == row || a[k][c].is_zero() {
                continue;
            }
            let f = a[k][c].clone();
            let prow = a[row].clone();
            for (v, pv) in a[k].iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
            let br = b[row].clone();
            b[k] -= &f * &br;
        }
        pivot_cols.push(c);
        row += 1;
    }
    if b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (k, &c) in pivot_cols.iter().enumerate() {
        x[c] = b[k].clone();
    }
    Some(x)
}

/// Rank of a list of coefficient vectors (rows may differ in length).
pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(ncols, Rational::zero());
            r
        })
        .collect();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for k in rank + 1..m.len() {
            if m[k][c].is_zero() {
                continue;
            }
            let f = &m[k][c] / &m[rank][c];
            let prow = m[rank].clone();
            for (v, pv) in m[k].iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `target` lies in the span of `basis`.
pub(crate) fn in_span(basis: &[Polynomial], target: &Polynomial) -> bool {
    if target.is_zero() {
        return true;
    }
    let mut rows: Vec<Vec<Rational>> = basis.iter().map(|p| p.coeffs().to_vec()).collect();
    let before = rank(&rows);
    rows.push(target.coeffs().to_vec());
    rank(&rows) == before
}
