//! Echelon transformation of the finite block of the operator matrix.
//!
//! Rows `0..=N` of the monomial-basis matrix are reduced to pre-lower-row-echelon
//! form (zero rows first, strictly increasing last-nonzero column, pivots not
//! normalized). Every row operation is mirrored on the domain basis, which turns
//! `x^0..x^N` into a standard basis whose leading members span the kernel.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::operator::{DiffOperator, OperatorProfile};
use crate::ratpoly::{Polynomial, Rational};

/// Dense rectangular block of rationals. Row `n` holds the coefficients of `D(x^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMatrix {
    rows: Vec<Vec<Rational>>,
    ncols: usize,
}

impl FiniteMatrix {
    pub fn new(rows: Vec<Vec<Rational>>, ncols: usize) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                assert!(
                    r.iter().skip(ncols).all(Zero::is_zero),
                    "row has entries beyond column {ncols}"
                );
                r.resize(ncols, Rational::zero());
                r
            })
            .collect();
        Self { rows, ncols }
    }

    pub fn from_polys(rows: &[Polynomial], ncols: usize) -> Self {
        Self::new(rows.iter().map(|p| p.coeffs().to_vec()).collect(), ncols)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[Rational] {
        &self.rows[k]
    }

    /// Row `k` as a polynomial in `x` (column index = power).
    pub fn row_poly(&self, k: usize) -> Polynomial {
        Polynomial::new(self.rows[k].clone())
    }

    /// Last nonzero column of row `k`.
    pub fn gsup(&self, k: usize) -> Option<usize> {
        self.rows[k].iter().rposition(|c| !c.is_zero())
    }
}

/// Finite block `Pi_1`: rows `D(x^n)` for `n = 0..=N`, over columns `0..N+h+1`.
pub fn build_pi1(op: &DiffOperator, profile: &OperatorProfile) -> FiniteMatrix {
    let rows: Vec<Polynomial> = if profile.cutoff < 0 {
        Vec::new()
    } else {
        (0..=profile.cutoff as usize).map(|n| op.monomial_image(n)).collect()
    };
    FiniteMatrix::from_polys(&rows, profile.finite_width())
}

/// Which row becomes the pivot when several share the current last column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PivotRule {
    #[default]
    SmallestIndex,
    LargestIndex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pivot {
    /// Position of the row in the reduced matrix.
    pub row: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonResult {
    /// Reduced block in pre-LREF: `zero_rows` zero rows, then nonzero rows by increasing `sigma`.
    pub reduced: FiniteMatrix,
    /// Images of the domain basis under the same row operations, aligned with `reduced`.
    pub standard_polys: Vec<Polynomial>,
    pub zero_rows: usize,
    /// Last nonzero column of each nonzero row, in row order.
    pub sigma: Vec<usize>,
    /// Inaccessible degrees: columns of the block never reached by a pivot.
    pub inaccessible: BTreeSet<usize>,
    /// column -> pivot row and value
    pub pivots: BTreeMap<usize, Pivot>,
}

impl EchelonResult {
    pub fn kernel_basis(&self) -> &[Polynomial] {
        &self.standard_polys[..self.zero_rows]
    }

    pub fn kernel_dim(&self) -> usize {
        self.zero_rows
    }

    pub fn deficiency(&self) -> usize {
        self.inaccessible.len()
    }

    /// Nonzero rows as `(row position, sigma, source polynomial)`.
    pub fn nonzero_rows(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.sigma
            .iter()
            .enumerate()
            .map(move |(k, &s)| (self.zero_rows + k, s, &self.standard_polys[self.zero_rows + k]))
    }
}

/// Reduces `m` to pre-LREF with the default pivot rule.
pub fn reduce_pre_lref(m: &FiniteMatrix, domain_basis: &[Polynomial]) -> EchelonResult {
    reduce_pre_lref_with(m, domain_basis, PivotRule::SmallestIndex)
}

/// Columns are swept right to left. In each column the chosen pivot row clears
/// that column from every other unassigned row, so every unassigned row's last
/// nonzero column only moves left.
pub fn reduce_pre_lref_with(m: &FiniteMatrix, domain_basis: &[Polynomial], rule: PivotRule) -> EchelonResult {
    assert_eq!(m.nrows(), domain_basis.len(), "one domain polynomial per matrix row");
    let mut rows = m.rows.clone();
    let mut basis = domain_basis.to_vec();
    let mut assigned: Vec<Option<usize>> = vec![None; rows.len()];

    let gsup = |r: &[Rational]| r.iter().rposition(|c| !c.is_zero());

    for col in (0..m.ncols).rev() {
        let candidates: Vec<usize> = (0..rows.len())
            .filter(|&k| assigned[k].is_none() && gsup(&rows[k]) == Some(col))
            .collect();
        let pivot = match rule {
            PivotRule::SmallestIndex => candidates.first(),
            PivotRule::LargestIndex => candidates.last(),
        };
        let Some(&pivot) = pivot else { continue };
        assigned[pivot] = Some(col);
        for &k in candidates.iter().filter(|&&k| k != pivot) {
            let factor = &rows[k][col] / &rows[pivot][col];
            let (prow, pbasis) = (rows[pivot].clone(), basis[pivot].clone());
            for (a, b) in rows[k].iter_mut().zip(&prow) {
                *a -= &factor * b;
            }
            basis[k] = &basis[k] - &pbasis.scale(&factor);
        }
    }

    // zero rows in original order, then pivot rows by increasing column
    let mut order: Vec<usize> = (0..rows.len()).filter(|&k| assigned[k].is_none()).collect();
    let zero_rows = order.len();
    let mut nonzero: Vec<(usize, usize)> = (0..rows.len()).filter_map(|k| assigned[k].map(|c| (c, k))).collect();
    nonzero.sort();
    order.extend(nonzero.iter().map(|&(_, k)| k));

    let sigma: Vec<usize> = nonzero.iter().map(|&(c, _)| c).collect();
    let pivots = nonzero
        .iter()
        .enumerate()
        .map(|(pos, &(c, k))| {
            (
                c,
                Pivot {
                    row: zero_rows + pos,
                    value: rows[k][c].clone(),
                },
            )
        })
        .collect();
    let hit: BTreeSet<usize> = sigma.iter().copied().collect();
    let inaccessible = (0..m.ncols).filter(|c| !hit.contains(c)).collect();

    EchelonResult {
        reduced: FiniteMatrix {
            rows: order.iter().map(|&k| rows[k].clone()).collect(),
            ncols: m.ncols,
        },
        standard_polys: order.iter().map(|&k| basis[k].clone()).collect(),
        zero_rows,
        sigma,
        inaccessible,
        pivots,
    }
}

/// Builds and reduces the finite block of `op` against the monomial domain basis.
pub fn echelon_of(op: &DiffOperator, profile: &OperatorProfile, rule: PivotRule) -> EchelonResult {
    let pi1 = build_pi1(op, profile);
    let basis: Vec<Polynomial> = (0..pi1.nrows()).map(Polynomial::x_pow).collect();
    reduce_pre_lref_with(&pi1, &basis, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::fixtures::*;
    use crate::ratpoly::rat;
    use crate::testutil::random_operator;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn trimmed_rows(m: &FiniteMatrix) -> Vec<Polynomial> {
        (0..m.nrows()).map(|k| m.row_poly(k)).collect()
    }

    #[test]
    fn pi1_golden_regular() {
        let d = golden_regular();
        let m = build_pi1(&d, &d.profile());
        assert_eq!(m.ncols(), 4);
        assert_eq!(
            trimmed_rows(&m),
            vec![p(&[]), p(&[]), p(&[-6]), p(&[0, -12]), p(&[24, 0, -12]), p(&[0, 120])]
        );
    }

    #[test]
    fn pi1_golden_derived() {
        let d = golden_derived();
        let m = build_pi1(&d, &d.profile());
        assert_eq!(
            trimmed_rows(&m),
            vec![p(&[]), p(&[]), p(&[6]), p(&[6]), p(&[24, 24, -12]), p(&[0, 120, 60])]
        );
    }

    #[test]
    fn pi1_second_derivative() {
        let d = derivative(2);
        let m = build_pi1(&d, &d.profile());
        assert_eq!(m.nrows(), 2);
        assert!(trimmed_rows(&m).iter().all(Polynomial::is_zero));
    }

    #[test]
    fn reduce_golden_regular() {
        let d = golden_regular();
        let ech = echelon_of(&d, &d.profile(), PivotRule::SmallestIndex);
        assert_eq!(
            trimmed_rows(&ech.reduced),
            vec![p(&[]), p(&[]), p(&[]), p(&[-6]), p(&[0, -12]), p(&[24, 0, -12])]
        );
        assert_eq!(
            ech.standard_polys,
            vec![
                p(&[1]),
                p(&[0, 1]),
                p(&[0, 0, 0, 10, 0, 1]),
                p(&[0, 0, 1]),
                p(&[0, 0, 0, 1]),
                p(&[0, 0, 0, 0, 1])
            ]
        );
        assert_eq!(ech.kernel_dim(), 3);
        assert_eq!(ech.sigma, vec![0, 1, 2]);
        assert_eq!(ech.inaccessible, BTreeSet::from([3]));
        assert_eq!(
            ech.pivots[&2],
            Pivot {
                row: 5,
                value: rat(-12)
            }
        );
    }

    #[test]
    fn reduce_golden_derived() {
        let d = golden_derived();
        let ech = echelon_of(&d, &d.profile(), PivotRule::SmallestIndex);
        assert_eq!(
            trimmed_rows(&ech.reduced),
            vec![p(&[]), p(&[]), p(&[]), p(&[6]), p(&[120, 240]), p(&[24, 24, -12])]
        );
        // kernel element comes out as x^3 - x^2, the negative of the printed x^2 - x^3
        assert_eq!(
            ech.standard_polys,
            vec![
                p(&[1]),
                p(&[0, 1]),
                p(&[0, 0, -1, 1]),
                p(&[0, 0, 1]),
                p(&[0, 0, 0, 0, 5, 1]),
                p(&[0, 0, 0, 0, 1])
            ]
        );
        assert_eq!(ech.inaccessible, BTreeSet::from([3]));
    }

    #[test]
    fn reduce_all_zero() {
        let m = FiniteMatrix::new(vec![vec![], vec![]], 0);
        let ech = reduce_pre_lref(&m, &[p(&[1]), p(&[0, 1])]);
        assert_eq!(ech.kernel_basis(), &[p(&[1]), p(&[0, 1])]);
        assert!(ech.sigma.is_empty());
        assert!(ech.inaccessible.is_empty());

        // N + h + 1 = 2 with nothing hit: S = {0, 1}
        let m = FiniteMatrix::new(vec![vec![], vec![]], 2);
        let ech = reduce_pre_lref(&m, &[p(&[1]), p(&[0, 1])]);
        assert_eq!(ech.inaccessible, BTreeSet::from([0, 1]));
    }

    #[test]
    fn empty_block() {
        // x^2 y: N = -1, h = 2, missing degrees {0, 1}
        let d = DiffOperator::new(vec![p(&[0, 0, 1])]).unwrap();
        let prof = d.profile();
        assert_eq!(prof.cutoff, -1);
        let ech = echelon_of(&d, &prof, PivotRule::SmallestIndex);
        assert_eq!(ech.reduced.nrows(), 0);
        assert_eq!(ech.inaccessible, BTreeSet::from([0, 1]));
        assert!(ech.kernel_basis().is_empty());

        // identity: nothing inaccessible
        let d = DiffOperator::new(vec![p(&[1])]).unwrap();
        let ech = echelon_of(&d, &d.profile(), PivotRule::SmallestIndex);
        assert!(ech.inaccessible.is_empty());
    }

    #[test]
    fn alternative_pivot_golden_regular() {
        let d = golden_regular();
        let ech = echelon_of(&d, &d.profile(), PivotRule::LargestIndex);
        // x^5 is kept and x^3 + x^5/10 drops into the kernel
        assert_eq!(ech.standard_polys[4], p(&[0, 0, 0, 0, 0, 1]));
        assert_eq!(ech.reduced.row_poly(4), p(&[0, 120]));
        assert_eq!(ech.inaccessible, BTreeSet::from([3]));
    }

    /// Row-reduces a list of vectors and returns the rank (test-side oracle).
    fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
        let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
        for r in rows.iter_mut() {
            r.resize(ncols, Rational::zero());
        }
        let mut rank = 0;
        for c in 0..ncols {
            let Some(pr) = (rank..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, pr);
            for k in 0..rows.len() {
                if k != rank && !rows[k][c].is_zero() {
                    let f = &rows[k][c] / &rows[rank][c];
                    let pivot = rows[rank].clone();
                    for (a, b) in rows[k].iter_mut().zip(&pivot) {
                        *a -= &f * b;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn reduction_invariants(d in random_operator(), alt in any::<bool>()) {
            let prof = d.profile();
            let rule = if alt { PivotRule::LargestIndex } else { PivotRule::SmallestIndex };
            let pi1 = build_pi1(&d, &prof);
            let ech = echelon_of(&d, &prof, rule);

            // zero rows first, then strictly increasing gsup
            for k in 0..ech.reduced.nrows() {
                let g = ech.reduced.gsup(k);
                if k < ech.zero_rows {
                    prop_assert!(g.is_none());
                } else {
                    prop_assert_eq!(g, Some(ech.sigma[k - ech.zero_rows]));
                }
            }
            prop_assert!(ech.sigma.windows(2).all(|w| w[0] < w[1]));

            // commutation: D(s_j) equals reduced row j; kernel is killed
            for (k, s) in ech.standard_polys.iter().enumerate() {
                prop_assert_eq!(d.apply(s), ech.reduced.row_poly(k));
            }

            // sigma and S partition the block columns
            let hit: BTreeSet<usize> = ech.sigma.iter().copied().collect();
            prop_assert!(hit.is_disjoint(&ech.inaccessible));
            prop_assert_eq!(hit.len() + ech.inaccessible.len(), pi1.ncols());

            // span preservation
            let r_in = rank(pi1.rows().to_vec());
            let r_out = rank(ech.reduced.rows().to_vec());
            let mut both = pi1.rows().to_vec();
            both.extend(ech.reduced.rows().iter().cloned());
            prop_assert_eq!(r_in, r_out);
            prop_assert_eq!(rank(both), r_in);

            // the standard basis is still a basis of polynomials of degree <= N
            let std_rows: Vec<Vec<Rational>> = ech.standard_polys.iter().map(|s| s.coeffs().to_vec()).collect();
            prop_assert_eq!(rank(std_rows), ech.standard_polys.len());

            // card(S) - dim Ker = h
            prop_assert!(d.verify_height_index(ech.kernel_dim(), ech.deficiency()));
        }
    }
}
