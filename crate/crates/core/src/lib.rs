//! # rtau
//!
//! Exact-arithmetic recursive tau method for linear ODEs with polynomial
//! coefficients.
//!
//! The pipeline runs in four stages, each in its own module:
//!
//! - [`operator`]: the operator `D = sum p_i(x) d^i/dx^i` and its structural
//!   constants, such as the height `h` and the cutoff `N`.
//! - [`echelon`]: reduction of the finite block of the operator matrix to
//!   pre-lower-row-echelon form, which yields the kernel and the inaccessible
//!   degrees `S`.
//! - [`canonical`]: a complete sequence of canonical polynomials `q_m` with
//!   residuals `r_m` (`D q_m = x^m + r_m`) and their classification.
//! - [`tau`]: the tau-perturbed problem `D y_n = f + H_n` solved exactly under
//!   the supplementary conditions.
//!
//! All arithmetic is over [`ratpoly::Rational`]; nothing is rounded.
//!
//! ```
//! use rtau::prelude::*;
//!
//! // y'' = 0, y(0) = 0, y(1) = 1
//! let op = DiffOperator::from_terms([(2, Polynomial::one())]).unwrap();
//! let problem = TauProblem::new(
//!     op,
//!     Polynomial::zero(),
//!     vec![
//!         Condition::point_value(rat(0), 0, rat(0)),
//!         Condition::point_value(rat(1), 0, rat(1)),
//!     ],
//!     Perturbation::default(),
//! )
//! .unwrap();
//! let sol = solve_tau(&problem, 2).unwrap();
//! assert_eq!(sol.y, Polynomial::x_pow(1));
//! assert!(sol.taus.is_empty());
//! ```

pub mod canonical;
pub mod echelon;
pub mod error;
pub mod operator;
pub mod problem;
pub mod ratpoly;
pub mod report;
pub mod tau;
pub mod verify;

mod linalg;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::canonical::{classify, generate, CanonicalBasis, CanonicalClass, CanonicalEntry};
    pub use crate::echelon::{echelon_of, EchelonResult, PivotRule};
    pub use crate::operator::{DiffOperator, OperatorProfile};
    pub use crate::ratpoly::{rat, ratio, ClassicalKind, Polynomial, Rational};
    pub use crate::tau::{solve_tau, Condition, Perturbation, TauProblem, TauSolution};
}
