use proptest::prelude::*;

use crate::operator::DiffOperator;
use crate::ratpoly::Polynomial;

/// Operators of order <= 4 with coefficient degree <= 4 and integer coefficients in [-5, 5].
pub fn random_operator() -> impl Strategy<Value = DiffOperator> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, 0..=5), 1..=5).prop_filter_map("zero operator", |cs| {
        DiffOperator::new(cs.iter().map(|c| Polynomial::from_ints(c)).collect()).ok()
    })
}
