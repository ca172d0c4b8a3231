use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exact nonnegative counter used by the sweep DP.
///
/// `u128` is only instantiated when an a-priori bound on every intermediate
/// value fits (see [`fits_u128`]); otherwise the DP runs on `BigUint`.
pub(crate) trait Count: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_from(&mut self, other: &Self);
    fn is_zero(&self) -> bool;
}

impl Count for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    #[inline]
    fn add_from(&mut self, other: &Self) {
        *self = self.checked_add(*other).expect("count exceeded its certified bound");
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl Count for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    #[inline]
    fn add_from(&mut self, other: &Self) {
        *self += other;
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Whether `bound` leaves headroom in a `u128`.
pub(crate) fn fits_u128(bound: &BigUint) -> bool {
    bound.bits() < 127
}

/// Upper bound on the number of matchings: every matching is determined by
/// choosing, for each vertex, either nothing or one of its later neighbours.
pub(crate) fn forward_choice_bound(forward_degrees: impl Iterator<Item = usize>) -> BigUint {
    forward_degrees.fold(BigUint::from(1u32), |acc, f| acc * BigUint::from(f + 1))
}

/// Upper bound on the number of matchings with at most `k` edges among `e` edges.
pub(crate) fn binomial_prefix_bound(e: usize, k: usize) -> BigUint {
    let mut total = BigUint::default();
    let mut term = BigUint::from(1u32);
    for j in 0..=k.min(e) {
        total += &term;
        term = term * BigUint::from(e - j) / BigUint::from(j + 1);
    }
    total
}
