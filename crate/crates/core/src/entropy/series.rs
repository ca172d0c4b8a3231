//! Truncated power series over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficients `c_0 ..= c_K`; everything above `K` is unknown.
pub(crate) type Series = Vec<BigRational>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn truncate(mut a: Series, k: usize) -> Series {
    a.resize(k + 1, BigRational::zero());
    a
}

pub(crate) fn mul(a: &[BigRational], b: &[BigRational], k: usize) -> Series {
    let mut out = vec![BigRational::zero(); k + 1];
    for (i, x) in a.iter().enumerate().take(k + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(k + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 / a`, requires `a_0 != 0`.
pub(crate) fn inv(a: &[BigRational], k: usize) -> Series {
    assert!(!a[0].is_zero(), "series inverse needs a nonzero constant term");
    let mut out = vec![BigRational::zero(); k + 1];
    out[0] = a[0].recip();
    for n in 1..=k {
        let mut acc = BigRational::zero();
        for i in 1..=n.min(a.len() - 1) {
            acc += &a[i] * &out[n - i];
        }
        out[n] = -acc * &out[0];
    }
    out
}

pub(crate) fn derivative(a: &[BigRational]) -> Series {
    a.iter().enumerate().skip(1).map(|(i, x)| x * rat(i as i64)).collect()
}

/// `ln a`, requires `a_0 = 1`.
pub(crate) fn log(a: &[BigRational], k: usize) -> Series {
    assert!(a[0].is_one(), "series logarithm needs constant term 1");
    let a = truncate(a.to_vec(), k);
    let q = mul(&derivative(&a), &inv(&a, k), k);
    let mut out = vec![BigRational::zero(); k + 1];
    for n in 1..=k {
        out[n] = &q[n - 1] / rat(n as i64);
    }
    out
}

/// `ln(1 - x)`.
pub(crate) fn log_one_minus(k: usize) -> Series {
    let mut out = vec![BigRational::zero(); k + 1];
    for (n, c) in out.iter_mut().enumerate().skip(1) {
        *c = -BigRational::new(BigInt::one(), BigInt::from(n));
    }
    out
}

/// `a(b(x))`, requires `b_0 = 0`.
pub(crate) fn compose(a: &[BigRational], b: &[BigRational], k: usize) -> Series {
    assert!(b.first().is_none_or(Zero::is_zero), "inner series must vanish at 0");
    let mut out = vec![BigRational::zero(); k + 1];
    for c in a.iter().take(k + 1).rev() {
        out = mul(&out, b, k);
        out[0] += c;
    }
    out
}

/// Compositional inverse of `f = f_1 x + f_2 x^2 + ...` with `f_1 != 0`, by
/// Lagrange inversion: `[x^n] g = (1/n) [w^(n-1)] (w / f(w))^n`.
pub(crate) fn revert(f: &[BigRational], k: usize) -> Series {
    assert!(f[0].is_zero() && !f[1].is_zero(), "reversion needs f_0 = 0 and f_1 != 0");
    let h: Series = truncate(f[1..].to_vec(), k);
    let phi = inv(&h, k);
    let mut out = vec![BigRational::zero(); k + 1];
    let mut power = vec![BigRational::one()];
    for n in 1..=k {
        power = mul(&power, &phi, k);
        out[n] = &power[n - 1] / rat(n as i64);
    }
    out
}
