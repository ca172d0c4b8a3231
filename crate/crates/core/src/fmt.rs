//! Deterministic text forms shared by every exporter.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// `"num/den"`, always with an explicit denominator.
pub fn rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Twelve significant digits in scientific notation.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Precondition(format!("{x} is not finite")))
}
