//! Dense integer polynomials, lowest degree first.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type IntPoly = Vec<BigInt>;

pub fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn from_unsigned(c: &[BigUint]) -> IntPoly {
    c.iter().map(|x| BigInt::from_biguint(Sign::Plus, x.clone())).collect()
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(out)
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let neg: IntPoly = b.iter().map(|x| -x).collect();
    add(a, &neg)
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn scale(a: &[BigInt], c: &BigInt) -> IntPoly {
    trim(a.iter().map(|x| x * c).collect())
}

/// Multiplies by `t^k`.
pub fn shift(a: &[BigInt], k: usize) -> IntPoly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); k];
    out.extend_from_slice(a);
    out
}

pub fn derivative(a: &[BigInt]) -> IntPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, x)| x * BigInt::from(i)).collect())
}

pub fn degree(a: &[BigInt]) -> Option<usize> {
    a.iter().rposition(|x| !x.is_zero())
}

pub fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the positive content; the sign of every coefficient is kept.
pub fn primitive(a: &[BigInt]) -> IntPoly {
    let c = content(a);
    if c.is_zero() {
        return Vec::new();
    }
    trim(a.iter().map(|x| x / &c).collect())
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a = q * b + r`.
pub fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> (IntPoly, BigInt) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else { return (r, BigInt::from(1)) };
    if da < db {
        return (r, BigInt::from(1));
    }
    let rounds = da - db + 1;
    let mut factor = BigInt::from(1);
    for _ in 0..rounds {
        factor *= &lead;
    }
    let mut done = 0;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let coef = r[dr].clone();
        for x in r.iter_mut() {
            *x *= &lead;
        }
        for (i, y) in b.iter().enumerate() {
            r[dr - db + i] -= &coef * y;
        }
        r = trim(r);
        done += 1;
    }
    // account for rounds skipped when the degree dropped by more than one
    for _ in done..rounds {
        for x in r.iter_mut() {
            *x *= &lead;
        }
    }
    (trim(r), factor)
}

/// Exact division; panics if `b` does not divide `a`.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else { return Vec::new() };
    assert!(da >= db, "exact division by a higher-degree polynomial");
    let mut q = vec![BigInt::zero(); da - db + 1];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let (coef, rem) = r[dr].div_rem(&b[db]);
        assert!(rem.is_zero(), "inexact polynomial division");
        for (i, y) in b.iter().enumerate() {
            r[dr - db + i] -= &coef * y;
        }
        q[dr - db] = coef;
        r = trim(r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    trim(q)
}

/// Greatest common divisor, primitive with positive leading coefficient.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if degree(&x) < degree(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    while degree(&y).is_some() {
        let (r, _) = pseudo_rem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    if x.last().is_some_and(Signed::is_negative) {
        x = x.into_iter().map(|c| -c).collect();
    }
    x
}

/// Sign of `a(num / 2^exp)`.
pub fn sign_at_dyadic(a: &[BigInt], num: &BigInt, exp: u64) -> Sign {
    let Some(d) = degree(a) else { return Sign::NoSign };
    // 2^(exp*d) * a(num/2^exp) = sum_i a_i num^i 2^(exp*(d-i)), via Horner
    let mut acc = a[d].clone();
    for i in (0..d).rev() {
        acc = acc * num + (&a[i] << (exp * (d - i) as u64));
    }
    acc.sign()
}

/// Sign of `a(x)` for a rational `x`.
pub fn sign_at_rational(a: &[BigInt], x: &num_rational::BigRational) -> Sign {
    let Some(d) = degree(a) else { return Sign::NoSign };
    let (num, den) = (x.numer(), x.denom());
    // den^d * a(num/den), den > 0
    let mut acc = a[d].clone();
    let mut den_pow = BigInt::from(1);
    for i in (0..d).rev() {
        den_pow *= den;
        acc = acc * num + &a[i] * &den_pow;
    }
    acc.sign()
}
