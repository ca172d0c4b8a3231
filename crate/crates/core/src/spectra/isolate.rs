//! Square-free decomposition, Sturm chains and dyadic bisection.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::intpoly::{self, IntPoly};

/// Yun's algorithm: `f = prod a_i^i` with square-free, pairwise coprime `a_i`.
/// Constant factors are dropped.
pub(crate) fn square_free(f: &[BigInt]) -> Vec<(IntPoly, usize)> {
    let f = intpoly::primitive(f);
    let df = intpoly::derivative(&f);
    let a0 = intpoly::gcd(&f, &df);
    let mut b = intpoly::exact_div(&f, &a0);
    let c = intpoly::exact_div(&df, &a0);
    let mut d = intpoly::sub(&c, &intpoly::derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while intpoly::degree(&b).is_some_and(|k| k > 0) {
        let a = intpoly::gcd(&b, &d);
        b = intpoly::exact_div(&b, &a);
        let c = intpoly::exact_div(&d, &a);
        d = intpoly::sub(&c, &intpoly::derivative(&b));
        if intpoly::degree(&a).is_some_and(|k| k > 0) {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Sturm chain with signs corrected for the pseudo-remainder scale factor.
pub(crate) fn sturm_chain(h: &[BigInt]) -> Vec<IntPoly> {
    let mut chain = vec![h.to_vec(), intpoly::primitive(&intpoly::derivative(h))];
    loop {
        let n = chain.len();
        if intpoly::degree(&chain[n - 1]).is_none_or(|k| k == 0) {
            break;
        }
        let (r, factor) = intpoly::pseudo_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        // factor * a = q b + r, so -rem(a, b) has the sign of -r / factor
        let mut next = intpoly::primitive(&r);
        if !factor.is_negative() {
            next = next.into_iter().map(|x| -x).collect();
        }
        chain.push(next);
    }
    chain
}

fn variations(chain: &[IntPoly], num: &BigInt, exp: u64) -> usize {
    let mut last = Sign::NoSign;
    let mut count = 0;
    for p in chain {
        let s = intpoly::sign_at_dyadic(p, num, exp);
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Root enclosure `(lo, hi] / 2^exp`, or the exact root `lo / 2^exp` when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Dyadic {
    pub lo: BigInt,
    pub hi: BigInt,
    pub exp: u64,
}

impl Dyadic {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Width is at most `2^-bits`.
    pub fn within(&self, bits: u64) -> bool {
        let w = &self.hi - &self.lo;
        w.is_zero() || (self.exp >= bits && w <= BigInt::from(1) << (self.exp - bits))
    }

    fn halve(&mut self) -> BigInt {
        self.lo <<= 1u32;
        self.hi <<= 1u32;
        self.exp += 1;
        (&self.lo + &self.hi) >> 1u32
    }
}

/// Isolates the positive roots of a square-free `h` whose roots are all positive.
pub(crate) fn isolate_positive(h: &[BigInt], chain: &[IntPoly]) -> Result<Vec<Dyadic>> {
    let deg = intpoly::degree(h).unwrap_or(0);
    let lead_bits = h[deg].bits();
    let max_bits = h.iter().map(|c| c.bits()).max().unwrap_or(0);
    // every root is below 1 + max|h_i / h_d| < 2^(max_bits - lead_bits + 2)
    let top = (max_bits + 2).saturating_sub(lead_bits).max(1);
    let zero = BigInt::zero();
    let mut pending = vec![(Dyadic { lo: zero.clone(), hi: BigInt::from(1) << top, exp: 0 }, None::<usize>)];
    let mut out = Vec::new();
    while let Some((mut iv, known)) = pending.pop() {
        let count = match known {
            Some(c) => c,
            None => variations(chain, &iv.lo, iv.exp) - variations(chain, &iv.hi, iv.exp),
        };
        match count {
            0 => {}
            1 => out.push(iv),
            _ => {
                let mid = iv.halve();
                let left = variations(chain, &iv.lo, iv.exp) - variations(chain, &mid, iv.exp);
                let right = count - left;
                pending.push((Dyadic { lo: iv.lo.clone(), hi: mid.clone(), exp: iv.exp }, Some(left)));
                pending.push((Dyadic { lo: mid, hi: iv.hi, exp: iv.exp }, Some(right)));
            }
        }
    }
    if out.len() != deg {
        return Err(Error::Inconsistent(format!(
            "Sturm isolation found {} roots of a degree-{deg} factor",
            out.len()
        )));
    }
    out.sort_by(|a, b| (&a.lo << b.exp).cmp(&(&b.lo << a.exp)));
    Ok(out)
}

/// One bisection step on an interval holding exactly one simple root.
pub(crate) fn bisect(h: &[BigInt], iv: &mut Dyadic) {
    if iv.is_exact() {
        return;
    }
    let s_hi = intpoly::sign_at_dyadic(h, &iv.hi, iv.exp);
    if s_hi == Sign::NoSign {
        iv.lo = iv.hi.clone();
        return;
    }
    let mid = iv.halve();
    match intpoly::sign_at_dyadic(h, &mid, iv.exp) {
        Sign::NoSign => {
            iv.lo = mid.clone();
            iv.hi = mid;
        }
        s if s == s_hi => iv.hi = mid,
        _ => iv.lo = mid,
    }
}

pub(crate) fn refine(h: &[BigInt], iv: &mut Dyadic, bits: u64) {
    while !iv.within(bits) {
        bisect(h, iv);
    }
}
