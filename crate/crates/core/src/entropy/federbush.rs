use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::series::{self, Series};
use crate::error::{Error, Result};
use crate::fmt;
use crate::polycore::MatchPoly;

/// Largest order accepted by [`federbush_series`].
pub const MAX_SERIES_ORDER: usize = 10;

/// Coefficients of `2 lambda(p) = p ln(d/p) - 2(1-p) ln(1-p) - p + d sum_k a_k/(k(k-1)) (p/d)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FederbushSeries {
    pub d: usize,
    pub order: usize,
    /// `a_2 ..= a_K`.
    pub a: Vec<BigRational>,
    /// `b_k = a_k - 1`.
    pub b: Vec<BigRational>,
}

impl FederbushSeries {
    pub fn a_k(&self, k: usize) -> Option<&BigRational> {
        k.checked_sub(2).and_then(|i| self.a.get(i))
    }

    pub fn b_k(&self, k: usize) -> Option<&BigRational> {
        k.checked_sub(2).and_then(|i| self.b.get(i))
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            d: self.d,
            k: self.order,
            a: self.a.iter().map(fmt::rational).collect(),
            b: self.b.iter().map(fmt::rational).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub d: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
}

pub fn federbush_series(p: &MatchPoly, d: usize, order: usize) -> Result<FederbushSeries> {
    federbush_from_prefix(p.vertex_count(), d, p.coeffs(), order, MAX_SERIES_ORDER)
}

/// Same pipeline from `m_0 ..= m_K` alone; later coefficients never enter.
pub fn federbush_from_prefix(
    v: usize,
    d: usize,
    prefix: &[BigUint],
    order: usize,
    max_order: usize,
) -> Result<FederbushSeries> {
    if order < 2 || order > max_order {
        return Err(Error::Precondition(format!("series order must lie in 2..={max_order}, got {order}")));
    }
    if d == 0 || prefix.first().is_none_or(|m| !m.is_one()) {
        return Err(Error::Precondition("need d >= 1 and m_0 = 1".into()));
    }
    let k = order;
    let rat = |n: usize| BigRational::from_integer(BigInt::from(n));
    let m: Series = (0..=k)
        .map(|i| prefix.get(i).map_or_else(BigRational::zero, |c| BigRational::from_integer(BigInt::from(c.clone()))))
        .collect();
    if m[1] != rat(v * d) / rat(2) {
        return Err(Error::InvalidGraph(format!("m_1 = {} does not match a {d}-regular graph on {v} vertices", m[1])));
    }
    // p(t) = (2/v) t M'(t) / M(t)
    let mut t_dm = vec![BigRational::zero()];
    t_dm.extend(series::derivative(&m));
    let scale = rat(2) / rat(v);
    let p_of_t: Series = series::mul(&t_dm, &series::inv(&m, k), k).into_iter().map(|c| c * &scale).collect();
    let t_of_p = series::revert(&p_of_t, k);
    // u = d t(p) / p, known to order K-1
    let u: Series = t_of_p[1..].iter().map(|c| c * rat(d)).collect();
    let mut p_ln_u = vec![BigRational::zero()];
    p_ln_u.extend(series::log(&u, k - 1));
    let ln_m = series::compose(&series::log(&m, k), &t_of_p, k);
    let tail = series::mul(&[BigRational::one(), -BigRational::one()], &series::log_one_minus(k), k);
    let mut a_series: Series = (0..=k)
        .map(|i| &ln_m[i] * &scale - &p_ln_u[i] + &tail[i] * rat(2))
        .collect();
    a_series[1] += BigRational::one();
    if !a_series[0].is_zero() || !a_series[1].is_zero() {
        return Err(Error::Inconsistent("series remainder does not start at order 2".into()));
    }
    let mut a = Vec::with_capacity(k - 1);
    let mut d_pow = rat(d);
    for (i, c) in a_series.iter().enumerate().skip(2) {
        a.push(c * rat(i * (i - 1)) * &d_pow);
        d_pow *= rat(d);
    }
    let b = a.iter().map(|x| x - BigRational::one()).collect();
    Ok(FederbushSeries { d, order, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate;
    use crate::polycore::{matching_polynomial, Strategy};
    use num_traits::Signed;

    fn family(s: &str) -> MatchPoly {
        matching_polynomial(&generate(&s.parse().unwrap()).unwrap(), Strategy::Auto).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn cycle_of_girth_eight_matches_the_tree() {
        let s = federbush_series(&family("c8"), 2, 7).unwrap();
        assert!(s.b.iter().all(Zero::is_zero), "{:?}", s.b);
    }

    #[test]
    fn four_cycle_has_a_negative_coefficient() {
        let s = federbush_series(&family("c4"), 2, 10).unwrap();
        assert_eq!(s.a, ints(&[1, 1, 4, 21, 76, 190, 288, -35, -1724]));
    }

    #[test]
    fn complete_bipartite_turns_negative_late() {
        let p = family("k33");
        let s = federbush_from_prefix(6, 3, p.coeffs(), 14, 14).unwrap();
        let first = (2..=14).find(|&k| s.a_k(k).unwrap().is_negative());
        assert_eq!(first, Some(13));
        assert_eq!(s.a_k(13).unwrap(), &BigRational::from_integer(BigInt::from(-2_705_871)));
    }

    #[test]
    fn torus_matches_square_lattice() {
        let s = federbush_series(&family("t8x8"), 4, 7).unwrap();
        assert_eq!(s.a, ints(&[1, 1, 7, 41, 181, 757]));
        assert_eq!(s.b, ints(&[0, 0, 6, 40, 180, 756]));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(federbush_series(&family("c4"), 3, 4).is_err());
        assert!(federbush_series(&family("c4"), 2, 11).is_err());
        assert!(federbush_series(&family("c4"), 2, 1).is_err());
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_value(federbush_series(&family("c8"), 2, 3).unwrap().to_json()).unwrap();
        assert_eq!(j["K"], 3);
        assert_eq!(j["a"][0], "1/1");
    }
}
