use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::density_p;
use crate::error::{Error, Result};
use crate::graphs::{transitivity_status, Graph, Symmetry, DEFAULT_TRANSITIVITY_BOUND};
use crate::polycore::{matching_polynomial, MatchPoly, Strategy};

/// Solution of `x = (1-x)^2` in `[0, 1]`, i.e. `(3 - sqrt 5) / 2`.
pub const GOLDEN_BREAKPOINT: f64 = 0.381_966_011_250_105_1;

/// `d r / 2 >= (t / (1+dt)^2)^l` for a shortest cycle length `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBound {
    pub length: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

/// Exact `q = p/d` and `r = q(1-q) - t(1-dq)^2` at a rational activity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCertificate {
    pub t: BigRational,
    pub p: BigRational,
    pub q: BigRational,
    pub r: BigRational,
    /// Whether the graph is known to be vertex-transitive; only then is `r >= 0` asserted.
    pub transitivity: Symmetry,
    pub r_nonnegative: bool,
    pub cycle: Option<CycleBound>,
}

impl GapCertificate {
    /// True unless a transitive graph violates `r >= 0` or the cycle bound.
    pub fn holds(&self) -> bool {
        !self.transitivity.holds() || (self.r_nonnegative && self.cycle.as_ref().is_none_or(|c| c.holds))
    }
}

pub fn gap_certificate(g: &Graph, t: &BigRational, cycle_length: Option<usize>) -> Result<GapCertificate> {
    let poly = matching_polynomial(g, Strategy::Auto)?;
    gap_certificate_with(g, &poly, t, cycle_length)
}

pub fn gap_certificate_with(
    g: &Graph,
    poly: &MatchPoly,
    t: &BigRational,
    cycle_length: Option<usize>,
) -> Result<GapCertificate> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::Precondition(format!("{} is not regular", g.label())))?;
    if !g.is_bipartite() {
        return Err(Error::Precondition(format!("{} is not bipartite", g.label())));
    }
    let p = density_p(poly, t)?;
    let dr = BigRational::from_integer(BigInt::from(d));
    let one = BigRational::one();
    let q = &p / &dr;
    let w = &one - &dr * &q;
    let r = &q * (&one - &q) - t * &w * &w;
    let cycle = cycle_length.map(|length| {
        let lhs = &dr * &r / BigRational::from_integer(BigInt::from(2));
        let base = t / ((&one + &dr * t) * (&one + &dr * t));
        let rhs = (0..length).fold(one.clone(), |acc, _| acc * &base);
        CycleBound { length, holds: lhs >= rhs, lhs, rhs }
    });
    Ok(GapCertificate {
        t: t.clone(),
        transitivity: transitivity_status(g, DEFAULT_TRANSITIVITY_BOUND)?,
        r_nonnegative: r >= BigRational::zero(),
        p,
        q,
        r,
        cycle,
    })
}

/// `int_0^p f(x)^l dx` with `f(x) = min(x, (1-x)^2) / (4d)`.
pub fn cycle_gap_lower(d: usize, l: usize, p: f64) -> Result<f64> {
    if d < 2 || l < 4 || l % 2 == 1 || !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!(
            "need d >= 2, even l >= 4 and 0 <= p <= 1, got d = {d}, l = {l}, p = {p}"
        )));
    }
    let l = l as i32;
    let a = p.min(GOLDEN_BREAKPOINT);
    let mut total = a.powi(l + 1) / (l + 1) as f64;
    if p > GOLDEN_BREAKPOINT {
        let e = 2 * l + 1;
        total += ((1.0 - GOLDEN_BREAKPOINT).powi(e) - (1.0 - p).powi(e)) / e as f64;
    }
    Ok(total / (4.0 * d as f64).powi(l))
}
