//! Edge probabilities, `s(G)`, the `G*` construction and the bounds it breaks.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::polycore::{perfect_matching_count, MatchPoly, PolyConfig};
use crate::spectra::GammaSpectrum;

fn pm(g: &Graph, cfg: &PolyConfig) -> Result<BigUint> {
    if g.vertex_count() % 2 == 1 {
        return Ok(BigUint::zero());
    }
    perfect_matching_count(g, cfg)
}

fn pm_without(g: &Graph, removed: &[usize], cfg: &PolyConfig) -> Result<BigUint> {
    if removed.len() == g.vertex_count() {
        return Ok(BigUint::from(1u32));
    }
    pm(&g.remove_vertices(removed)?, cfg)
}

/// Probability that a uniform random perfect matching contains `(u, v)`.
pub fn edge_probability(g: &Graph, (u, v): (usize, usize), cfg: &PolyConfig) -> Result<BigRational> {
    if !g.has_edge(u, v) {
        return Err(Error::Precondition(format!("({u}, {v}) is not an edge of {}", g.label())));
    }
    let total = pm(g, cfg)?;
    if total.is_zero() {
        return Err(Error::Precondition(format!("{} has no perfect matching", g.label())));
    }
    Ok(BigRational::new(BigInt::from(pm_without(g, &[u, v], cfg)?), BigInt::from(total)))
}

/// Sum of `p(f)` over the edges `f` at each vertex; exactly 1 everywhere.
pub fn vertex_probability_sums(g: &Graph, cfg: &PolyConfig) -> Result<Vec<BigRational>> {
    let mut sums = vec![BigRational::zero(); g.vertex_count()];
    for &(u, v) in g.edges() {
        let p = edge_probability(g, (u, v), cfg)?;
        sums[u] += &p;
        sums[v] += p;
    }
    Ok(sums)
}

/// `s(G) = m_{n-1} / (n m_n)`.
pub fn s_value(p: &MatchPoly) -> Result<BigRational> {
    let top = p
        .perfect_matchings()
        .ok_or_else(|| Error::Precondition(format!("{} has no perfect matching", p.label())))?;
    let n = p.vertex_count() / 2;
    Ok(BigRational::new(BigInt::from(p.coeff(n - 1)), BigInt::from(n) * BigInt::from(top.clone())))
}

/// `d` copies of `G - e`, then `u*` joined to every copy of `v` and `v*` to
/// every copy of `u`. Copies are laid out contiguously; `u*`, `v*` come last.
pub fn build_degenerate(g: &Graph, (u, v): (usize, usize)) -> Result<Graph> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::Precondition(format!("{} is not regular", g.label())))?;
    if !g.is_bipartite() {
        return Err(Error::Precondition(format!("{} is not bipartite", g.label())));
    }
    if !g.has_edge(u, v) {
        return Err(Error::Precondition(format!("({u}, {v}) is not an edge of {}", g.label())));
    }
    let n = g.vertex_count();
    let (u_star, v_star) = (d * n, d * n + 1);
    let mut edges = Vec::with_capacity(d * g.edge_count() + 2 * d);
    for c in 0..d {
        let off = c * n;
        for &(a, b) in g.edges() {
            if (a, b) != (u.min(v), u.max(v)) {
                edges.push((a + off, b + off));
            }
        }
        edges.push((u_star, v + off));
        edges.push((v_star, u + off));
    }
    Graph::new(d * n + 2, &edges, format!("degenerate({},{u}-{v})", g.label()))
}

/// `d m_{n-1}(G - {u,v}) m_n(G - e)^(d-1)`, the perfect matchings of `G*`.
pub fn degenerate_pm_formula(g: &Graph, (u, v): (usize, usize), cfg: &PolyConfig) -> Result<BigUint> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::Precondition(format!("{} is not regular", g.label())))?;
    let inner = pm_without(g, &[u, v], cfg)?;
    let rest = pm(&g.remove_edge(u, v)?, cfg)?;
    Ok(BigUint::from(d) * inner * rest.pow(d as u32 - 1))
}

/// `(1 / (d (dn+1))) (1/p(e) - 1)`.
pub fn degenerate_s_lower_bound(d: usize, n: usize, p_e: &BigRational) -> BigRational {
    let one = BigRational::from_integer(BigInt::from(1));
    (p_e.recip() - one) / BigRational::from_integer(BigInt::from(d * (d * n + 1)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialReport {
    pub s: BigRational,
    pub gamma1_lo: BigRational,
    pub gamma1_hi: BigRational,
    /// `gamma_1 <= 1/s`.
    pub lower_holds: bool,
    /// `1/s <= n gamma_1`.
    pub upper_holds: bool,
    /// `s` lies in the enclosure of `(1/n) sum 1/gamma_i`.
    pub identity_holds: bool,
}

impl TrivialReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds && self.identity_holds
    }
}

/// `gamma_1 <= 1/s(G) <= n gamma_1`, decided exactly against the enclosure of `gamma_1`.
pub fn check_trivial(p: &MatchPoly, s: &GammaSpectrum) -> Result<TrivialReport> {
    if s.source() != p {
        return Err(Error::Precondition("spectrum belongs to a different polynomial".into()));
    }
    let sv = s_value(p)?;
    let n = BigRational::from_integer(BigInt::from(p.vertex_count() / 2));
    let inv = sv.recip();
    let first = s.index_of(1).expect("a graph with a perfect matching has roots");
    let lower_holds = s.compare_root(first, &inv)? != Ordering::Greater;
    let upper_holds = s.compare_root(first, &(&inv / &n))? != Ordering::Less;
    let (lo, hi) = s.inverse_sum_enclosure();
    let e = &s.enclosures()[first];
    Ok(TrivialReport {
        identity_holds: lo <= sv && sv <= hi,
        gamma1_lo: e.lo.clone(),
        gamma1_hi: e.hi.clone(),
        s: sv,
        lower_holds,
        upper_holds,
    })
}
