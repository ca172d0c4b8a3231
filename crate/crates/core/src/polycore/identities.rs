use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{matching_polynomial, Strategy};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::intpoly::{self, IntPoly};

/// Largest graph for which the explicit path expansion is enumerated.
pub const PATH_ORACLE_BOUND: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `sum_u M(G-u) = v M(G) - 2t M'(G)`
    A,
    /// `sum_{uv in E} M(G-u-v) = M'(G)`
    B,
    /// `M(G)M(G-u-v) - M(G-u)M(G-v) - t M(G-u-v)^2` over paths from `u` to `v`.
    C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: Identity,
    /// For (a) and (b): left side minus right side. For (c): the residual polynomial.
    pub residual: IntPoly,
    /// (a)/(b): residual vanishes. (c): residual nonnegative on bipartite graphs and
    /// equal to the path expansion wherever that was enumerated.
    pub holds: bool,
    /// (c) only: every residual coefficient is nonnegative.
    pub nonnegative: Option<bool>,
    /// (c) only: comparison with the explicit path expansion, when enumerated.
    pub path_oracle_matches: Option<bool>,
}

pub(crate) fn poly_without(g: &Graph, removed: &[usize]) -> Result<IntPoly> {
    if removed.len() >= g.vertex_count() {
        return Ok(vec![BigInt::from(1)]);
    }
    let h = if removed.is_empty() { g.clone() } else { g.remove_vertices(removed)? };
    Ok(intpoly::from_unsigned(matching_polynomial(&h, Strategy::Auto)?.coeffs()))
}

pub fn check_identity(g: &Graph, which: Identity, edge: Option<(usize, usize)>) -> Result<IdentityReport> {
    let m = poly_without(g, &[])?;
    let dm = intpoly::derivative(&m);
    match which {
        Identity::A => {
            let mut lhs = IntPoly::new();
            for u in 0..g.vertex_count() {
                lhs = intpoly::add(&lhs, &poly_without(g, &[u])?);
            }
            let rhs = intpoly::sub(
                &intpoly::scale(&m, &BigInt::from(g.vertex_count())),
                &intpoly::shift(&intpoly::scale(&dm, &BigInt::from(2)), 1),
            );
            Ok(exact_report(which, intpoly::sub(&lhs, &rhs)))
        }
        Identity::B => {
            let mut lhs = IntPoly::new();
            for &(u, v) in g.edges() {
                lhs = intpoly::add(&lhs, &poly_without(g, &[u, v])?);
            }
            Ok(exact_report(which, intpoly::sub(&lhs, &dm)))
        }
        Identity::C => {
            let (u, v) = edge.ok_or_else(|| Error::Precondition("identity (c) needs an edge".into()))?;
            if !g.has_edge(u, v) {
                return Err(Error::Precondition(format!("({u}, {v}) is not an edge")));
            }
            let m_uv = poly_without(g, &[u, v])?;
            let residual = intpoly::sub(
                &intpoly::sub(
                    &intpoly::mul(&m, &m_uv),
                    &intpoly::mul(&poly_without(g, &[u])?, &poly_without(g, &[v])?),
                ),
                &intpoly::shift(&intpoly::mul(&m_uv, &m_uv), 1),
            );
            let nonnegative = residual.iter().all(|c| !c.is_negative());
            let path_oracle_matches = if g.vertex_count() <= PATH_ORACLE_BOUND {
                Some(path_sum_residual(g, u, v)? == residual)
            } else {
                None
            };
            let holds = path_oracle_matches != Some(false) && (nonnegative || !g.is_bipartite());
            Ok(IdentityReport {
                identity: which,
                residual,
                holds,
                nonnegative: Some(nonnegative),
                path_oracle_matches,
            })
        }
    }
}

fn exact_report(identity: Identity, residual: IntPoly) -> IdentityReport {
    IdentityReport {
        identity,
        holds: residual.iter().all(Zero::is_zero),
        residual,
        nonnegative: None,
        path_oracle_matches: None,
    }
}

/// `-sum_{P != (u,v)} (-t)^{|P|-1} M(G \ P)^2` over simple `u`-`v` paths,
/// `|P|` counting vertices. Equals the (c) residual for any graph.
pub fn path_sum_residual(g: &Graph, u: usize, v: usize) -> Result<IntPoly> {
    if g.vertex_count() > PATH_ORACLE_BOUND {
        return Err(Error::TooLarge {
            what: "path expansion",
            vertices: g.vertex_count(),
            bound: PATH_ORACLE_BOUND,
        });
    }
    let mut paths = Vec::new();
    let mut on_path = vec![false; g.vertex_count()];
    let mut stack = vec![u];
    on_path[u] = true;
    collect_paths(g, v, &mut stack, &mut on_path, &mut paths);
    let mut total = IntPoly::new();
    for path in paths {
        if path.len() == 2 {
            continue;
        }
        let rest = poly_without(g, &path)?;
        let k = path.len() - 1;
        // -(-1)^k = +1 when k is odd
        let sign = if k % 2 == 1 { BigInt::from(1) } else { BigInt::from(-1) };
        let term = intpoly::shift(&intpoly::scale(&intpoly::mul(&rest, &rest), &sign), k);
        total = intpoly::add(&total, &term);
    }
    Ok(total)
}

fn collect_paths(g: &Graph, target: usize, stack: &mut Vec<usize>, on_path: &mut [bool], out: &mut Vec<Vec<usize>>) {
    let x = *stack.last().unwrap();
    if x == target {
        out.push(stack.clone());
        return;
    }
    for &y in g.neighbors(x) {
        if !on_path[y] {
            on_path[y] = true;
            stack.push(y);
            collect_paths(g, target, stack, on_path, out);
            stack.pop();
            on_path[y] = false;
        }
    }
}

/// `(sum_{u in A} M(G-u), sum_{v in B} M(G-v))` for a bipartite graph.
pub fn balanced_sums(g: &Graph) -> Result<(IntPoly, IntPoly)> {
    let b = g
        .bipartition()
        .ok_or_else(|| Error::Precondition("balanced sums need a bipartite graph".into()))?;
    let mut left = IntPoly::new();
    for &u in &b.left {
        left = intpoly::add(&left, &poly_without(g, &[u])?);
    }
    let mut right = IntPoly::new();
    for &v in &b.right {
        right = intpoly::add(&right, &poly_without(g, &[v])?);
    }
    Ok((left, right))
}
