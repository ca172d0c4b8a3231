//! Finite-size experiments along convergent graph sequences.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::entropy::{gurvits_bound, ln_big};
use crate::error::{Error, Result};
use crate::fmt;
use crate::graphs::{generate, FamilySpec, Graph};
use crate::polycore::{matching_polynomial_with, perfect_matching_count, PolyConfig, Strategy};
use crate::spectra::{measure_moments, tree_moment};

/// Catalan's constant over pi: the dimer entropy per site of the square lattice.
pub const CATALAN_OVER_PI: f64 = 0.915_965_594_177_219 / std::f64::consts::PI;

/// Sizes the sweep handles under the default frontier bound.
pub const DEFAULT_TORUS_SIZES: [usize; 4] = [4, 6, 8, 10];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusEntropy {
    pub m: usize,
    #[serde(serialize_with = "as_string")]
    pub perfect_matchings: BigUint,
    /// `ln pm / m^2`.
    pub lambda1: f64,
    pub abs_error: f64,
}

fn as_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn torus_entropy_sequence(sizes: &[usize], cfg: &PolyConfig) -> Result<Vec<TorusEntropy>> {
    if sizes.is_empty() {
        return Err(Error::Precondition("no torus sizes given".into()));
    }
    sizes
        .iter()
        .map(|&m| {
            if m < 4 || m % 2 == 1 {
                return Err(Error::InvalidFamily(format!("torus side must be even and at least 4, got {m}")));
            }
            let g = generate(&FamilySpec::Torus(vec![m, m]))?;
            let pm = perfect_matching_count(&g, cfg)?;
            let lambda1 = ln_big(&pm) / (m * m) as f64;
            Ok(TorusEntropy { m, perfect_matchings: pm, lambda1, abs_error: (lambda1 - CATALAN_OVER_PI).abs() })
        })
        .collect()
}

/// `|lambda_{next} - G/pi| <= |lambda_prev - G/pi| + slack` along the sequence.
pub fn errors_shrink(seq: &[TorusEntropy], slack: f64) -> bool {
    seq.windows(2).all(|w| w[1].abs_error <= w[0].abs_error + slack)
}

pub fn torus_csv(seq: &[TorusEntropy]) -> String {
    let mut out = String::from("size,lambda1,abs_error_vs_catalan_over_pi\n");
    for x in seq {
        out.push_str(&format!("{},{},{}\n", x.m, fmt::float(x.lambda1), fmt::float(x.abs_error)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GirthGap {
    pub girth: Option<usize>,
    pub lambda1: f64,
    /// `(1/2) ln((d-1)^(d-1) / d^(d-2))`.
    pub schrijver: f64,
    pub gap: f64,
    /// `m_n d^((d-2)n) >= (d-1)^((d-1)n)` in integers.
    pub schrijver_exact: bool,
}

/// `m_n >= ((d-1)^(d-1) / d^(d-2))^n`, compared in integers.
pub fn schrijver_holds(pm: &BigUint, d: usize, n: usize) -> bool {
    if d < 2 {
        return true;
    }
    let lhs = pm * BigUint::from(d).pow(((d - 2) * n) as u32);
    let rhs = BigUint::from(d - 1).pow(((d - 1) * n) as u32);
    lhs >= rhs
}

pub fn girth_entropy_gap(g: &Graph, d: usize, cfg: &PolyConfig) -> Result<GirthGap> {
    if g.regular_degree() != Some(d) || !g.is_bipartite() {
        return Err(Error::Precondition(format!("{} is not {d}-regular bipartite", g.label())));
    }
    let pm = perfect_matching_count(g, cfg)?;
    if pm.is_zero() {
        return Err(Error::Precondition(format!("{} has no perfect matching", g.label())));
    }
    let v = g.vertex_count();
    let lambda1 = ln_big(&pm) / v as f64;
    let schrijver = gurvits_bound(d, 1.0)?;
    Ok(GirthGap {
        girth: g.girth(),
        lambda1,
        schrijver,
        gap: lambda1 - schrijver,
        schrijver_exact: schrijver_holds(&pm, d, v / 2),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTable {
    pub labels: Vec<String>,
    pub orders: Vec<usize>,
    /// `moments[i][j]`: order `orders[j]` on graph `labels[i]`.
    pub moments: Vec<Vec<BigRational>>,
}

impl MomentTable {
    /// For each order, the first row from which every later row agrees exactly.
    pub fn stable_from(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (j, &order) in self.orders.iter().enumerate() {
            let last = &self.moments[self.moments.len() - 1][j];
            let mut start = self.moments.len() - 1;
            while start > 0 && &self.moments[start - 1][j] == last {
                start -= 1;
            }
            out.insert(order, start);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,order,moment\n");
        for (label, row) in self.labels.iter().zip(&self.moments) {
            for (order, m) in self.orders.iter().zip(row) {
                out.push_str(&format!("{label},{order},{}\n", fmt::rational(m)));
            }
        }
        out
    }
}

pub fn moment_convergence(family: &[FamilySpec], orders: &[usize], cfg: &PolyConfig) -> Result<MomentTable> {
    if family.is_empty() {
        return Err(Error::Precondition("no graphs given".into()));
    }
    let mut labels = Vec::new();
    let mut moments = Vec::new();
    for spec in family {
        let g = generate(spec)?;
        let p = matching_polynomial_with(&g, Strategy::Auto, cfg)?;
        labels.push(g.label().to_string());
        moments.push(orders.iter().map(|&o| measure_moments(&p, o)).collect());
    }
    Ok(MomentTable { labels, orders: orders.to_vec(), moments })
}

/// Whether the measure moment equals the tree's walk count, for every even
/// order below the girth and at most `max_order`.
pub fn tree_moment_agreement(g: &Graph, p: &crate::polycore::MatchPoly, max_order: usize) -> Result<Vec<(usize, bool)>> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::Precondition(format!("{} is not regular", g.label())))?;
    let limit = g.girth().unwrap_or(usize::MAX).min(max_order + 1);
    let mut out = Vec::new();
    let mut order = 0;
    while order < limit {
        let tree = BigRational::from_integer(BigInt::from(tree_moment(d, order)?));
        out.push((order, measure_moments(p, order) == tree));
        order += 2;
    }
    Ok(out)
}
