//! Exact matching generating functions `M(G,t) = sum_k m_k t^k`.

mod brute;
mod count;
mod elimination;
mod identities;
mod profile;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use brute::BRUTE_FORCE_BOUND;
pub(crate) use identities::poly_without;
pub use identities::{
    balanced_sums, check_identity, path_sum_residual, Identity, IdentityReport, PATH_ORACLE_BOUND,
};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use count::{binomial_prefix_bound, fits_u128, forward_choice_bound};
use profile::{sweep, SweepTarget};

/// Environment variable overriding the elimination vertex bound.
pub const MAX_VERTICES_ENV: &str = "MATCHKIT_MAX_VERTICES";
pub const DEFAULT_ELIMINATION_BOUND: usize = 64;
pub const DEFAULT_MAX_FRONTIER: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Sweep when the frontier fits, otherwise elimination.
    #[default]
    Auto,
    Elimination,
    Profile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyConfig {
    pub max_elimination_vertices: usize,
    pub max_frontier: usize,
}

impl Default for PolyConfig {
    fn default() -> Self {
        PolyConfig {
            max_elimination_vertices: DEFAULT_ELIMINATION_BOUND,
            max_frontier: DEFAULT_MAX_FRONTIER,
        }
    }
}

impl PolyConfig {
    /// Defaults, with the elimination bound taken from `MATCHKIT_MAX_VERTICES` when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = PolyConfig::default();
        if let Ok(raw) = std::env::var(MAX_VERTICES_ENV) {
            let bound: usize = raw
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{MAX_VERTICES_ENV}={raw} is not an integer")))?;
            cfg.max_elimination_vertices = bound.min(elimination::MASK_CAPACITY);
        }
        Ok(cfg)
    }
}

/// Exact coefficients `m_0 ..= m_nu` of the matching generating function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchPoly {
    v: usize,
    coeffs: Vec<BigUint>,
    label: String,
}

impl MatchPoly {
    /// Trailing zero coefficients are dropped.
    pub fn new(v: usize, mut coeffs: Vec<BigUint>, label: impl Into<String>) -> Result<Self> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.first().is_none_or(|c| !c.is_one()) {
            return Err(Error::InvalidGraph("matching polynomial must have m_0 = 1".into()));
        }
        if coeffs.len() > v / 2 + 1 {
            return Err(Error::InvalidGraph(format!(
                "{} coefficients exceed v/2 + 1 for v = {v}",
                coeffs.len()
            )));
        }
        Ok(MatchPoly { v, coeffs, label: label.into() })
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Size of a maximum matching.
    pub fn matching_number(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `m_k`, zero beyond the matching number.
    pub fn coeff(&self, k: usize) -> BigUint {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn edge_count(&self) -> BigUint {
        self.coeff(1)
    }

    /// Number of maximum matchings.
    pub fn top(&self) -> &BigUint {
        self.coeffs.last().expect("m_0 is always present")
    }

    pub fn has_perfect_matching(&self) -> bool {
        2 * self.matching_number() == self.v
    }

    pub fn perfect_matchings(&self) -> Option<&BigUint> {
        self.has_perfect_matching().then(|| self.top())
    }

    /// `p* = 2 nu / v`.
    pub fn p_star(&self) -> BigRational {
        BigRational::new(BigInt::from(2 * self.matching_number()), BigInt::from(self.v))
    }

    pub fn signed_gamma_coefficients(&self) -> Vec<BigInt> {
        // sum_k (-1)^k m_k g^(nu-k), lowest degree first
        let nu = self.matching_number();
        (0..=nu)
            .map(|j| {
                let k = nu - j;
                let sign = if k.is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
                BigInt::from_biguint(sign, self.coeffs[k].clone())
            })
            .collect()
    }

    /// Coefficients of the signed polynomial `mu(G,x)` of degree `v`, lowest first.
    pub fn mu_coefficients(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.v + 1];
        for (k, m) in self.coeffs.iter().enumerate() {
            let sign = if k % 2 == 0 { Sign::Plus } else { Sign::Minus };
            out[self.v - 2 * k] = BigInt::from_biguint(sign, m.clone());
        }
        out
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, m| {
            acc * t + BigRational::from_integer(BigInt::from(m.clone()))
        })
    }

    pub fn eval_derivative(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(BigRational::zero(), |acc, (k, m)| {
                acc * t + BigRational::from_integer(BigInt::from(m.clone() * BigUint::from(k)))
            })
    }

    /// First `k` with `m_k^2 < m_{k-1} m_{k+1}`, if any.
    pub fn log_concavity_violation(&self) -> Option<usize> {
        (1..self.matching_number()).find(|&k| {
            &self.coeffs[k] * &self.coeffs[k] < &self.coeffs[k - 1] * &self.coeffs[k + 1]
        })
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            v: self.v,
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
            label: self.label.clone(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Result<Self> {
        let coeffs = json
            .coeffs
            .iter()
            .map(|s| s.parse::<BigUint>().map_err(|_| Error::Parse(format!("bad coefficient `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        MatchPoly::new(json.v, coeffs, json.label.clone())
    }
}

/// Polynomial JSON: decimal strings so large coefficients survive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub v: usize,
    pub coeffs: Vec<String>,
    pub label: String,
}

pub fn matching_polynomial(g: &Graph, strategy: Strategy) -> Result<MatchPoly> {
    matching_polynomial_with(g, strategy, &PolyConfig::default())
}

pub fn matching_polynomial_with(g: &Graph, strategy: Strategy, cfg: &PolyConfig) -> Result<MatchPoly> {
    let coeffs = counts_up_to(g, g.vertex_count() / 2, strategy, cfg)?;
    MatchPoly::new(g.vertex_count(), coeffs, g.label())
}

/// `m_0 ..= m_max_degree` (zeros past the matching number), without
/// computing higher coefficients.
pub fn matching_counts_prefix(g: &Graph, max_degree: usize, strategy: Strategy, cfg: &PolyConfig) -> Result<Vec<BigUint>> {
    let mut c = counts_up_to(g, max_degree, strategy, cfg)?;
    c.resize(max_degree + 1, BigUint::zero());
    Ok(c)
}

fn counts_up_to(g: &Graph, max_degree: usize, strategy: Strategy, cfg: &PolyConfig) -> Result<Vec<BigUint>> {
    let resolved = match strategy {
        Strategy::Auto if g.frontier_width() <= cfg.max_frontier => Strategy::Profile,
        Strategy::Auto => Strategy::Elimination,
        s => s,
    };
    match resolved {
        Strategy::Elimination => {
            let bound = cfg.max_elimination_vertices.min(elimination::MASK_CAPACITY);
            if g.vertex_count() > bound {
                return Err(Error::TooLarge {
                    what: "elimination strategy",
                    vertices: g.vertex_count(),
                    bound,
                });
            }
            Ok(elimination::eliminate(g, max_degree))
        }
        _ => {
            let target = SweepTarget::Coefficients { max_degree };
            let bound = if max_degree >= g.vertex_count() / 2 {
                forward_bound(g)
            } else {
                binomial_prefix_bound(g.edge_count(), max_degree).min(forward_bound(g))
            };
            let counts = if fits_u128(&bound) {
                into_big(sweep::<u128>(g, target, cfg.max_frontier)?)
            } else {
                sweep::<BigUint>(g, target, cfg.max_frontier)?
            };
            Ok(counts)
        }
    }
}

/// Number of perfect matchings by the sweep, without the full polynomial.
pub fn perfect_matching_count(g: &Graph, cfg: &PolyConfig) -> Result<BigUint> {
    let target = SweepTarget::PerfectMatchings;
    let counts = if fits_u128(&forward_bound(g)) {
        into_big(sweep::<u128>(g, target, cfg.max_frontier)?)
    } else {
        sweep::<BigUint>(g, target, cfg.max_frontier)?
    };
    Ok(counts.into_iter().next().unwrap_or_default())
}

/// Enumeration oracle for tests; graphs up to [`BRUTE_FORCE_BOUND`] vertices.
pub fn brute_force_match_counts(g: &Graph) -> Result<MatchPoly> {
    MatchPoly::new(g.vertex_count(), brute::brute_force_counts(g)?, g.label())
}

/// Bound on the number of matchings of `g`, and so on every DP value: each
/// matching is fixed by choosing, at every vertex of a vertex cover, a partner
/// or nothing. Both the forward-neighbour choice and either colour class qualify.
fn forward_bound(g: &Graph) -> BigUint {
    let forward = forward_choice_bound((0..g.vertex_count()).map(|v| g.neighbors(v).iter().filter(|&&u| u > v).count()));
    match g.bipartition() {
        Some(b) => [&b.left, &b.right]
            .into_iter()
            .map(|side| forward_choice_bound(side.iter().map(|&v| g.degree(v))))
            .fold(forward, |acc, x| acc.min(x)),
        None => forward,
    }
}

fn into_big(c: Vec<u128>) -> Vec<BigUint> {
    c.into_iter().map(BigUint::from).collect()
}
