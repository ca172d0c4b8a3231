//! Density, free energy and entropy of the monomer-dimer model, the Gurvits
//! bound, gap certificates, tree closed forms and Federbush coefficients.

mod federbush;
mod gap;
pub(crate) mod series;

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt;
use crate::polycore::MatchPoly;
use crate::spectra::{isolate_gammas, GammaSpectrum, DEFAULT_PRECISION_BITS};

pub use federbush::{federbush_from_prefix, federbush_series, FederbushSeries, SeriesJson, MAX_SERIES_ORDER};
pub use gap::{cycle_gap_lower, gap_certificate, gap_certificate_with, CycleBound, GapCertificate, GOLDEN_BREAKPOINT};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Natural logarithm of a possibly huge integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `p(G,t) = t M'(t) / (n M(t))`, `n = v/2`, exactly.
pub fn density_p(p: &MatchPoly, t: &BigRational) -> Result<BigRational> {
    if t < &BigRational::zero() {
        return Err(Error::Precondition(format!("activity must be nonnegative, got {}", fmt::rational(t))));
    }
    let v = BigRational::from_integer(BigInt::from(p.vertex_count()));
    Ok(BigRational::from_integer(BigInt::from(2)) * t * p.eval_derivative(t) / (v * p.eval(t)))
}

/// `lambda_G(p)` together with the activity it was evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambdaValue {
    pub value: f64,
    /// `None` at `p = 0`, at `p = p*` and beyond.
    pub t: Option<f64>,
    /// `p > p*`; the value is then 0 by convention.
    pub beyond_p_star: bool,
}

/// Sample of the entropy functions at one activity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyPoint {
    pub t: f64,
    pub p: f64,
    pub free_energy: f64,
    pub lambda: f64,
    pub q: f64,
    pub r: f64,
    pub gurvits: f64,
    pub gap: f64,
}

/// Floating-point entropy functions of one matching polynomial.
///
/// Sums over coefficients are done in log space, so no intermediate value
/// overflows however large `t` or `m_k` get.
#[derive(Debug)]
pub struct Entropy {
    poly: MatchPoly,
    ln_m: Vec<f64>,
    gammas: OnceLock<std::result::Result<Vec<(f64, usize)>, String>>,
}

impl Entropy {
    pub fn new(poly: MatchPoly) -> Self {
        let ln_m = poly.coeffs().iter().map(ln_big).collect();
        Entropy { poly, ln_m, gammas: OnceLock::new() }
    }

    /// Reuses an already isolated spectrum of the same polynomial.
    pub fn with_spectrum(spectrum: &GammaSpectrum) -> Self {
        let e = Entropy::new(spectrum.source().clone());
        let _ = e.gammas.set(Ok(gamma_midpoints(spectrum)));
        e
    }

    pub fn poly(&self) -> &MatchPoly {
        &self.poly
    }

    fn v(&self) -> f64 {
        self.poly.vertex_count() as f64
    }

    pub fn p_star(&self) -> f64 {
        2.0 * self.poly.matching_number() as f64 / self.v()
    }

    fn gammas(&self) -> Result<&[(f64, usize)]> {
        self.gammas
            .get_or_init(|| {
                isolate_gammas(&self.poly, DEFAULT_PRECISION_BITS)
                    .map(|s| gamma_midpoints(&s))
                    .map_err(|e| e.to_string())
            })
            .as_deref()
            .map_err(|e| Error::Inconsistent(e.clone()))
    }

    /// Log-space weights `ln(m_k t^k)`, with their maximum.
    fn weights(&self, t: f64) -> (Vec<f64>, f64) {
        let lt = t.ln();
        let w: Vec<f64> = self
            .ln_m
            .iter()
            .enumerate()
            .map(|(k, l)| if k == 0 { *l } else { l + k as f64 * lt })
            .collect();
        let max = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (w, max)
    }

    /// `ln M(G,t)`.
    pub fn ln_m(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let (w, max) = self.weights(t);
        max + w.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
    }

    /// Weighted average of `f(k)` under the distribution `m_k t^k / M`.
    fn average(&self, t: f64, f: impl Fn(usize) -> f64) -> f64 {
        if t == 0.0 {
            return f(0);
        }
        let (w, max) = self.weights(t);
        let (mut num, mut den) = (0.0, 0.0);
        for (k, x) in w.iter().enumerate() {
            let e = (x - max).exp();
            num += f(k) * e;
            den += e;
        }
        num / den
    }

    /// `p(G,t)`.
    pub fn density(&self, t: f64) -> f64 {
        let v = self.v();
        self.average(t, |k| 2.0 * k as f64 / v)
    }

    /// `p* - p(G,t)`, computed without cancellation.
    pub fn deficit(&self, t: f64) -> f64 {
        let v = self.v();
        let nu = self.poly.matching_number();
        self.average(t, |k| 2.0 * (nu - k) as f64 / v)
    }

    /// `t(p)`: bracket doubling, then bisection in `ln t`, until `|p(t) - p| <= tol`.
    pub fn invert_t(&self, p: f64, tol: f64) -> Result<f64> {
        let p_star = self.p_star();
        if !(0.0..p_star).contains(&p) {
            return Err(Error::Precondition(format!("density {p} must lie in [0, p* = {p_star})")));
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        // near p* compare deficits, which keep their relative accuracy
        let use_deficit = p > p_star / 2.0;
        let target_deficit = p_star - p;
        let below = |t: f64| if use_deficit { self.deficit(t) > target_deficit } else { self.density(t) < p };
        let error = |t: f64| if use_deficit { (self.deficit(t) - target_deficit).abs() } else { (self.density(t) - p).abs() };
        let (mut lo, mut hi) = (1.0f64, 1.0f64);
        while below(hi) {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Unresolved(format!("no finite activity reaches density {p}")));
            }
        }
        while !below(lo) {
            lo /= 2.0;
            if lo == 0.0 {
                return Err(Error::Unresolved(format!("no positive activity reaches density {p}")));
            }
        }
        let mut best = hi;
        for _ in 0..400 {
            if error(best) <= tol {
                return Ok(best);
            }
            let mid = (lo * hi).sqrt();
            if mid <= lo || mid >= hi {
                break;
            }
            if below(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            best = if error(lo) < error(hi) { lo } else { hi };
        }
        if error(best) <= tol {
            Ok(best)
        } else {
            Err(Error::Unresolved(format!(
                "density {p} not reached within {tol}; closest error {}",
                error(best)
            )))
        }
    }

    /// `F` at activity `t`, with `p* - p` supplied by the caller.
    fn free_energy_with(&self, t: f64, deficit: f64, p: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        if t <= 1.0 {
            return Ok(self.ln_m(t) / self.v() - p / 2.0 * t.ln());
        }
        // ln M = nu ln t + sum ln(gamma + 1/t)
        let tail: f64 = self.gammas()?.iter().map(|&(g, m)| m as f64 * (g + 1.0 / t).ln()).sum();
        Ok(deficit / 2.0 * t.ln() + tail / self.v())
    }

    /// `F(G,t) = ln M / v - (p/2) ln t`.
    pub fn free_energy(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Precondition(format!("activity must be finite and nonnegative, got {t}")));
        }
        self.free_energy_with(t, self.deficit(t), self.density(t))
    }

    pub fn lambda(&self, p: f64, tol: f64) -> Result<LambdaValue> {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::Precondition(format!("density must be finite and nonnegative, got {p}")));
        }
        if p == 0.0 {
            return Ok(LambdaValue { value: 0.0, t: None, beyond_p_star: false });
        }
        let exact = fmt::rational_from_f64(p)?;
        match exact.cmp(&self.poly.p_star()) {
            std::cmp::Ordering::Greater => Ok(LambdaValue { value: 0.0, t: None, beyond_p_star: true }),
            std::cmp::Ordering::Equal => Ok(LambdaValue {
                value: ln_big(self.poly.top()) / self.v(),
                t: None,
                beyond_p_star: false,
            }),
            std::cmp::Ordering::Less => {
                let deficit = (self.poly.p_star() - exact).to_f64().unwrap_or(0.0);
                let t = self.invert_t(p, tol)?;
                Ok(LambdaValue { value: self.free_energy_with(t, deficit, p)?, t: Some(t), beyond_p_star: false })
            }
        }
    }

    /// All entropy quantities at activity `t`, for degree `d`.
    pub fn point(&self, t: f64, d: usize) -> Result<EntropyPoint> {
        let p = self.density(t);
        let f = self.free_energy(t)?;
        let q = p / d as f64;
        let r = q * (1.0 - q) - t * (1.0 - d as f64 * q).powi(2);
        let gurvits = gurvits_bound(d, p)?;
        Ok(EntropyPoint { t, p, free_energy: f, lambda: f, q, r, gurvits, gap: f - gurvits })
    }
}

fn gamma_midpoints(s: &GammaSpectrum) -> Vec<(f64, usize)> {
    s.enclosures().iter().map(|e| (e.midpoint(), e.multiplicity)).collect()
}

pub fn invert_t(p: &MatchPoly, density: f64, tol: f64) -> Result<f64> {
    Entropy::new(p.clone()).invert_t(density, tol)
}

pub fn lambda(p: &MatchPoly, density: f64) -> Result<LambdaValue> {
    Entropy::new(p.clone()).lambda(density, DEFAULT_TOLERANCE)
}

fn xlnx_over(x: f64, y: f64) -> f64 {
    // x ln(x / y) with 0 ln 0 = 0
    if x == 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// `Gamma_d(p) = (p ln(d/p) + (d-p) ln(1-p/d) - 2(1-p) ln(1-p)) / 2`.
pub fn gurvits_bound(d: usize, p: f64) -> Result<f64> {
    if d == 0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("need d >= 1 and 0 <= p <= 1, got d = {d}, p = {p}")));
    }
    let d = d as f64;
    let a = -xlnx_over(p, d);
    let b = xlnx_over(d - p, d);
    let c = xlnx_over(1.0 - p, 1.0);
    Ok((a + b - 2.0 * c) / 2.0)
}

/// `t(T_d, p) = p(d-p) / (d^2 (1-p)^2)`.
pub fn tree_t(d: usize, p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Precondition(format!("tree activity needs 0 <= p < 1, got {p}")));
    }
    let d = d as f64;
    Ok(p * (d - p) / (d * d * (1.0 - p) * (1.0 - p)))
}

pub fn tree_t_exact(d: usize, p: &BigRational) -> Result<BigRational> {
    let one = BigRational::from_integer(BigInt::from(1));
    if p < &BigRational::zero() || p >= &one {
        return Err(Error::Precondition(format!("tree activity needs 0 <= p < 1, got {}", fmt::rational(p))));
    }
    let d = BigRational::from_integer(BigInt::from(d));
    let w = &one - p;
    Ok(p * (&d - p) / (&d * &d * &w * &w))
}

/// `p(T_d, t) = (2d^2 t + d - d sqrt(1 + 4(d-1)t)) / (2d^2 t + 2)`.
pub fn tree_p(d: usize, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Precondition(format!("activity must be nonnegative, got {t}")));
    }
    let d = d as f64;
    Ok((2.0 * d * d * t + d - d * (1.0 + 4.0 * (d - 1.0) * t).sqrt()) / (2.0 * d * d * t + 2.0))
}

/// Curve CSV with columns `t,p,F,lambda,gurvits,gap,q,r`.
pub fn curve_csv(points: &[EntropyPoint]) -> String {
    let mut out = String::from("t,p,F,lambda,gurvits,gap,q,r\n");
    for x in points {
        let row = [x.t, x.p, x.free_energy, x.lambda, x.gurvits, x.gap, x.q, x.r].map(fmt::float);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate;
    use crate::polycore::{matching_polynomial, Strategy};

    fn family(s: &str) -> MatchPoly {
        matching_polynomial(&generate(&s.parse().unwrap()).unwrap(), Strategy::Auto).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_densities() {
        assert_eq!(density_p(&family("c4"), &r(1, 1)).unwrap(), r(4, 7));
        assert_eq!(density_p(&family("k33"), &r(0, 1)).unwrap(), r(0, 1));
        let big = density_p(&family("k33"), &r(1_000_000_000, 1)).unwrap();
        assert!((r(1, 1) - big) < r(1, 100_000_000));
        assert!(density_p(&family("c4"), &r(-1, 1)).is_err());
    }

    #[test]
    fn inversion() {
        let c4 = family("c4");
        let t = invert_t(&c4, 4.0 / 7.0, 1e-12).unwrap();
        assert!((t - 1.0).abs() < 1e-10);
        assert_eq!(invert_t(&c4, 0.0, 1e-12).unwrap(), 0.0);
        assert!(invert_t(&c4, 1.0, 1e-12).is_err());
        let e = Entropy::new(c4);
        let t = e.invert_t(0.999999, 1e-12).unwrap();
        assert!((e.density(t) - 0.999999).abs() <= 1e-12);
    }

    #[test]
    fn lambda_values() {
        let k33 = family("k33");
        assert!((lambda(&k33, 1.0).unwrap().value - 6f64.ln() / 6.0).abs() < 1e-15);
        assert_eq!(lambda(&k33, 0.0).unwrap().value, 0.0);
        let c4 = lambda(&family("c4"), 4.0 / 7.0).unwrap();
        assert!((c4.value - 7f64.ln() / 4.0).abs() < 1e-10);
        let beyond = lambda(&family("c5"), 0.9).unwrap();
        assert!(beyond.beyond_p_star && beyond.value == 0.0);
    }

    #[test]
    fn spectral_and_direct_forms_agree() {
        let e = Entropy::new(family("q3"));
        for t in [1.0f64, 1.5, 3.0] {
            let direct = e.ln_m(t) / 8.0 - e.density(t) / 2.0 * t.ln();
            let spectral = e.free_energy_with(t, e.deficit(t), e.density(t)).unwrap();
            assert!((direct - spectral).abs() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn lambda_is_continuous_at_p_star() {
        let e = Entropy::new(family("k33"));
        let near = e.lambda(1.0 - 1e-9, 1e-15).unwrap().value;
        assert!((near - 6f64.ln() / 6.0).abs() < 1e-6);
    }

    #[test]
    fn gurvits_values() {
        assert_eq!(gurvits_bound(3, 0.0).unwrap(), 0.0);
        assert!((gurvits_bound(3, 1.0).unwrap() - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!(gurvits_bound(2, 1.0).unwrap().abs() < 1e-15);
        assert!(gurvits_bound(3, 1.5).is_err());
    }

    #[test]
    fn tree_forms() {
        assert!((tree_t(3, 0.5).unwrap() - 5.0 / 9.0).abs() < 1e-15);
        assert_eq!(tree_t_exact(3, &r(1, 2)).unwrap(), r(5, 9));
        assert!((tree_p(3, 5.0 / 9.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(tree_t(4, 0.0).unwrap(), 0.0);
        assert!(tree_t(3, 1.0).is_err());
    }

    #[test]
    fn curve_rows() {
        let e = Entropy::new(family("c4"));
        let pt = e.point(1.0, 2).unwrap();
        assert!((pt.r - 1.0 / 49.0).abs() < 1e-15);
        let csv = curve_csv(&[pt]);
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.starts_with("t,p,F,lambda,gurvits,gap,q,r\n1.00000000000e0,"));
    }
}
