//! Certified root isolation for `gamma_k`, matching measures and reference moments.

mod isolate;

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt;
use crate::intpoly::{self, IntPoly};
use crate::polycore::MatchPoly;
use isolate::Dyadic;

pub const DEFAULT_PRECISION_BITS: u64 = 60;
pub const MAX_REFINEMENT_BITS: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
    pub multiplicity: usize,
}

impl RootEnclosure {
    pub fn midpoint(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug)]
struct Factor {
    poly: IntPoly,
    multiplicity: usize,
}

/// Rational enclosures of the roots `gamma_1 <= ... <= gamma_nu` of
/// `M(G,t) = prod (1 + gamma_k t)`, one enclosure per distinct root.
#[derive(Clone, Debug)]
pub struct GammaSpectrum {
    source: MatchPoly,
    precision_bits: u64,
    enclosures: Vec<RootEnclosure>,
    factors: Vec<Factor>,
    slots: Vec<(usize, Dyadic)>,
}

pub fn isolate_gammas(p: &MatchPoly, bits: u64) -> Result<GammaSpectrum> {
    let nu = p.matching_number();
    if nu == 0 {
        return Err(Error::Precondition("the matching polynomial is constant".into()));
    }
    let f = p.signed_gamma_coefficients();
    let mut factors = Vec::new();
    let mut slots = Vec::new();
    for (poly, multiplicity) in isolate::square_free(&f) {
        let chain = isolate::sturm_chain(&poly);
        let idx = factors.len();
        for mut iv in isolate::isolate_positive(&poly, &chain)? {
            isolate::refine(&poly, &mut iv, bits);
            slots.push((idx, iv));
        }
        factors.push(Factor { poly, multiplicity });
    }
    let counted: usize = slots.iter().map(|(i, _)| factors[*i].multiplicity).sum();
    if counted != nu {
        return Err(Error::Inconsistent(format!("isolated {counted} roots, expected {nu}")));
    }
    let mut s = GammaSpectrum { source: p.clone(), precision_bits: bits, enclosures: Vec::new(), factors, slots };
    s.separate();
    Ok(s)
}

fn to_rational(num: &BigInt, exp: u64) -> BigRational {
    BigRational::new(num.clone(), BigInt::one() << exp)
}

impl GammaSpectrum {
    /// Sorts the slots and refines neighbours until their enclosures are disjoint.
    fn separate(&mut self) {
        loop {
            self.slots.sort_by(|a, b| cmp_lo(&a.1, &b.1));
            let mut clash = None;
            for i in 1..self.slots.len() {
                let (a, b) = (&self.slots[i - 1].1, &self.slots[i].1);
                if (&a.hi << b.exp) >= (&b.lo << a.exp) {
                    clash = Some(i);
                    break;
                }
            }
            let Some(i) = clash else { break };
            for j in [i - 1, i] {
                let (f, iv) = &mut self.slots[j];
                isolate::bisect(&self.factors[*f].poly, iv);
            }
        }
        self.enclosures = self
            .slots
            .iter()
            .map(|(f, iv)| RootEnclosure {
                lo: to_rational(&iv.lo, iv.exp),
                hi: to_rational(&iv.hi, iv.exp),
                multiplicity: self.factors[*f].multiplicity,
            })
            .collect();
    }

    pub fn source(&self) -> &MatchPoly {
        &self.source
    }

    pub fn precision_bits(&self) -> u64 {
        self.precision_bits
    }

    pub fn enclosures(&self) -> &[RootEnclosure] {
        &self.enclosures
    }

    /// Number of roots counted with multiplicity.
    pub fn root_count(&self) -> usize {
        self.enclosures.iter().map(|e| e.multiplicity).sum()
    }

    /// Enclosure index of `gamma_k`, `k` starting at 1.
    pub fn index_of(&self, k: usize) -> Option<usize> {
        let mut seen = 0;
        for (i, e) in self.enclosures.iter().enumerate() {
            seen += e.multiplicity;
            if k >= 1 && k <= seen {
                return Some(i);
            }
        }
        None
    }

    /// Midpoints of every `gamma_k` in increasing order, repeated by multiplicity.
    pub fn gammas_f64(&self) -> Vec<f64> {
        self.enclosures
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.midpoint(), e.multiplicity))
            .collect()
    }

    pub fn refine(&mut self, bits: u64) {
        for (f, iv) in self.slots.iter_mut() {
            isolate::refine(&self.factors[*f].poly, iv, bits);
        }
        self.precision_bits = self.precision_bits.max(bits);
        self.separate();
    }

    /// Exact comparison of root `idx` with `x`, refining a private copy of the
    /// enclosure up to [`MAX_REFINEMENT_BITS`].
    pub fn compare_root(&self, idx: usize, x: &BigRational) -> Result<Ordering> {
        let (f, iv) = &self.slots[idx];
        let poly = &self.factors[*f].poly;
        let mut iv = iv.clone();
        loop {
            let lo = to_rational(&iv.lo, iv.exp);
            let hi = to_rational(&iv.hi, iv.exp);
            if iv.is_exact() {
                return Ok(lo.cmp(x));
            }
            if x <= &lo {
                return Ok(Ordering::Greater);
            }
            if x > &hi {
                return Ok(Ordering::Less);
            }
            if intpoly::sign_at_rational(poly, x) == num_bigint::Sign::NoSign {
                return Ok(Ordering::Equal);
            }
            if iv.within(MAX_REFINEMENT_BITS) {
                return Err(Error::Unresolved(format!(
                    "root {idx} of {} not separated from {} at 2^-{MAX_REFINEMENT_BITS}",
                    self.source.label(),
                    fmt::rational(x)
                )));
            }
            isolate::bisect(poly, &mut iv);
        }
    }

    /// Number of roots, with multiplicity, at most `x`.
    pub fn count_at_most(&self, x: &BigRational) -> Result<usize> {
        let mut n = 0;
        for (i, e) in self.enclosures.iter().enumerate() {
            if self.compare_root(i, x)? != Ordering::Greater {
                n += e.multiplicity;
            }
        }
        Ok(n)
    }

    /// Vieta checks: the sum enclosure contains `m_1` and the product enclosure contains `m_nu`.
    pub fn vieta_check(&self) -> (bool, bool) {
        let m1 = BigRational::from_integer(BigInt::from(self.source.coeff(1)));
        let top = BigRational::from_integer(BigInt::from(self.source.top().clone()));
        let (mut slo, mut shi) = (BigRational::zero(), BigRational::zero());
        let (mut plo, mut phi) = (BigRational::one(), BigRational::one());
        for e in &self.enclosures {
            let m = BigRational::from_integer(BigInt::from(e.multiplicity));
            slo += &e.lo * &m;
            shi += &e.hi * &m;
            for _ in 0..e.multiplicity {
                plo *= &e.lo;
                phi *= &e.hi;
            }
        }
        (slo <= m1 && m1 <= shi, plo <= top && top <= phi)
    }

    /// Enclosure of `C(G) = (2/v) sum 1/gamma_i`.
    pub fn inverse_sum_enclosure(&self) -> (BigRational, BigRational) {
        let scale = BigRational::new(BigInt::from(2), BigInt::from(self.source.vertex_count()));
        let (mut lo, mut hi) = (BigRational::zero(), BigRational::zero());
        for e in &self.enclosures {
            let m = BigRational::from_integer(BigInt::from(e.multiplicity));
            lo += &m / &e.hi;
            hi += &m / &e.lo;
        }
        (lo * &scale, hi * scale)
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            label: self.source.label().to_string(),
            v: self.source.vertex_count(),
            precision_bits: self.precision_bits,
            roots: self
                .enclosures
                .iter()
                .map(|e| EnclosureJson {
                    lo: fmt::rational(&e.lo),
                    hi: fmt::rational(&e.hi),
                    multiplicity: e.multiplicity,
                })
                .collect(),
        }
    }
}

fn cmp_lo(a: &Dyadic, b: &Dyadic) -> Ordering {
    (&a.lo << b.exp).cmp(&(&b.lo << a.exp))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnclosureJson {
    pub lo: String,
    pub hi: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub label: String,
    pub v: usize,
    pub precision_bits: u64,
    pub roots: Vec<EnclosureJson>,
}

/// Whether every `gamma_k` is at most `4(D-1)`.
pub fn heilmann_lieb_check(s: &GammaSpectrum, max_degree: usize) -> Result<bool> {
    if max_degree <= 1 {
        return Err(Error::Precondition(format!("the bound needs D >= 2, got {max_degree}")));
    }
    let bound = BigRational::from_integer(BigInt::from(4 * (max_degree - 1)));
    for i in 0..s.enclosures.len() {
        if s.compare_root(i, &bound)? == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    /// Outward-rounded enclosure of the location.
    pub lo: f64,
    pub hi: f64,
    pub mass: BigRational,
}

impl Atom {
    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }
}

/// Uniform measure on the zeros of `mu(G,x)`: atoms at `+-sqrt(gamma_k)`.
#[derive(Clone, Debug)]
pub struct MatchingMeasure {
    spectrum: GammaSpectrum,
    atoms: Vec<Atom>,
    zero_mass: BigRational,
}

fn sqrt_down(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(0.0).next_down().max(0.0).sqrt().next_down().max(0.0)
}

fn sqrt_up(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY).next_up().sqrt().next_up()
}

impl MatchingMeasure {
    pub fn new(spectrum: GammaSpectrum) -> Self {
        let v = spectrum.source.vertex_count();
        let nu = spectrum.source.matching_number();
        let zero_mass = BigRational::new(BigInt::from(v - 2 * nu), BigInt::from(v));
        let mut positive = Vec::new();
        for e in &spectrum.enclosures {
            positive.push(Atom {
                lo: sqrt_down(&e.lo),
                hi: sqrt_up(&e.hi),
                mass: BigRational::new(BigInt::from(e.multiplicity), BigInt::from(v)),
            });
        }
        let mut atoms: Vec<Atom> = positive
            .iter()
            .rev()
            .map(|a| Atom { lo: -a.hi, hi: -a.lo, mass: a.mass.clone() })
            .collect();
        atoms.extend(positive);
        MatchingMeasure { spectrum, atoms, zero_mass }
    }

    pub fn spectrum(&self) -> &GammaSpectrum {
        &self.spectrum
    }

    /// Atoms at `+-sqrt(gamma_k)`, in increasing order of location.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn zero_mass(&self) -> &BigRational {
        &self.zero_mass
    }

    pub fn total_mass(&self) -> BigRational {
        self.atoms.iter().fold(self.zero_mass.clone(), |acc, a| acc + &a.mass)
    }

    /// CSV of `(location, mass)`, the location being the enclosure midpoint.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("location,mass\n");
        let (neg, pos) = self.atoms.split_at(self.atoms.len() / 2);
        let mut row = |a: &Atom| out.push_str(&format!("{},{}\n", fmt::float(a.midpoint()), fmt::rational(&a.mass)));
        neg.iter().for_each(&mut row);
        if !self.zero_mass.is_zero() {
            row(&Atom { lo: 0.0, hi: 0.0, mass: self.zero_mass.clone() });
        }
        pos.iter().for_each(&mut row);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMass {
    pub s: f64,
    /// `rho_G([-s, s])`.
    pub mass: BigRational,
    /// `(2 sqrt(d-1) / d) s`, when a degree was supplied.
    pub bound: Option<f64>,
    /// Exact comparison of `mass` with `bound`.
    pub within_bound: Option<bool>,
}

pub fn measure_interval_mass(m: &MatchingMeasure, s: f64, degree: Option<usize>) -> Result<IntervalMass> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::Precondition(format!("interval radius must be finite and nonnegative, got {s}")));
    }
    let sr = fmt::rational_from_f64(s)?;
    let s2 = &sr * &sr;
    let v = m.spectrum.source.vertex_count();
    let inside = m.spectrum.count_at_most(&s2)?;
    let mass = &m.zero_mass + BigRational::new(BigInt::from(2 * inside), BigInt::from(v));
    let (bound, within_bound) = match degree {
        Some(d) if d >= 1 => {
            let b = 2.0 * ((d - 1) as f64).sqrt() / d as f64 * s;
            // mass <= 2 sqrt(d-1) s / d  <=>  (d mass)^2 <= 4 (d-1) s^2
            let dm = &mass * BigRational::from_integer(BigInt::from(d));
            let ok = &dm * &dm <= s2 * BigRational::from_integer(BigInt::from(4 * (d - 1)));
            (Some(b), Some(ok))
        }
        _ => (None, None),
    };
    Ok(IntervalMass { s, mass, bound, within_bound })
}

/// `int z^order d rho_G`, exact via Newton's identities on the coefficients.
pub fn measure_moments(p: &MatchPoly, order: usize) -> BigRational {
    if order == 0 {
        return BigRational::one();
    }
    if order % 2 == 1 {
        return BigRational::zero();
    }
    let k = order / 2;
    let e: Vec<BigInt> = (0..=k).map(|i| BigInt::from(p.coeff(i))).collect();
    // power sums of the gamma_i
    let mut ps: Vec<BigInt> = vec![BigInt::zero(); k + 1];
    for j in 1..=k {
        let mut acc = BigInt::from(j) * &e[j];
        if j % 2 == 0 {
            acc = -acc;
        }
        for i in 1..j {
            let term = &e[i] * &ps[j - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        ps[j] = acc;
    }
    BigRational::new(BigInt::from(2) * &ps[k], BigInt::from(p.vertex_count()))
}

/// Closed walks of length `order` from the root of the infinite `d`-regular tree.
pub fn tree_moment(d: usize, order: usize) -> Result<BigUint> {
    if d < 2 {
        return Err(Error::Precondition(format!("tree degree must be at least 2, got {d}")));
    }
    if order % 2 == 1 {
        return Ok(BigUint::zero());
    }
    let depth = order / 2 + 1;
    // ways[j]: walks so far ending at distance j from the root
    let mut ways = vec![BigUint::zero(); depth + 1];
    ways[0] = BigUint::one();
    for _ in 0..order {
        let mut next = vec![BigUint::zero(); depth + 1];
        for j in 0..depth {
            if ways[j].is_zero() {
                continue;
            }
            let out = if j == 0 { d } else { d - 1 };
            next[j + 1] += &ways[j] * BigUint::from(out);
            if j > 0 {
                next[j - 1] += &ways[j];
            }
        }
        ways = next;
    }
    Ok(ways.swap_remove(0))
}

/// Kesten-McKay density of the infinite `d`-regular tree.
pub fn km_density(d: usize, x: f64) -> f64 {
    let d = d as f64;
    let r2 = 4.0 * (d - 1.0);
    if x * x >= r2 {
        return 0.0;
    }
    d * (r2 - x * x).sqrt() / (2.0 * std::f64::consts::PI * (d * d - x * x))
}

/// `(2 sqrt(d-1) / d) s`.
pub fn zero_estimation_mass_bound(d: usize, s: f64) -> f64 {
    2.0 * ((d as f64) - 1.0).sqrt() / d as f64 * s
}

/// Lower bound `d^2 k^2 / (4 (d-1) n^2)` for `gamma_k`, `n = v/2`.
pub fn zero_estimation_gamma_bound(d: usize, k: usize, v: usize) -> BigRational {
    BigRational::new(
        BigInt::from(d * d * k * k) * BigInt::from(4),
        BigInt::from(4 * (d - 1)) * BigInt::from(v * v),
    )
}
