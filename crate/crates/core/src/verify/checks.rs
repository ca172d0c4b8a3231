use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CheckId, CheckParams, CheckReport, GraphContext, Verdict, Witness};
use crate::degenerate::check_trivial;
use crate::entropy::{cycle_gap_lower, density_p, gap_certificate_with, gurvits_bound, ln_big, tree_p, tree_t_exact};
use crate::error::Result;
use crate::fmt;
use crate::intpoly::{self, IntPoly};
use crate::limits::{schrijver_holds, tree_moment_agreement};
use crate::polycore::{balanced_sums, check_identity, matching_polynomial_with, poly_without, Identity, Strategy};
use crate::spectra::{heilmann_lieb_check, zero_estimation_gamma_bound};

/// Largest witness list kept for a failing check.
const MAX_FAILURE_WITNESSES: usize = 16;
/// Failures this close to the allowance are re-evaluated at tighter tolerance.
const RETRY_BAND: f64 = 1e-9;
/// Vertex count up to which the vertex-deleted polynomials are compared in preflight.
const PREFLIGHT_BOUND: usize = 64;

pub(super) enum Outcome {
    Skip(String),
    Done { failed: bool, witnesses: Vec<Witness>, notes: Vec<String> },
}

impl Outcome {
    pub(super) fn into_report(self, id: CheckId, label: &str) -> CheckReport {
        let (verdict, witnesses, notes) = match self {
            Outcome::Skip(reason) => (Verdict::Skip, Vec::new(), vec![reason]),
            Outcome::Done { failed: true, witnesses, notes } => (Verdict::Fail, witnesses, notes),
            Outcome::Done { failed: false, witnesses, notes } => (Verdict::Pass, witnesses, notes),
        };
        CheckReport { check_id: id, graph_label: label.to_string(), verdict, witnesses, notes }
    }
}

/// Keeps the tightest passing witness and every failing one.
#[derive(Default)]
struct Tally {
    worst: Option<Witness>,
    failures: Vec<Witness>,
    notes: Vec<String>,
    count: usize,
}

impl Tally {
    fn record(&mut self, point: String, lhs: String, rhs: String, margin: f64, ok: bool) {
        self.count += 1;
        let margin = match (ok, margin < 0.0 || margin.is_nan()) {
            (false, true) => margin,
            (false, false) => -f64::MIN_POSITIVE,
            (true, _) => margin,
        };
        let w = Witness { point, lhs, rhs, margin };
        if !ok {
            if self.failures.len() < MAX_FAILURE_WITNESSES {
                self.failures.push(w);
            }
        } else if self.worst.as_ref().is_none_or(|x| w.margin < x.margin) {
            self.worst = Some(w);
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(mut self) -> Outcome {
        self.notes.insert(0, format!("{} points evaluated", self.count));
        let failed = !self.failures.is_empty();
        let witnesses = if failed { self.failures } else { self.worst.into_iter().collect() };
        Outcome::Done { failed, witnesses, notes: self.notes }
    }
}

macro_rules! require {
    ($e:expr) => {
        match $e {
            Ok(x) => x,
            Err(reason) => return Ok(Outcome::Skip(reason)),
        }
    };
}

type Hyp<T> = std::result::Result<T, String>;

fn regular(ctx: &GraphContext) -> Hyp<usize> {
    ctx.graph.regular_degree().ok_or_else(|| "hypothesis: regular graph".to_string())
}

fn regular_bipartite(ctx: &GraphContext) -> Hyp<usize> {
    let d = regular(ctx)?;
    if !ctx.graph.is_bipartite() {
        return Err("hypothesis: bipartite graph".into());
    }
    Ok(d)
}

fn transitive_regular_bipartite(ctx: &GraphContext) -> Result<Hyp<usize>> {
    let d = match regular_bipartite(ctx) {
        Ok(d) => d,
        Err(e) => return Ok(Err(e)),
    };
    let s = ctx.transitivity()?;
    if !s.holds() {
        return Ok(Err(format!("hypothesis: vertex-transitive (status {s:?})")));
    }
    Ok(Ok(d))
}

fn perfect(ctx: &GraphContext) -> Hyp<BigUint> {
    ctx.poly
        .perfect_matchings()
        .cloned()
        .ok_or_else(|| "hypothesis: perfect matching".to_string())
}

fn rat(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn big(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact activities `j/16` for `j = 0..=64`, then `2^j` for `j = 3..=12`.
fn t_grid() -> Vec<BigRational> {
    let mut out: Vec<BigRational> = (0..=64).map(|j| BigRational::new(BigInt::from(j), BigInt::from(16))).collect();
    out.extend((3..=12).map(|j| rat(1 << j)));
    out
}

/// Exact densities `j/64`, `j = 1..=63`.
fn p_grid_exact() -> Vec<BigRational> {
    (1..64).map(|j| BigRational::new(BigInt::from(j), BigInt::from(64))).collect()
}

fn poly_string(p: &IntPoly) -> String {
    format!("[{}]", p.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

pub(super) fn dispatch(id: CheckId, ctx: &GraphContext, params: &CheckParams) -> Result<Outcome> {
    match id {
        CheckId::Schrijver => schrijver(ctx),
        CheckId::Gurvits => gurvits(ctx, params),
        CheckId::ZeroEstimation => zero_estimation(ctx),
        CheckId::Ratio => ratio(ctx, false),
        CheckId::Krs => ratio(ctx, true),
        CheckId::StabilityMonotone => stability_monotone(ctx, params),
        CheckId::StabilityCycle => stability_cycle(ctx, params),
        CheckId::IneqA => ineq_a(ctx),
        CheckId::IneqB => ineq_b(ctx),
        CheckId::IneqC => ineq_c(ctx),
        CheckId::Balanced => balanced(ctx),
        CheckId::AsympA => asymp_a(ctx, params),
        CheckId::AsympB => asymp_b(ctx),
        CheckId::AsympD => asymp_d(ctx, params),
        CheckId::AsympE => asymp_e(ctx, params),
        CheckId::VtSlice => vt_slice(ctx),
        CheckId::Identities => identities(ctx),
        CheckId::HeilmannLieb => heilmann_lieb(ctx),
        CheckId::TreeDominance => tree_dominance(ctx),
        CheckId::Trivial => trivial(ctx),
        CheckId::MomentLocality => moment_locality(ctx, params),
    }
}

fn schrijver(ctx: &GraphContext) -> Result<Outcome> {
    let d = require!(regular_bipartite(ctx));
    let pm = require!(perfect(ctx));
    let n = ctx.graph.vertex_count() / 2;
    let base = if d == 1 {
        BigRational::one()
    } else {
        BigRational::new(BigInt::from(d - 1).pow(d as u32 - 1), BigInt::from(d).pow(d as u32 - 2))
    };
    let rhs = (0..n).fold(BigRational::one(), |acc, _| acc * &base);
    let ok = schrijver_holds(&pm, d, n);
    let margin = ln_big(&pm) - n as f64 * f(&base).ln();
    let mut t = Tally::default();
    t.record(format!("n={n}"), pm.to_string(), fmt::rational(&rhs), margin, ok);
    Ok(t.finish())
}

/// Grid evaluation of `lhs(p) >= rhs(p) - eps`, re-evaluating near-misses at `retry_tol`.
fn grid_check(
    tally: &mut Tally,
    params: &CheckParams,
    points: &[f64],
    eval: impl Fn(f64, f64) -> Result<(f64, f64)>,
) -> Result<()> {
    let mut retried = 0;
    for &p in points {
        let (mut lhs, mut rhs) = eval(p, params.tol)?;
        let mut margin = lhs - rhs;
        if margin < -params.eps && margin >= -params.eps - RETRY_BAND {
            retried += 1;
            (lhs, rhs) = eval(p, params.retry_tol)?;
            margin = lhs - rhs;
        }
        tally.record(format!("p={}", fmt::float(p)), fmt::float(lhs), fmt::float(rhs), margin, margin >= -params.eps);
    }
    if retried > 0 {
        tally.note(format!("{retried} near-zero failures re-evaluated at tolerance {}", params.retry_tol));
    }
    Ok(())
}

fn gap_at(ctx: &GraphContext, d: usize, p: f64, tol: f64) -> Result<f64> {
    Ok(ctx.entropy()?.lambda(p, tol)?.value - gurvits_bound(d, p)?)
}

fn gurvits(ctx: &GraphContext, params: &CheckParams) -> Result<Outcome> {
    let d = require!(regular_bipartite(ctx));
    let mut t = Tally::default();
    t.note(format!("grid {} points in [{}, {}]", params.grid_points, params.grid_lo, params.grid_hi));
    grid_check(&mut t, params, &params.p_grid(), |p, tol| {
        Ok((ctx.entropy()?.lambda(p, tol)?.value, gurvits_bound(d, p)?))
    })?;
    Ok(t.finish())
}

fn zero_estimation(ctx: &GraphContext) -> Result<Outcome> {
    let d = require!(transitive_regular_bipartite(ctx)?);
    if d < 2 {
        return Ok(Outcome::Skip("hypothesis: degree at least 2".into()));
    }
    let s = ctx.spectrum()?;
    let v = ctx.graph.vertex_count();
    let mut t = Tally::default();
    for k in 1..=s.root_count() {
        let idx = s.index_of(k).expect("k is within the root count");
        let bound = zero_estimation_gamma_bound(d, k, v);
        let ok = s.compare_root(idx, &bound)? != Ordering::Less;
        let e = &s.enclosures()[idx];
        let margin = (e.midpoint() - f(&bound)).max(if ok { 0.0 } else { f64::NEG_INFINITY });
        let lhs = format!("[{}, {}]", fmt::rational(&e.lo), fmt::rational(&e.hi));
        t.record(format!("k={k}"), lhs, fmt::rational(&bound), margin, ok);
    }
    Ok(t.finish())
}

/// `m_{n-1}/m_n <= (2/d) n^2`, or the KRS bound `n^2` (`4n^3` off bipartite graphs).
fn ratio(ctx: &GraphContext, krs: bool) -> Result<Outcome> {
    let d = require!(regular(ctx));
    let pm = require!(perfect(ctx));
    let s = ctx.transitivity()?;
    if !s.holds() {
        return Ok(Outcome::Skip(format!("hypothesis: vertex-transitive (status {s:?})")));
    }
    let bipartite = ctx.graph.is_bipartite();
    if !krs && !bipartite {
        return Ok(Outcome::Skip("hypothesis: bipartite graph".into()));
    }
    let n = ctx.graph.vertex_count() / 2;
    let value = big(&ctx.poly.coeff(n - 1)) / big(&pm);
    let bound = match (krs, bipartite) {
        (false, _) => rat(2 * n * n) / rat(d),
        (true, true) => rat(n * n),
        (true, false) => rat(4 * n * n * n),
    };
    let mut t = Tally::default();
    t.record(
        format!("n={n}"),
        fmt::rational(&value),
        fmt::rational(&bound),
        f(&bound) - f(&value),
        value <= bound,
    );
    Ok(t.finish())
}

fn stability_monotone(ctx: &GraphContext, params: &CheckParams) -> Result<Outcome> {
    let d = require!(transitive_regular_bipartite(ctx)?);
    let grid = params.p_grid();
    let mut t = Tally::default();
    t.note(format!("g(p_(i+1)) >= g(p_i) - {} on {} points", params.eps, grid.len()));
    let mut prev = (0.0, 0.0);
    let mut retried = 0;
    for &p in &grid {
        let mut g = gap_at(ctx, d, p, params.tol)?;
        let mut margin = g - prev.1;
        if margin < -params.eps && margin >= -params.eps - RETRY_BAND {
            retried += 1;
            g = gap_at(ctx, d, p, params.retry_tol)?;
            let before = if prev.0 > 0.0 { gap_at(ctx, d, prev.0, params.retry_tol)? } else { 0.0 };
            margin = g - before;
        }
        t.record(
            format!("p={}", fmt::float(p)),
            fmt::float(g),
            fmt::float(prev.1),
            margin,
            margin >= -params.eps,
        );
        prev = (p, g);
    }
    if retried > 0 {
        t.note(format!("{retried} near-zero failures re-evaluated at tolerance {}", params.retry_tol));
    }
    Ok(t.finish())
}

fn stability_cycle(ctx: &GraphContext, params: &CheckParams) -> Result<Outcome> {
    let d = require!(transitive_regular_bipartite(ctx)?);
    let Some(l) = params.cycle_length.or_else(|| ctx.graph.girth()) else {
        return Ok(Outcome::Skip("hypothesis: the graph has a cycle".into()));
    };
    if d < 2 || l < 4 || l % 2 == 1 {
        return Ok(Outcome::Skip(format!("hypothesis: d >= 2 and an even cycle length >= 4, got d = {d}, l = {l}")));
    }
    let mut t = Tally::default();
    t.note(format!("cycle length {l}"));
    grid_check(&mut t, params, &params.p_grid(), |p, tol| {
        Ok((gap_at(ctx, d, p, tol)?, cycle_gap_lower(d, l, p)?))
    })?;
    // the exact intermediate step d r / 2 >= (t / (1+dt)^2)^l
    for tv in t_grid().into_iter().skip(1) {
        let c = gap_certificate_with(&ctx.graph, &ctx.poly, &tv, Some(l))?;
        let cb = c.cycle.expect("cycle length supplied");
        t.record(
            format!("t={}", fmt::rational(&tv)),
            fmt::rational(&cb.lhs),
            fmt::rational(&cb.rhs),
            f(&cb.lhs) - f(&cb.rhs),
            cb.holds,
        );
    }
    Ok(t.finish())
}

fn ineq_a(ctx: &GraphContext) -> Result<Outcome> {
    let pm = require!(perfect(ctx));
    let n = ctx.graph.vertex_count() / 2;
    // C(G) = (2/v) sum 1/gamma_i = (2/v) m_{n-1} / m_n
    let c = big(&ctx.poly.coeff(n - 1)) / big(&pm) / rat(n);
    let mut t = Tally::default();
    let (lo, hi) = ctx.spectrum()?.inverse_sum_enclosure();
    if !(lo <= c && c <= hi) {
        t.record("C(G)".into(), fmt::rational(&c), format!("[{}, {}]", fmt::rational(&lo), fmt::rational(&hi)), -1.0, false);
    }
    let one = BigRational::one();
    let mut prev = BigRational::zero();
    for tv in t_grid() {
        let h = &tv * (&one - density_p(&ctx.poly, &tv)?);
        t.record(
            format!("t={} monotone", fmt::rational(&tv)),
            fmt::rational(&h),
            fmt::rational(&prev),
            f(&h) - f(&prev),
            h >= prev,
        );
        t.record(
            format!("t={} bounded", fmt::rational(&tv)),
            fmt::rational(&h),
            fmt::rational(&c),
            f(&c) - f(&h),
            h <= c,
        );
        prev = h;
    }
    Ok(t.finish())
}

fn ineq_b(ctx: &GraphContext) -> Result<Outcome> {
    let d = require!(regular(ctx));
    let edge_transitive = ctx.edge_transitivity()?.holds();
    let mut t = Tally::default();
    if edge_transitive {
        t.note("edge-transitive: bound dt/(1+dt)");
    }
    let one = BigRational::one();
    let dr = rat(d);
    for tv in t_grid() {
        let p = density_p(&ctx.poly, &tv)?;
        let bound = if edge_transitive { &dr * &tv / (&one + &dr * &tv) } else { &dr * &tv / (&one + &tv) };
        t.record(format!("t={}", fmt::rational(&tv)), fmt::rational(&p), fmt::rational(&bound), f(&bound) - f(&p), p <= bound);
    }
    Ok(t.finish())
}

fn ineq_c(ctx: &GraphContext) -> Result<Outcome> {
    let d = require!(transitive_regular_bipartite(ctx)?);
    if d < 2 {
        return Ok(Outcome::Skip("hypothesis: degree at least 2".into()));
    }
    let mut t = Tally::default();
    let one = BigRational::one();
    let ceiling = rat(d - 1) / rat(d * d);
    for tv in t_grid() {
        let c = gap_certificate_with(&ctx.graph, &ctx.poly, &tv, None)?;
        t.record(format!("t={} r", fmt::rational(&tv)), fmt::rational(&c.r), "0/1".into(), f(&c.r), c.r_nonnegative);
        let w = &one - &c.p;
        let bound = &ceiling / (&w * &w);
        t.record(
            format!("t={} ceiling", fmt::rational(&tv)),
            fmt::rational(&tv),
            fmt::rational(&bound),
            f(&bound) - f(&tv),
            tv <= bound,
        );
    }
    Ok(t.finish())
}

fn balanced(ctx: &GraphContext) -> Result<Outcome> {
    let Some(b) = ctx.graph.bipartition() else {
        return Ok(Outcome::Skip("hypothesis: bipartite graph".into()));
    };
    if !b.is_balanced() {
        return Ok(Outcome::Skip("hypothesis: balanced bipartition".into()));
    }
    let (a, bb) = balanced_sums(&ctx.graph)?;
    let mut t = Tally::default();
    let ok = a == bb;
    t.record("coefficients".into(), poly_string(&a), poly_string(&bb), if ok { 0.0 } else { -1.0 }, ok);
    Ok(t.finish())
}

fn asymp_a(ctx: &GraphContext, params: &CheckParams) -> Result<Outcome> {
    let doubled = ctx.graph.disjoint_copies(2)?;
    let m2 = intpoly::from_unsigned(matching_polynomial_with(&doubled, Strategy::Auto, &params.poly)?.coeffs());
    let m = intpoly::from_unsigned(ctx.poly.coeffs());
    let square = intpoly::mul(&m, &m);
    let mut t = Tally::default();
    t.note("M(2G) = M(G)^2, so p, F and lambda coincide for G and 2G");
    let ok = m2 == square;
    t.record("coefficients".into(), poly_string(&m2), poly_string(&square), if ok { 0.0 } else { -1.0 }, ok);
    Ok(t.finish())
}

/// Central differences of `lambda` against `-ln t(p) / 2`.
fn asymp_b(ctx: &GraphContext) -> Result<Outcome> {
    const H: f64 = 1e-4;
    const ALLOWANCE: f64 = 1e-5;
    const TOL: f64 = 1e-14;
    let e = ctx.entropy()?;
    let p_star = e.p_star();
    if p_star == 0.0 {
        return Ok(Outcome::Skip("hypothesis: at least one edge".into()));
    }
    let mut t = Tally::default();
    t.note(format!("step {H}, allowance {ALLOWANCE}, 31 points in (0, p*)"));
    for j in 1..32 {
        let p = p_star * j as f64 / 32.0;
        let fd = (e.lambda(p + H, TOL)?.value - e.lambda(p - H, TOL)?.value) / (2.0 * H);
        let exact = -0.5 * e.invert_t(p, TOL)?.ln();
        let margin = ALLOWANCE - (fd - exact).abs();
        t.record(format!("p={}", fmt::float(p)), fmt::float(fd), fmt::float(exact), margin, margin >= 0.0);
    }
    Ok(t.finish())
}

fn asymp_d(ctx: &GraphContext, params: &CheckParams) -> Result<Outcome> {
    let e = ctx.entropy()?;
    let v = ctx.graph.vertex_count() as f64;
    let nu = ctx.poly.matching_number();
    let bound = v.ln() / v;
    let mut t = Tally::default();
    for k in 0..=nu {
        let reference = ln_big(&ctx.poly.coeff(k)) / v;
        let value = if k == nu {
            ln_big(ctx.poly.top()) / v
        } else {
            e.lambda(2.0 * k as f64 / v, params.tol)?.value
        };
        let diff = (value - reference).abs();
        t.record(format!("k={k}"), fmt::float(diff), fmt::float(bound), bound - diff, diff <= bound + params.eps);
    }
    Ok(t.finish())
}

/// `lambda(p* - h)` approaches `ln m_nu / v` as `h` shrinks.
fn asymp_e(ctx: &GraphContext, params: &CheckParams) -> Result<Outcome> {
    const FINAL_ALLOWANCE: f64 = 1e-3;
    let e = ctx.entropy()?;
    let p_star = e.p_star();
    if p_star == 0.0 {
        return Ok(Outcome::Skip("hypothesis: at least one edge".into()));
    }
    let target = ln_big(ctx.poly.top()) / ctx.graph.vertex_count() as f64;
    let mut t = Tally::default();
    t.note(format!("differences must shrink with h and end below {FINAL_ALLOWANCE}"));
    let mut prev = f64::INFINITY;
    let steps = [1e-2, 1e-3, 1e-4, 1e-5];
    for (i, h) in steps.iter().enumerate() {
        let value = e.lambda(p_star - h * p_star, params.retry_tol.max(1e-14))?.value;
        let diff = (value - target).abs();
        let limit = if i + 1 == steps.len() { prev.min(FINAL_ALLOWANCE) } else { prev };
        t.record(format!("h={}", fmt::float(*h)), fmt::float(diff), fmt::float(limit), limit - diff, diff <= limit + params.eps);
        prev = diff;
    }
    Ok(t.finish())
}

fn vertex_deleted_tops(ctx: &GraphContext) -> Result<Vec<BigUint>> {
    (0..ctx.graph.vertex_count())
        .map(|u| {
            let p = poly_without(&ctx.graph, &[u])?;
            Ok(p.last().and_then(|c| c.to_biguint()).unwrap_or_default())
        })
        .collect()
}

pub(super) fn vertex_deleted_polys_equal(ctx: &GraphContext) -> Result<bool> {
    if ctx.graph.vertex_count() > PREFLIGHT_BOUND {
        return Ok(true);
    }
    let first = poly_without(&ctx.graph, &[0])?;
    for u in 1..ctx.graph.vertex_count() {
        if poly_without(&ctx.graph, &[u])? != first {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m_{n-1}(G-u) = m_{n-1}(G) / n` for every vertex `u`.
fn vt_slice(ctx: &GraphContext) -> Result<Outcome> {
    require!(perfect(ctx));
    let s = ctx.transitivity()?;
    if !s.holds() {
        return Ok(Outcome::Skip(format!("hypothesis: vertex-transitive (status {s:?})")));
    }
    let n = ctx.graph.vertex_count() / 2;
    let whole = ctx.poly.coeff(n - 1);
    let target = big(&whole) / rat(n);
    let mut t = Tally::default();
    for (u, top) in vertex_deleted_tops(ctx)?.into_iter().enumerate() {
        let ok = big(&top) == target;
        t.record(format!("u={u}"), top.to_string(), fmt::rational(&target), if ok { 0.0 } else { -1.0 }, ok);
    }
    Ok(t.finish())
}

fn identities(ctx: &GraphContext) -> Result<Outcome> {
    let mut t = Tally::default();
    for which in [Identity::A, Identity::B] {
        let r = check_identity(&ctx.graph, which, None)?;
        t.record(
            format!("{which:?}"),
            poly_string(&r.residual),
            "[]".into(),
            if r.holds { 0.0 } else { -1.0 },
            r.holds,
        );
    }
    let mut oracle = 0;
    for &(u, v) in ctx.graph.edges() {
        let r = check_identity(&ctx.graph, Identity::C, Some((u, v)))?;
        if r.path_oracle_matches.is_some() {
            oracle += 1;
        }
        let min = r.residual.iter().min().cloned().unwrap_or_default();
        let margin = if r.holds { min.to_f64().unwrap_or(0.0).max(0.0) } else { -1.0 };
        t.record(format!("C({u},{v})"), poly_string(&r.residual), "path expansion".into(), margin, r.holds);
        if ctx.graph.is_bipartite() && r.residual.iter().any(Signed::is_negative) {
            t.note(format!("negative residual coefficient at edge ({u}, {v})"));
        }
    }
    if oracle > 0 {
        t.note(format!("{oracle} residuals compared with the explicit path expansion"));
    }
    Ok(t.finish())
}

fn heilmann_lieb(ctx: &GraphContext) -> Result<Outcome> {
    let big_d = ctx.graph.max_degree();
    if big_d < 2 {
        return Ok(Outcome::Skip("hypothesis: maximum degree at least 2".into()));
    }
    let s = ctx.spectrum()?;
    let ok = heilmann_lieb_check(s, big_d)?;
    let top = s.enclosures().last().expect("graphs with a vertex of degree 2 have edges");
    let bound = 4 * (big_d - 1);
    let mut t = Tally::default();
    t.record(
        format!("D={big_d}"),
        format!("[{}, {}]", fmt::rational(&top.lo), fmt::rational(&top.hi)),
        bound.to_string(),
        bound as f64 - top.midpoint(),
        ok,
    );
    Ok(t.finish())
}

fn tree_dominance(ctx: &GraphContext) -> Result<Outcome> {
    let d = require!(transitive_regular_bipartite(ctx)?);
    let mut t = Tally::default();
    for p in p_grid_exact() {
        // t(G,p) <= t(T_d,p)  <=>  p(G, t(T_d,p)) >= p
        let tt = tree_t_exact(d, &p)?;
        let pg = density_p(&ctx.poly, &tt)?;
        t.record(format!("p={}", fmt::rational(&p)), fmt::rational(&pg), fmt::rational(&p), f(&pg) - f(&p), pg >= p);
    }
    for tv in t_grid() {
        let pg = f(&density_p(&ctx.poly, &tv)?);
        let pt = tree_p(d, f(&tv))?;
        t.record(format!("t={}", fmt::rational(&tv)), fmt::float(pg), fmt::float(pt), pg - pt, pg >= pt - 1e-12);
    }
    Ok(t.finish())
}

fn trivial(ctx: &GraphContext) -> Result<Outcome> {
    require!(perfect(ctx));
    let r = check_trivial(&ctx.poly, ctx.spectrum()?)?;
    let n = (ctx.graph.vertex_count() / 2) as f64;
    let inv = 1.0 / f(&r.s);
    let (lo, hi) = (f(&r.gamma1_lo), f(&r.gamma1_hi));
    let mut t = Tally::default();
    t.record("gamma_1 <= 1/s".into(), fmt::float(hi), fmt::float(inv), inv - hi, r.lower_holds);
    t.record("1/s <= n gamma_1".into(), fmt::float(inv), fmt::float(n * lo), n * lo - inv, r.upper_holds);
    t.record(
        "s = (1/n) sum 1/gamma".into(),
        fmt::rational(&r.s),
        "enclosure".into(),
        if r.identity_holds { 0.0 } else { -1.0 },
        r.identity_holds,
    );
    Ok(t.finish())
}

fn moment_locality(ctx: &GraphContext, params: &CheckParams) -> Result<Outcome> {
    require!(regular(ctx));
    if ctx.graph.girth().is_none() {
        return Ok(Outcome::Skip("hypothesis: the graph has a cycle".into()));
    }
    let mut t = Tally::default();
    for (order, ok) in tree_moment_agreement(&ctx.graph, &ctx.poly, params.max_moment_order)? {
        let m = crate::spectra::measure_moments(&ctx.poly, order);
        t.record(format!("order={order}"), fmt::rational(&m), "tree walks".into(), if ok { 0.0 } else { -1.0 }, ok);
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate;

    fn run(id: CheckId, family: &str) -> CheckReport {
        let params = CheckParams::default();
        let ctx = GraphContext::new(generate(&family.parse().unwrap()).unwrap(), &params).unwrap();
        super::super::run_check(id, &ctx, &params).unwrap()
    }

    #[test]
    fn schrijver_on_k33() {
        let r = run(CheckId::Schrijver, "k33");
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.witnesses[0].lhs, "6");
        assert_eq!(r.witnesses[0].rhs, "64/27");
    }

    #[test]
    fn ratio_on_c4() {
        let r = run(CheckId::Ratio, "c4");
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!((r.witnesses[0].lhs.as_str(), r.witnesses[0].rhs.as_str()), ("2/1", "4/1"));
    }

    #[test]
    fn zero_estimation_on_cube() {
        let r = run(CheckId::ZeroEstimation, "q3");
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.notes[0].starts_with("4 points"));
    }

    #[test]
    fn hypotheses_gate_checks() {
        assert_eq!(run(CheckId::IneqC, "c5").verdict, Verdict::Skip);
        assert_eq!(run(CheckId::ZeroEstimation, "rrb:8:3:1").verdict, Verdict::Skip);
        assert_eq!(run(CheckId::Schrijver, "p4").verdict, Verdict::Skip);
        assert_eq!(run(CheckId::IneqC, "kdd:1").verdict, Verdict::Skip);
    }

    #[test]
    fn failures_carry_negative_margins() {
        let mut t = Tally::default();
        t.record("x".into(), "1".into(), "2".into(), 0.5, false);
        t.record("y".into(), "1".into(), "0".into(), 1.0, true);
        let Outcome::Done { failed, witnesses, .. } = t.finish() else { panic!() };
        assert!(failed);
        assert_eq!(witnesses.len(), 1);
        assert!(witnesses[0].margin < 0.0);
    }

    #[test]
    fn exact_grids() {
        let t = t_grid();
        assert_eq!(t.len(), 75);
        assert_eq!(t.last().unwrap(), &rat(4096));
        assert_eq!(p_grid_exact().len(), 63);
    }
}
