//! Runs every named inequality and identity as a check on concrete graphs.

mod checks;

use std::fmt::Display;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::entropy::Entropy;
use crate::error::{Error, Result};
use crate::graphs::{
    edge_transitivity_status, generate, transitivity_status, FamilySpec, Graph, Symmetry,
    DEFAULT_TRANSITIVITY_BOUND,
};
use crate::polycore::{matching_polynomial_with, MatchPoly, PolyConfig, Strategy};
use crate::spectra::{isolate_gammas, GammaSpectrum, DEFAULT_PRECISION_BITS};

macro_rules! check_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum CheckId { $($variant),* }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(CheckId::$variant => $name),* }
            }
        }

        impl FromStr for CheckId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s { $($name => Ok(CheckId::$variant),)* _ => Err(Error::UnknownCheck(s.to_string())) }
            }
        }
    };
}

check_ids! {
    Schrijver => "schrijver",
    Gurvits => "gurvits",
    ZeroEstimation => "zero_estimation",
    Ratio => "ratio",
    Krs => "krs",
    StabilityMonotone => "stability_monotone",
    StabilityCycle => "stability_cycle",
    IneqA => "ineq_a",
    IneqB => "ineq_b",
    IneqC => "ineq_c",
    Balanced => "balanced",
    AsympA => "asymp_a",
    AsympB => "asymp_b",
    AsympD => "asymp_d",
    AsympE => "asymp_e",
    VtSlice => "vt_slice",
    Identities => "identities",
    HeilmannLieb => "heilmann_lieb",
    TreeDominance => "tree_dominance",
    Trivial => "trivial",
    MomentLocality => "moment_locality",
}

impl Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for CheckId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Parses `all` or a comma-separated list of check names.
pub fn parse_checks(s: &str) -> Result<Vec<CheckId>> {
    if s.trim() == "all" {
        return Ok(CheckId::ALL.to_vec());
    }
    s.split(',').map(|x| x.trim().parse()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

fn float_string<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::fmt::float(*x))
}

/// One evaluated instance of an inequality `lhs <= rhs` (or `>=`); a negative
/// margin means it is violated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub point: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(serialize_with = "float_string")]
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_id: CheckId,
    pub graph_label: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckParams {
    pub grid_points: usize,
    pub grid_lo: f64,
    pub grid_hi: f64,
    /// Allowance for grid-based comparisons.
    pub eps: f64,
    pub tol: f64,
    /// Inversion tolerance for the re-evaluation of near-zero failures.
    pub retry_tol: f64,
    /// Cycle length for the stability bound; the girth when absent.
    pub cycle_length: Option<usize>,
    pub transitivity_bound: usize,
    pub max_moment_order: usize,
    pub poly: PolyConfig,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            grid_points: 512,
            grid_lo: 1e-4,
            grid_hi: 1.0 - 1e-4,
            eps: 1e-9,
            tol: 1e-12,
            retry_tol: 1e-15,
            cycle_length: None,
            transitivity_bound: DEFAULT_TRANSITIVITY_BOUND,
            max_moment_order: 12,
            poly: PolyConfig::default(),
        }
    }
}

impl CheckParams {
    pub fn p_grid(&self) -> Vec<f64> {
        let n = self.grid_points.max(2);
        (0..n)
            .map(|i| self.grid_lo + (self.grid_hi - self.grid_lo) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// A graph with its lazily computed polynomial, spectrum and symmetry data.
pub struct GraphContext {
    graph: Graph,
    poly: MatchPoly,
    transitivity_bound: usize,
    spectrum: OnceLock<std::result::Result<GammaSpectrum, String>>,
    entropy: OnceLock<Entropy>,
    transitive: OnceLock<std::result::Result<Symmetry, String>>,
    edge_transitive: OnceLock<std::result::Result<Symmetry, String>>,
}

impl GraphContext {
    pub fn new(graph: Graph, params: &CheckParams) -> Result<Self> {
        let poly = matching_polynomial_with(&graph, Strategy::Auto, &params.poly)?;
        Ok(GraphContext {
            graph,
            poly,
            transitivity_bound: params.transitivity_bound,
            spectrum: OnceLock::new(),
            entropy: OnceLock::new(),
            transitive: OnceLock::new(),
            edge_transitive: OnceLock::new(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn poly(&self) -> &MatchPoly {
        &self.poly
    }

    pub fn spectrum(&self) -> Result<&GammaSpectrum> {
        self.spectrum
            .get_or_init(|| isolate_gammas(&self.poly, DEFAULT_PRECISION_BITS).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Inconsistent(e.clone()))
    }

    pub fn entropy(&self) -> Result<&Entropy> {
        if let Some(e) = self.entropy.get() {
            return Ok(e);
        }
        let e = if self.poly.matching_number() > 0 {
            Entropy::with_spectrum(self.spectrum()?)
        } else {
            Entropy::new(self.poly.clone())
        };
        Ok(self.entropy.get_or_init(|| e))
    }

    pub fn transitivity(&self) -> Result<Symmetry> {
        self.transitive
            .get_or_init(|| transitivity_status(&self.graph, self.transitivity_bound).map_err(|e| e.to_string()))
            .clone()
            .map_err(Error::Inconsistent)
    }

    pub fn edge_transitivity(&self) -> Result<Symmetry> {
        self.edge_transitive
            .get_or_init(|| edge_transitivity_status(&self.graph, self.transitivity_bound).map_err(|e| e.to_string()))
            .clone()
            .map_err(Error::Inconsistent)
    }
}

pub fn run_check(id: CheckId, ctx: &GraphContext, params: &CheckParams) -> Result<CheckReport> {
    let outcome = checks::dispatch(id, ctx, params)?;
    Ok(outcome.into_report(id, ctx.graph.label()))
}

/// Graphs of the default corpus.
pub const DEFAULT_CORPUS: &[&str] = &["c4", "c8", "kdd:2", "k33", "kdd:4", "q3", "q4", "heawood", "t4x4", "t6x6"];

/// `default` or a comma-separated list of family specs.
pub fn parse_corpus(s: &str) -> Result<Vec<Graph>> {
    let names: Vec<&str> = if s.trim() == "default" {
        DEFAULT_CORPUS.to_vec()
    } else {
        s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
    };
    names.into_iter().map(|n| generate(&n.parse::<FamilySpec>()?)).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn json_lines(&self) -> String {
        self.reports.iter().map(|r| r.to_json_line() + "\n").collect()
    }
}

/// Runs `checks` on every graph. Graphs run concurrently; reports are
/// ordered by graph label, then check id.
pub fn run_corpus(corpus: &[Graph], checks: &[CheckId], params: &CheckParams) -> Result<CorpusReport> {
    if corpus.is_empty() {
        return Err(Error::Precondition("empty corpus".into()));
    }
    let per_graph: Vec<Result<Vec<CheckReport>>> = corpus
        .par_iter()
        .map(|g| {
            let ctx = GraphContext::new(g.clone(), params)?;
            preflight(&ctx)?;
            checks.iter().map(|&id| run_check(id, &ctx, params)).collect()
        })
        .collect();
    let mut reports = Vec::new();
    for r in per_graph {
        reports.extend(r?);
    }
    reports.sort_by(|a, b| (&a.graph_label, a.check_id).cmp(&(&b.graph_label, b.check_id)));
    let mut summary = Summary::default();
    for r in &reports {
        match r.verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail => summary.fail += 1,
            Verdict::Skip => summary.skip += 1,
        }
    }
    Ok(CorpusReport { reports, summary })
}

/// A graph declared transitive must at least have equal vertex-deleted polynomials.
fn preflight(ctx: &GraphContext) -> Result<()> {
    if ctx.graph.declared_transitive() && !checks::vertex_deleted_polys_equal(ctx)? {
        return Err(Error::Inconsistent(format!(
            "{} is declared vertex-transitive but its vertex-deleted polynomials differ",
            ctx.graph.label()
        )));
    }
    Ok(())
}
