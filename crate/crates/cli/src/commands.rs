use std::fs;
use std::path::{Path, PathBuf};

use matchkit::degenerate::{build_degenerate, check_trivial, degenerate_pm_formula, degenerate_s_lower_bound, edge_probability, s_value};
use matchkit::entropy::{curve_csv, federbush_from_prefix, Entropy};
use matchkit::graphs::{generate, FamilySpec, Graph, GraphJson};
use matchkit::limits::{errors_shrink, girth_entropy_gap, moment_convergence, torus_csv, torus_entropy_sequence};
use matchkit::polycore::{matching_counts_prefix, matching_polynomial_with, perfect_matching_count, PolyConfig, Strategy};
use matchkit::spectra::{isolate_gammas, measure_interval_mass, MatchingMeasure};
use matchkit::verify::{parse_checks, parse_corpus, run_corpus, CheckParams};
use matchkit::{fmt, Error, Result};
use serde_json::{json, Value};

use crate::{Command, GraphArgs, GraphFormat, LimitsKind, OutArgs};

/// Runs one subcommand; `Ok(false)` means a check failed.
pub fn run(cmd: Command) -> Result<bool> {
    let cfg = PolyConfig::from_env()?;
    match cmd {
        Command::Gen { graph, format, out } => {
            let g = load(&graph)?;
            let text = match format {
                GraphFormat::Json => json_line(&serde_json::to_value(g.to_json()).expect("graph JSON")),
                GraphFormat::Edges => g.to_edge_list(),
            };
            emit(&out, &text)?;
        }
        Command::Poly { graph, strategy, out } => {
            let g = load(&graph)?;
            let p = matching_polynomial_with(&g, strategy.into(), &cfg)?;
            emit(&out, &json_line(&serde_json::to_value(p.to_json()).expect("poly JSON")))?;
        }
        Command::Spectrum { graph, bits, measure_csv, mass, out } => {
            let g = load(&graph)?;
            let p = matching_polynomial_with(&g, Strategy::Auto, &cfg)?;
            let s = isolate_gammas(&p, bits)?;
            let (sum_ok, prod_ok) = s.vieta_check();
            let mut value = serde_json::to_value(s.to_json()).expect("spectrum JSON");
            value["vieta"] = json!({"sum": sum_ok, "product": prod_ok});
            let measure = MatchingMeasure::new(s);
            if let Some(x) = mass {
                let m = measure_interval_mass(&measure, x, g.regular_degree())?;
                value["interval_mass"] = json!({
                    "s": num(m.s),
                    "mass": fmt::rational(&m.mass),
                    "bound": m.bound.map(num),
                    "within_bound": m.within_bound,
                });
            }
            if let Some(path) = measure_csv {
                write_file(&path, &measure.to_csv())?;
            }
            emit(&out, &json_line(&value))?;
        }
        Command::Entropy { graph, p, t, curve, t_min, t_max, points, tol, out } => {
            let g = load(&graph)?;
            let e = Entropy::new(matching_polynomial_with(&g, Strategy::Auto, &cfg)?);
            let d = g.regular_degree();
            if curve {
                let d = d.ok_or_else(|| Error::Precondition("the curve needs a regular graph".into()))?;
                if !(t_min > 0.0 && t_max > t_min) || points < 2 {
                    return Err(Error::Precondition("need 0 < t_min < t_max and at least 2 points".into()));
                }
                let ratio = (t_max / t_min).ln() / (points - 1) as f64;
                let pts = (0..points)
                    .map(|i| e.point(t_min * (ratio * i as f64).exp(), d))
                    .collect::<Result<Vec<_>>>()?;
                emit(&out, &curve_csv(&pts))?;
            } else if let Some(p) = p {
                let l = e.lambda(p, tol)?;
                let value = json!({
                    "p": num(p),
                    "p_star": num(e.p_star()),
                    "lambda": num(l.value),
                    "t": l.t.map(num),
                    "beyond_p_star": l.beyond_p_star,
                });
                emit(&out, &json_line(&value))?;
            } else if let Some(t) = t {
                let mut value = json!({
                    "t": num(t),
                    "p": num(e.density(t)),
                    "F": num(e.free_energy(t)?),
                });
                if let Some(d) = d {
                    let pt = e.point(t, d)?;
                    value["lambda"] = num(pt.lambda);
                    value["gurvits"] = num(pt.gurvits);
                    value["gap"] = num(pt.gap);
                    value["q"] = num(pt.q);
                    value["r"] = num(pt.r);
                }
                emit(&out, &json_line(&value))?;
            } else {
                return Err(Error::Precondition("give one of --p, --t or --curve".into()));
            }
        }
        Command::Series { graph, order, max_order, out } => {
            let g = load(&graph)?;
            let d = g
                .regular_degree()
                .ok_or_else(|| Error::Precondition(format!("{} is not regular", g.label())))?;
            if order < 2 || order > max_order {
                return Err(Error::Precondition(format!("series order must lie in 2..={max_order}, got {order}")));
            }
            let prefix = matching_counts_prefix(&g, order, Strategy::Auto, &cfg)?;
            let s = federbush_from_prefix(g.vertex_count(), d, &prefix, order, max_order)?;
            emit(&out, &json_line(&serde_json::to_value(s.to_json()).expect("series JSON")))?;
        }
        Command::Verify { corpus, family, input, checks, grid, eps, tol, cycle_length, out } => {
            let graphs = match (corpus, family, input) {
                (Some(c), _, _) => parse_corpus(&c)?,
                (None, family, input) if family.is_some() || input.is_some() => vec![load(&GraphArgs { family, input })?],
                _ => parse_corpus("default")?,
            };
            let params = CheckParams { grid_points: grid, eps, tol, cycle_length, poly: cfg, ..CheckParams::default() };
            let report = run_corpus(&graphs, &parse_checks(&checks)?, &params)?;
            emit(&out, &report.json_lines())?;
            let s = report.summary;
            eprintln!("pass {} fail {} skip {}", s.pass, s.fail, s.skip);
            return Ok(report.all_passed());
        }
        Command::Limits { kind } => return limits(kind, &cfg),
        Command::Degenerate { graph, edge, emit_graph, out } => {
            let g = load(&graph)?;
            let e = parse_edge(&g, &edge)?;
            let star = build_degenerate(&g, e)?;
            if emit_graph {
                emit(&out, &json_line(&serde_json::to_value(star.to_json()).expect("graph JSON")))?;
                return Ok(true);
            }
            let d = g
                .regular_degree()
                .ok_or_else(|| Error::Precondition(format!("{} is not regular", g.label())))?;
            let p_e = edge_probability(&g, e, &cfg)?;
            let pm = perfect_matching_count(&star, &cfg)?;
            let formula = degenerate_pm_formula(&g, e, &cfg)?;
            let star_poly = matching_polynomial_with(&star, Strategy::Auto, &cfg)?;
            let s = s_value(&star_poly)?;
            let bound = degenerate_s_lower_bound(d, g.vertex_count() / 2, &p_e);
            let trivial = check_trivial(&star_poly, &isolate_gammas(&star_poly, matchkit::spectra::DEFAULT_PRECISION_BITS)?)?;
            let holds = pm == formula && s >= bound && trivial.holds();
            let value = json!({
                "source": g.label(),
                "edge": [e.0, e.1],
                "label": star.label(),
                "vertices": star.vertex_count(),
                "p_e": fmt::rational(&p_e),
                "perfect_matchings": pm.to_string(),
                "formula": formula.to_string(),
                "s": fmt::rational(&s),
                "s_lower_bound": fmt::rational(&bound),
                "trivial": trivial.holds(),
                "holds": holds,
            });
            emit(&out, &json_line(&value))?;
            return Ok(holds);
        }
    }
    Ok(true)
}

fn limits(kind: LimitsKind, cfg: &PolyConfig) -> Result<bool> {
    match kind {
        LimitsKind::Torus { sizes, out } => {
            let seq = torus_entropy_sequence(&sizes, cfg)?;
            emit(&out, &torus_csv(&seq))?;
            Ok(errors_shrink(&seq, 0.0))
        }
        LimitsKind::Moments { families, orders, out } => {
            let specs = families.iter().map(|s| s.parse::<FamilySpec>()).collect::<Result<Vec<_>>>()?;
            let table = moment_convergence(&specs, &orders, cfg)?;
            emit(&out, &table.to_csv())?;
            Ok(true)
        }
        LimitsKind::Girth { graph, out } => {
            let g = load(&graph)?;
            let d = g
                .regular_degree()
                .ok_or_else(|| Error::Precondition(format!("{} is not regular", g.label())))?;
            let gap = girth_entropy_gap(&g, d, cfg)?;
            let value = json!({
                "label": g.label(),
                "girth": gap.girth,
                "lambda1": num(gap.lambda1),
                "schrijver": num(gap.schrijver),
                "gap": num(gap.gap),
                "schrijver_exact": gap.schrijver_exact,
            });
            emit(&out, &json_line(&value))?;
            Ok(gap.schrijver_exact)
        }
    }
}

fn load(args: &GraphArgs) -> Result<Graph> {
    match (&args.family, &args.input) {
        (Some(f), _) => generate(&f.parse()?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let label = path.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned());
            if text.trim_start().starts_with('{') {
                let json: GraphJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                Graph::from_json(&json)
            } else {
                Graph::from_edge_list(&text, label)
            }
        }
        (None, None) => Err(Error::Precondition("give --family or --input".into())),
    }
}

/// `u,v`, or `u,auto` for the smallest neighbour of `u`.
fn parse_edge(g: &Graph, s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("edge must look like `u,v`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let u: usize = a.trim().parse().map_err(|_| bad())?;
    if u >= g.vertex_count() {
        return Err(Error::Precondition(format!("vertex {u} is out of range")));
    }
    let v = match b.trim() {
        "auto" => *g
            .neighbors(u)
            .first()
            .ok_or_else(|| Error::Precondition(format!("vertex {u} is isolated")))?,
        x => x.parse().map_err(|_| bad())?,
    };
    Ok((u, v))
}

/// Rounds to the fixed 12 significant digits before it becomes a JSON number.
fn num(x: f64) -> Value {
    fmt::float(x).parse::<f64>().ok().filter(|y| y.is_finite()).map_or(Value::Null, Value::from)
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values always serialize");
    s.push('\n');
    s
}

fn emit(out: &OutArgs, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", PathBuf::from(path).display())))
}
