use matchkit::graphs::generate;
use matchkit::verify::{parse_checks, parse_corpus, run_check, run_corpus, CheckId, CheckParams, GraphContext, Verdict};
use matchkit::Error;

#[test]
fn default_corpus_passes_every_check() {
    let corpus = parse_corpus("default").unwrap();
    let report = run_corpus(&corpus, CheckId::ALL, &CheckParams::default()).unwrap();
    assert_eq!(report.reports.len(), corpus.len() * CheckId::ALL.len());
    let failures: Vec<String> = report.reports.iter().filter(|r| r.verdict == Verdict::Fail).map(|r| r.to_json_line()).collect();
    assert!(failures.is_empty(), "{failures:#?}");
    // every skip names the hypothesis it lacks
    for r in report.reports.iter().filter(|r| r.verdict == Verdict::Skip) {
        assert!(r.notes.iter().any(|n| n.starts_with("hypothesis")), "{}", r.to_json_line());
    }
    assert!(report.all_passed());
}

#[test]
fn reports_are_deterministic() {
    let corpus = parse_corpus("c4,k33,q3").unwrap();
    let checks = parse_checks("gurvits,zero_estimation,identities").unwrap();
    let params = CheckParams::default();
    let a = run_corpus(&corpus, &checks, &params).unwrap().json_lines();
    let b = run_corpus(&corpus, &checks, &params).unwrap().json_lines();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 9);
}

#[test]
fn non_bipartite_graphs_skip_bipartite_checks() {
    let corpus = parse_corpus("c5,c4").unwrap();
    let report = run_corpus(&corpus, &[CheckId::IneqC, CheckId::Schrijver], &CheckParams::default()).unwrap();
    for r in &report.reports {
        let expected = if r.graph_label.contains('5') { Verdict::Skip } else { Verdict::Pass };
        assert_eq!(r.verdict, expected, "{}", r.to_json_line());
    }
    assert_eq!(report.summary.skip, 2);
}

#[test]
fn empty_corpus_and_unknown_checks_are_errors() {
    assert!(run_corpus(&[], CheckId::ALL, &CheckParams::default()).is_err());
    assert!(matches!(parse_checks("schrijver,frobnicate"), Err(Error::UnknownCheck(_))));
    assert_eq!(parse_checks("all").unwrap().len(), CheckId::ALL.len());
}

#[test]
fn names_round_trip() {
    for &id in CheckId::ALL {
        assert_eq!(id.name().parse::<CheckId>().unwrap(), id);
    }
}

#[test]
fn tight_allowance_reports_negative_margins() {
    // a stricter allowance than the grid resolution supports turns the
    // near-equality at small p into a reported failure
    let params = CheckParams { eps: -1e-3, ..CheckParams::default() };
    let ctx = GraphContext::new(generate(&"k33".parse().unwrap()).unwrap(), &params).unwrap();
    let r = run_check(CheckId::Gurvits, &ctx, &params).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert!(r.witnesses.iter().all(|w| w.margin < 0.0));
}
