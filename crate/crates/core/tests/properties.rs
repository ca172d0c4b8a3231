use matchkit::degenerate::vertex_probability_sums;
use matchkit::entropy::{density_p, federbush_series, tree_p, tree_t, Entropy};
use matchkit::fmt;
use matchkit::graphs::{FamilySpec, Graph};
use matchkit::polycore::{
    balanced_sums, brute_force_match_counts, check_identity, matching_polynomial, matching_polynomial_with, Identity, PolyConfig, Strategy as Method,
};
use matchkit::spectra::{isolate_gammas, measure_moments};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Simple graphs on up to `max_v` vertices, each edge kept with probability 1/2.
fn arb_graph(max_v: usize) -> impl Strategy<Value = Graph> {
    (2..=max_v).prop_flat_map(|v| {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
            Graph::new(v, &edges, "random").unwrap()
        })
    })
}

/// Bipartite graphs with sides of size `a` and `b`.
fn arb_bipartite(max_side: usize) -> impl Strategy<Value = Graph> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(a, b)| {
        proptest::collection::vec(any::<bool>(), a * b).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = (0..a * b).filter(|&i| keep[i]).map(|i| (i / b, a + i % b)).collect();
            Graph::new(a + b, &edges, "random-bipartite").unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strategies_agree_with_brute_force(g in arb_graph(9)) {
        let brute = brute_force_match_counts(&g).unwrap();
        for s in [Method::Elimination, Method::Profile, Method::Auto] {
            let p = matching_polynomial_with(&g, s, &PolyConfig::default()).unwrap();
            prop_assert_eq!(p.coeffs(), brute.coeffs());
        }
    }

    #[test]
    fn identities_a_b_hold(g in arb_graph(8)) {
        prop_assert!(check_identity(&g, Identity::A, None).unwrap().holds);
        prop_assert!(check_identity(&g, Identity::B, None).unwrap().holds);
    }

    #[test]
    fn identity_c_residual_nonnegative_on_bipartite(g in arb_bipartite(4).prop_filter("edges", |g| g.edge_count() > 0)) {
        for &(u, v) in g.edges() {
            let r = check_identity(&g, Identity::C, Some((u, v))).unwrap();
            prop_assert!(r.holds);
            prop_assert_eq!(r.nonnegative, Some(true));
        }
    }

    #[test]
    fn roots_count_and_vieta(g in arb_graph(9).prop_filter("edges", |g| g.edge_count() > 0)) {
        let p = matching_polynomial(&g, Method::Auto).unwrap();
        let s = isolate_gammas(&p, 40).unwrap();
        let total: usize = s.enclosures().iter().map(|e| e.multiplicity).sum();
        prop_assert_eq!(total, p.matching_number());
        prop_assert_eq!(s.vieta_check(), (true, true));
        for e in s.enclosures() {
            prop_assert!(e.lo <= e.hi);
        }
    }

    #[test]
    fn inversion_is_consistent(g in arb_graph(8).prop_filter("edges", |g| g.edge_count() > 0), frac in 0.01f64..0.99) {
        let p = matching_polynomial(&g, Method::Auto).unwrap();
        let e = Entropy::new(p);
        let target = frac * e.p_star();
        let t = e.invert_t(target, 1e-12).unwrap();
        prop_assert!((e.density(t) - target).abs() <= 1e-9 * target.max(1.0));
    }

    #[test]
    fn density_is_increasing(g in arb_graph(8).prop_filter("edges", |g| g.edge_count() > 0), a in 1i64..400, b in 1i64..400) {
        prop_assume!(a != b);
        let p = matching_polynomial(&g, Method::Auto).unwrap();
        let ta = BigRational::new(BigInt::from(a.min(b)), BigInt::from(16));
        let tb = BigRational::new(BigInt::from(a.max(b)), BigInt::from(16));
        prop_assert!(density_p(&p, &ta).unwrap() < density_p(&p, &tb).unwrap());
        prop_assert!(density_p(&p, &tb).unwrap() <= p.p_star());
    }

    #[test]
    fn balanced_lemma(g in arb_bipartite(4)) {
        let b = g.bipartition().unwrap();
        prop_assume!(b.is_balanced());
        let (l, r) = balanced_sums(&g).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn edge_probabilities_sum_to_one(g in arb_bipartite(4)) {
        let p = matching_polynomial(&g, Method::Auto).unwrap();
        prop_assume!(p.has_perfect_matching());
        for s in vertex_probability_sums(&g, &PolyConfig::default()).unwrap() {
            prop_assert!(s.is_one());
        }
    }

    #[test]
    fn odd_moments_vanish_and_second_is_edge_density(g in arb_graph(8).prop_filter("edges", |g| g.edge_count() > 0)) {
        let p = matching_polynomial(&g, Method::Auto).unwrap();
        prop_assert_eq!(measure_moments(&p, 3), BigRational::from_integer(0.into()));
        let expected = BigRational::new(BigInt::from(2 * g.edge_count()), BigInt::from(g.vertex_count()));
        prop_assert_eq!(measure_moments(&p, 2), expected);
    }

    #[test]
    fn tree_activity_round_trip(d in 2usize..8, p in 0.001f64..0.99) {
        let t = tree_t(d, p).unwrap();
        prop_assert!((tree_p(d, t).unwrap() - p).abs() < 1e-9);
    }

    #[test]
    fn rational_format_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = BigRational::new(BigInt::from(n), BigInt::from(d));
        prop_assert_eq!(fmt::parse_rational(&fmt::rational(&x)).unwrap(), x);
    }

    #[test]
    fn graph_formats_round_trip(g in arb_graph(9)) {
        let back = Graph::from_edge_list(&g.to_edge_list(), "random").unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        let json = Graph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(json.edges(), g.edges());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn b_is_a_minus_one(n in 2usize..7, d in 2usize..4, seed in 0u64..1000) {
        let spec = FamilySpec::RandomRegularBipartite { n: n.max(d), d, seed };
        let g = matchkit::graphs::generate(&spec).unwrap();
        let p = matching_polynomial(&g, Method::Auto).unwrap();
        let s = federbush_series(&p, d, 6).unwrap();
        for k in 2..=6 {
            prop_assert_eq!(s.b_k(k).unwrap(), &(s.a_k(k).unwrap() - BigRational::one()));
        }
        let girth = g.girth().unwrap();
        for k in (2..=6).filter(|&k| k < girth) {
            prop_assert!(s.b_k(k).unwrap().is_zero());
        }
    }
}
