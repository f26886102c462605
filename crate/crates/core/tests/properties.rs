use num_bigint::BigUint;
use num_traits::Pow;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use turan_lab::exponent::{certify, certify_dense_fraction, regularity_constants, replay};
use turan_lab::families::{density, spider_balanced_criterion, Family, Spider};
use turan_lab::search::{contains, naive_turan_oracle, turan_number, Pattern};
use turan_lab::{is_isomorphic, Graph, Rational};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let slots = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), slots).prop_map(move |bits| {
            let mut g = Graph::new(n).unwrap();
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            g
        })
    })
}

fn graph_and_perm(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn graph6_round_trip(g in graph_strategy(40)) {
        let text = g.to_graph6();
        prop_assert_eq!(Graph::from_graph6(&text).unwrap(), g.clone());
        prop_assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn relabelling_preserves_isomorphism((g, perm) in graph_and_perm(10)) {
        let h = g.relabel(&perm).unwrap();
        prop_assert!(is_isomorphic(&g, &h));
        prop_assert_eq!(h.edge_count(), g.edge_count());
    }

    #[test]
    fn adding_an_edge_breaks_isomorphism(g in graph_strategy(9)) {
        let n = g.order();
        if let Some((u, v)) = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).find(|&(u, v)| !g.has_edge(u, v)) {
            let mut h = g.clone();
            h.add_edge(u, v).unwrap();
            prop_assert!(!is_isomorphic(&g, &h));
        }
    }

    #[test]
    fn balancedness_criterion_matches_density(legs in proptest::collection::vec(1usize..=5, 2..=5)) {
        let spider = Spider::new(legs).unwrap();
        let report = density(&spider.rooted_at_leaves().unwrap()).unwrap();
        prop_assert_eq!(report.balanced, spider_balanced_criterion(&spider));
        let k = spider.leg_count() as u64;
        prop_assert_eq!(report.rho, Rational::ratio(spider.edge_count() as u64, spider.edge_count() as u64 + 1 - k));
    }

    #[test]
    fn certificates_replay(p in 1u64..40, q in 2u64..80) {
        prop_assume!(p < q && gcd(p, q) == 1);
        for target in [Rational::ratio(q + p, q), Rational::ratio(2 * q - p, q)] {
            let cert = certify(&target).unwrap();
            let replayed = replay(&cert).unwrap();
            if cert.is_covered() {
                prop_assert_eq!(replayed, Some(target));
            } else {
                prop_assert!(cert.steps.is_empty());
            }
        }
        if (q % p) * (q % p) <= p {
            prop_assert!(certify(&Rational::ratio(2 * q - p, q)).unwrap().is_covered());
        }
    }

    #[test]
    fn unreduced_dense_fractions_replay(p in 1u64..20, q in 2u64..60) {
        prop_assume!(p < q);
        let cert = certify_dense_fraction(p, q).unwrap();
        if cert.is_covered() {
            prop_assert_eq!(replay(&cert).unwrap(), Some(Rational::two() - Rational::ratio(p, q)));
        }
    }

    #[test]
    fn regularity_constant_is_least(s in 2u64..=3, b in 1u64..=2, extra in 0u64..=1) {
        let k = b + extra;
        let c = regularity_constants(s, b, k).unwrap();
        let e = &c.epsilon;
        let exponent = Rational::one() + (e * e).recip().unwrap();
        let (n, d) = exponent.to_u64_pair().unwrap();
        let bound = Pow::pow(BigUint::from(20u32), d) * Pow::pow(BigUint::from(2u32), n);
        let kk = &c.regularity;
        prop_assert!(Pow::pow(kk, d) >= bound);
        prop_assert!(Pow::pow(&(kk - 1u32), d) < bound);
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

#[test]
fn blowup_embedder_agrees_with_generic_search() {
    let patterns: Vec<Pattern> = [
        "blowup:t=2:spider:1,1",
        "blowup:t=3:spider:1,1",
        "blowup:t=2:spider:1,2",
        "blowup:t=2:spider:2,2",
        "blowup:t=2:spider:1,1,1",
        "blowup:t=2:spider:1,2,2",
        "Kst^k:s=2,t=2,k=2",
        "Lst:s=2,t=2,k=2",
        "Lst:s=2,t=2,k=1",
    ]
    .iter()
    .map(|s| Pattern::from_family(&s.parse::<Family>().unwrap()).unwrap())
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut structured = 0;
    for _ in 0..1000 {
        let pattern = &patterns[rng.gen_range(0..patterns.len())];
        let order = pattern.graph().order();
        let n = rng.gen_range(order..=12.max(order));
        let p = rng.gen_range(0.2..0.9);
        let g = random_graph(&mut rng, n, p);
        let generic = contains(&g, pattern.graph());
        if let Some(answer) = pattern.contained_in_structured(&g) {
            assert_eq!(answer, generic, "{} in {}", pattern.label(), g.to_graph6());
            structured += 1;
        }
        assert_eq!(pattern.contained_in(&g), generic);
    }
    assert_eq!(structured, 1000);
}

#[test]
fn turan_numbers_are_monotone_and_witnessed() {
    for spec in ["cycle:4", "complete:3", "star:3", "path:3", "blowup:t=2:spider:1,2"] {
        let pattern = Pattern::from_family(&spec.parse::<Family>().unwrap()).unwrap();
        let mut previous: Option<usize> = None;
        for n in pattern.graph().order()..=8 {
            let result = turan_number(n, &pattern).unwrap();
            let ex = result.ex_value;
            let w = &result.witness;
            assert_eq!((w.order(), w.edge_count()), (n, ex));
            assert!(!contains(w, pattern.graph()), "{spec} witness at n={n}");
            // the witness is saturated: any extra edge creates a copy
            for u in 0..n {
                for v in u + 1..n {
                    if !w.has_edge(u, v) {
                        let mut more = w.clone();
                        more.add_edge(u, v).unwrap();
                        assert!(contains(&more, pattern.graph()));
                    }
                }
            }
            if let Some(prev) = previous {
                assert!(prev <= ex, "{spec}: ex({n}) < ex({})", n - 1);
                // deleting a vertex of minimum degree
                assert!(ex * (n - 2) <= prev * n, "{spec}: averaging bound at n={n}");
            }
            if n <= 7 {
                assert_eq!(ex, naive_turan_oracle(n, pattern.graph()).unwrap());
            }
            previous = Some(ex);
        }
    }
}

#[test]
fn known_small_turan_numbers() {
    let c4 = Pattern::from_family(&"cycle:4".parse().unwrap()).unwrap();
    let ex: Vec<usize> = (4..=12).map(|n| turan_number(n, &c4).unwrap().ex_value).collect();
    // Clapham, Flockhart and Sheehan's table of C4-free extremal numbers
    assert_eq!(ex, [4, 6, 7, 9, 11, 13, 16, 18, 21]);
    let k3 = Pattern::from_family(&"complete:3".parse().unwrap()).unwrap();
    for n in 3..=12 {
        assert_eq!(turan_number(n, &k3).unwrap().ex_value, n * n / 4);
    }
    let star = Pattern::from_family(&"star:3".parse().unwrap()).unwrap();
    for n in 4..=9 {
        // max degree two: disjoint cycles when n >= 3
        assert_eq!(turan_number(n, &star).unwrap().ex_value, n);
    }
}
