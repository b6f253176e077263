mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rwb_core::catalog::get_class;
use rwb_core::fraisse::{enumerate_models, Verdict};
use rwb_core::ramsey::*;
use rwb_core::{Embedding, Error, SearchLimits, Structure};

fn limits() -> SearchLimits {
    SearchLimits::default()
}

fn empty_graph(n: usize) -> Structure {
    graph(n, &[])
}

/// Rechecks a bad coloring from scratch: every copy of `B` in `C` must see
/// two colors among the embeddings of `A` that factor through it.
fn naive_is_bad(c: &Structure, b: &Structure, a: &Structure, coloring: &Coloring) -> bool {
    let inner = naive_homs(a, b);
    let homs = naive_homs(a, c);
    homs.iter().all(|h| coloring.color_of(h).is_some_and(|col| col < coloring.k))
        && naive_homs(b, c).iter().all(|e| {
            let colors: Vec<usize> = inner
                .iter()
                .map(|f| coloring.color_of(&f.iter().map(|&x| e[x]).collect::<Vec<_>>()).unwrap())
                .collect();
            colors.iter().any(|&col| col != colors[0])
        })
}

#[test]
fn copy_hypergraph_of_chains() {
    let hg = copy_hypergraph(&chain(2), &chain(3), &chain(4)).unwrap();
    assert_eq!(hg.vertices.len(), 6);
    assert_eq!(hg.edges.len(), 4);
    assert!(hg.edges.iter().all(|e| e.len() == 3));
}

#[test]
fn copy_hypergraph_of_complete_graphs() {
    let hg = copy_hypergraph(&complete(2), &complete(3), &complete(4)).unwrap();
    assert_eq!(hg.vertices.len(), 12);
    assert_eq!(hg.edges.len(), 4);
    assert!(hg.edges.iter().all(|e| e.len() == 6));
}

#[test]
fn copy_hypergraph_with_a_equal_b_has_orbit_edges() {
    let a = graph(3, &[(0, 1)]);
    let c = graph(5, &[(0, 1), (2, 3)]);
    let hg = copy_hypergraph(&a, &a, &c).unwrap();
    // Each edge is one orbit of Aut(A), which has order 2 here.
    assert!(hg.edges.iter().all(|e| e.len() == 2));
    let covered: usize = hg.edges.iter().map(Vec::len).sum();
    assert_eq!(covered, hg.vertices.len());
}

#[test]
fn copy_hypergraph_rejects_empty_hom() {
    assert!(matches!(copy_hypergraph(&chain(3), &chain(2), &chain(4)), Err(Error::EmptyHom)));
    assert!(matches!(decide_arrow(&chain(4), &chain(2), &chain(3), 2, limits()), Err(Error::EmptyHom)));
}

#[test]
fn r33_six_chain_holds() {
    let v = decide_arrow(&chain(6), &chain(3), &chain(2), 2, limits()).unwrap();
    assert!(v.holds);
    assert!(v.coloring.is_none());
    assert_eq!((v.stats.vertices, v.stats.edges), (15, 20));
    assert!(naive_arrow(&chain(6), &chain(3), &chain(2), 2));
}

#[test]
fn r33_five_chain_fails_with_certificate() {
    let (c, b, a) = (chain(5), chain(3), chain(2));
    let v = decide_arrow(&c, &b, &a, 2, limits()).unwrap();
    assert!(!v.holds);
    let coloring = v.coloring.unwrap();
    assert_eq!(coloring.assignments.len(), 10);
    assert!(naive_is_bad(&c, &b, &a, &coloring));
    let hg = copy_hypergraph(&a, &b, &c).unwrap();
    assert!(coloring.is_bad_for(&hg).unwrap());
    assert!(!naive_arrow(&c, &b, &a, 2));
}

#[test]
fn one_color_holds_iff_a_copy_exists() {
    for n in 0..6 {
        let v = decide_arrow(&chain(n), &chain(3), &chain(2), 1, limits()).unwrap();
        assert_eq!(v.holds, n >= 3);
    }
}

#[test]
fn zero_colors_is_rejected() {
    assert!(decide_arrow(&chain(3), &chain(2), &chain(1), 0, limits()).is_err());
}

#[test]
fn budget_exhaustion_is_reported() {
    let err = decide_arrow(&chain(6), &chain(3), &chain(2), 2, limits().with_budget(10)).unwrap_err();
    assert!(matches!(err, Error::ResourceLimit { .. }));
}

/// Arrow instances drawn from several catalogs with at most 16 embeddings
/// of `A`, compared against listing every coloring.
#[test]
fn decide_arrow_matches_brute_force() {
    let mut instances = 0;
    let mut holds = 0;
    for (name, max) in [
        ("linear-orders", 6),
        ("graphs", 4),
        ("ordered-graphs", 4),
        ("convex-er", 4),
        ("equivalence-relations", 4),
        ("maxdeg2-graphs", 4),
    ] {
        let catalog = enumerate_models(&get_class(name).unwrap(), max, limits()).unwrap();
        let small: Vec<&Structure> = catalog.up_to(3).map(|m| &m.structure).filter(|s| s.size() >= 1).collect();
        for a in &small {
            for b in &small {
                if naive_homs(a, b).is_empty() {
                    continue;
                }
                for c in catalog.iter().map(|m| &m.structure) {
                    let homs = naive_homs(a, c).len();
                    for k in 1..=3usize {
                        if homs > 16 || (k == 3 && homs > 10) {
                            continue;
                        }
                        let v = decide_arrow(c, b, a, k, limits()).unwrap();
                        assert_eq!(v.holds, naive_arrow(c, b, a, k), "{name}: {} {} {} k={k}", a.to_json(), b.to_json(), c.to_json());
                        if let Some(col) = &v.coloring {
                            assert!(naive_is_bad(c, b, a, col));
                        }
                        instances += 1;
                        holds += usize::from(v.holds);
                    }
                }
            }
        }
    }
    assert!(instances >= 50, "only {instances} instances");
    assert!(holds > 0 && holds < instances);
}

#[test]
fn verdicts_do_not_depend_on_workers() {
    let cases = [(chain(5), chain(3), chain(2), 2), (chain(6), chain(3), chain(2), 2), (chain(7), chain(4), chain(2), 2)];
    for (c, b, a, k) in cases {
        let one = decide_arrow(&c, &b, &a, k, limits()).unwrap();
        let four = decide_arrow(&c, &b, &a, k, limits().with_workers(4)).unwrap();
        assert_eq!(one, four);
    }
}

#[test]
fn arrows_are_monotone_along_chains() {
    let mut held = false;
    for n in 3..=8 {
        let v = decide_arrow(&chain(n), &chain(3), &chain(2), 2, limits()).unwrap();
        assert!(!held || v.holds);
        held = v.holds;
    }
    assert!(held);
}

#[test]
fn witness_for_r33_is_the_six_chain() {
    let catalog = enumerate_models(&get_class("linear-orders").unwrap(), 8, limits()).unwrap();
    match find_witness(&catalog, &chain(2), &chain(3), 2, 8, limits()).unwrap() {
        WitnessSearch::Found { witness, .. } => assert!(naive_isomorphic(&witness, &chain(6))),
        other => panic!("no witness: {other:?}"),
    }
}

#[test]
fn pigeonhole_witnesses() {
    let catalog = enumerate_models(&get_class("linear-orders").unwrap(), 10, limits()).unwrap();
    for m in 1..=4 {
        for k in 1..=3 {
            let expected = (m - 1) * k + 1;
            if expected > 10 {
                continue;
            }
            match find_witness(&catalog, &chain(1), &chain(m), k, 10, limits()).unwrap() {
                WitnessSearch::Found { witness, .. } => assert_eq!(witness.size(), expected, "m={m} k={k}"),
                other => panic!("m={m} k={k}: {other:?}"),
            }
        }
    }
}

#[test]
fn unordered_graphs_have_no_witness() {
    let catalog = enumerate_models(&get_class("graphs").unwrap(), 6, limits()).unwrap();
    let a = empty_graph(2);
    let result = find_witness(&catalog, &a, &a, 2, 6, limits()).unwrap();
    assert!(matches!(result, WitnessSearch::NotFoundUpTo { max_size: 6, .. }));
}

#[test]
fn rigidity_verdicts() {
    for (name, expected) in [("linear-orders", Verdict::Pass), ("convex-er", Verdict::Pass), ("graphs", Verdict::Fail)] {
        let catalog = enumerate_models(&get_class(name).unwrap(), 6, limits()).unwrap();
        let report = check_rigidity(&catalog, 6).unwrap();
        assert_eq!(report.verdict, expected, "{name}");
        // Independent count of nontrivial automorphisms.
        let nonrigid = catalog.iter().any(|m| naive_homs(&m.structure, &m.structure).len() > 1);
        assert_eq!(nonrigid, expected == Verdict::Fail);
    }
    let catalog = enumerate_models(&get_class("graphs").unwrap(), 6, limits()).unwrap();
    let cx = check_rigidity(&catalog, 6).unwrap().counterexample.unwrap();
    assert!(naive_isomorphic(&cx.structure, &empty_graph(2)));
    assert_eq!(cx.sigma.images(), &[1, 0]);
}

/// Every non-rigid class: the involution coloring refutes `C -> (A)^A_2`
/// for every catalog model `C` up to size 6.
#[test]
fn rigidity_lemma_finite_form() {
    for name in ["graphs", "equivalence-relations"] {
        let catalog = enumerate_models(&get_class(name).unwrap(), 6, limits()).unwrap();
        let cx = check_rigidity(&catalog, 6).unwrap().counterexample.unwrap();
        let a = &cx.structure;
        for m in catalog.iter() {
            let c = &m.structure;
            let v = decide_arrow(c, a, a, 2, limits()).unwrap();
            assert!(!v.holds, "{name}: {}", c.to_json());
            let coloring = nonrigid_bad_coloring(a, &cx.sigma, c).unwrap();
            assert!(naive_is_bad(c, a, a, &coloring), "{name}: {}", c.to_json());
        }
    }
}

#[test]
fn orientation_coloring_on_empty_graph() {
    let a = empty_graph(2);
    let c = empty_graph(4);
    let coloring = nonrigid_bad_coloring(&a, &Embedding::new(vec![1, 0]), &c).unwrap();
    assert_eq!(coloring.assignments.len(), 12);
    for asg in &coloring.assignments {
        assert_eq!(asg.color, usize::from(asg.image[0] > asg.image[1]));
    }
    assert!(naive_is_bad(&c, &a, &a, &coloring));
}

#[test]
fn orientation_coloring_on_antichain() {
    let a = Structure::new(sig(&[("<", 2)]), 2);
    let c = Structure::new(sig(&[("<", 2)]), 5);
    let coloring = nonrigid_bad_coloring(&a, &Embedding::new(vec![1, 0]), &c).unwrap();
    assert!(coloring.assignments.iter().all(|x| x.color == usize::from(x.image[0] > x.image[1])));
    assert!(naive_is_bad(&c, &a, &a, &coloring));
}

#[test]
fn identity_is_not_an_involution() {
    let a = empty_graph(2);
    assert!(matches!(nonrigid_bad_coloring(&a, &Embedding::identity(2), &a), Err(Error::NotInvolution)));
    // A 3-cycle of an empty graph has order 3.
    let b = empty_graph(3);
    assert!(matches!(nonrigid_bad_coloring(&b, &Embedding::new(vec![1, 2, 0]), &b), Err(Error::NotInvolution)));
    // Not an automorphism.
    let p = graph(3, &[(0, 1)]);
    assert!(matches!(nonrigid_bad_coloring(&p, &Embedding::new(vec![0, 2, 1]), &p), Err(Error::NotInvolution)));
}

/// A random 2-coloring of the 2-element subsets, written on both orders.
fn random_pair_palette(rng: &mut ChaCha8Rng, n: usize) -> Palette {
    let mut p = Palette::new(2, 0);
    for x in 0..n {
        for y in x + 1..n {
            let color = rng.gen_range(0..2);
            p.set(vec![x, y], color).unwrap();
            p.set(vec![y, x], color).unwrap();
        }
    }
    p
}

/// Tuples over `a` of length 1..=r whose coordinates share equality
/// pattern and relation pattern, written out without `qf_type`.
fn naive_same_type(a: &Structure, s: &[usize], t: &[usize]) -> bool {
    s.len() == t.len()
        && (0..s.len()).all(|i| (0..s.len()).all(|j| (s[i] == s[j]) == (t[i] == t[j])))
        && (0..a.relation_count()).all(|rel| {
            tuples(s.len(), a.arity(rel)).iter().all(|u| {
                let si: Vec<usize> = u.iter().map(|&i| s[i]).collect();
                let ti: Vec<usize> = u.iter().map(|&i| t[i]).collect();
                a.holds(rel, &si) == a.holds(rel, &ti)
            })
        })
}

fn naive_indiscernible(c: &Structure, a: &Structure, palette: &Palette) -> Option<Vec<usize>> {
    let all: Vec<Vec<usize>> = (1..=palette.arity()).flat_map(|r| tuples(a.size(), r)).collect();
    naive_homs(a, c).into_iter().find(|g| {
        let image = |t: &[usize]| t.iter().map(|&x| g[x]).collect::<Vec<usize>>();
        all.iter().all(|s| {
            all.iter().all(|t| !naive_same_type(a, s, t) || palette.color(&image(s)) == palette.color(&image(t)))
        })
    })
}

#[test]
fn indiscernibles_in_six_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let p = random_pair_palette(&mut rng, 6);
        let g = extract_indiscernible(&chain(6), &chain(3), &p).unwrap();
        assert!(g.is_some());
        assert_eq!(g, extract_indiscernible_iterated(&chain(6), &chain(3), &p).unwrap());
    }
}

#[test]
fn no_indiscernible_for_r33_bad_palette() {
    let v = decide_arrow(&chain(5), &chain(3), &chain(2), 2, limits()).unwrap();
    let p = Palette::from_coloring(&v.coloring.unwrap()).unwrap();
    assert_eq!(extract_indiscernible(&chain(5), &chain(3), &p).unwrap(), None);
    assert_eq!(extract_indiscernible_iterated(&chain(5), &chain(3), &p).unwrap(), None);
}

#[test]
fn constant_palette_gives_first_embedding() {
    let p = Palette::new(2, 3);
    let g = extract_indiscernible(&chain(6), &chain(3), &p).unwrap().unwrap();
    assert_eq!(g.images(), &[0, 1, 2]);
    let g = extract_indiscernible(&complete(4), &complete(2), &p).unwrap().unwrap();
    assert_eq!(g.images(), &[0, 1]);
}

#[test]
fn indiscernibles_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let hosts = [chain(5), graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]), complete(4), empty_graph(4)];
    let pictures = [chain(3), graph(3, &[(0, 1)]), complete(2), empty_graph(2), graph(3, &[(0, 1), (1, 2)])];
    let mut checked = 0;
    for c in &hosts {
        for a in pictures.iter().filter(|a| a.signature() == c.signature()) {
            for arity in 1..=2 {
                for _ in 0..20 {
                    let mut p = Palette::new(arity, 0);
                    for t in (1..=arity).flat_map(|r| tuples(c.size(), r)) {
                        p.set(t, rng.gen_range(0..2)).unwrap();
                    }
                    let got = extract_indiscernible(c, a, &p).unwrap().map(Embedding::into_images);
                    assert_eq!(got, naive_indiscernible(c, a, &p));
                    let iter = extract_indiscernible_iterated(c, a, &p).unwrap().map(Embedding::into_images);
                    assert_eq!(iter, got);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 100);
}

#[test]
fn coloring_and_palette_json() {
    let v = decide_arrow(&chain(3), &chain(3), &chain(2), 2, limits()).unwrap();
    assert!(!v.holds);
    let col = v.coloring.unwrap();
    let text = col.to_json();
    assert!(text.starts_with(r#"{"A_size":2,"k":2,"assignments":[{"image":[0,1],"color":"#));
    assert_eq!(Coloring::from_json(&text).unwrap(), col);

    let mut p = Palette::new(2, 0);
    p.set(vec![0, 3], 1).unwrap();
    assert_eq!(p.to_json(), r#"{"arity":2,"default":0,"colormap":[{"tuple":[0,3],"color":1}]}"#);
    assert_eq!(Palette::from_json(&p.to_json()).unwrap(), p);
    assert!(p.set(vec![0, 1, 2], 1).is_err());
    assert!(Palette::from_json(r#"{"arity":1,"default":0,"colormap":[{"tuple":[0,3],"color":1}]}"#).is_err());
}
