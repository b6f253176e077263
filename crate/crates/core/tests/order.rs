mod common;

use common::*;
use rwb_core::catalog::get_class;
use rwb_core::fraisse::{enumerate_models, ModelCatalog, Verdict};
use rwb_core::order::*;
use rwb_core::ramsey::check_rigidity;
use rwb_core::{qf_type, SearchLimits, Structure};

fn catalog(name: &str, n: usize) -> ModelCatalog {
    enumerate_models(&get_class(name).unwrap(), n, SearchLimits::default()).unwrap()
}

/// Counts, by brute force over all subsets of the irreflexive 2-types, the
/// sets whose union strictly and linearly orders every model.
fn naive_order_count(cat: &ModelCatalog, n: usize) -> usize {
    let types = irreflexive_two_types(cat, n).unwrap();
    let models: Vec<&Structure> = cat.up_to(n).map(|m| &m.structure).collect();
    (0..1u32 << types.len())
        .filter(|mask| {
            models.iter().all(|s| {
                let lt = |x: usize, y: usize| {
                    x != y && {
                        let p = qf_type(s, &[x, y]).unwrap();
                        types.iter().enumerate().any(|(i, q)| mask >> i & 1 == 1 && *q == p)
                    }
                };
                let m = s.size();
                let pairs = tuples(m, 2);
                pairs.iter().all(|t| t[0] == t[1] || lt(t[0], t[1]) != lt(t[1], t[0]))
                    && tuples(m, 3).iter().all(|t| !(lt(t[0], t[1]) && lt(t[1], t[2])) || lt(t[0], t[2]))
            })
        })
        .count()
}

#[test]
fn irreflexive_type_counts() {
    assert_eq!(irreflexive_two_types(&catalog("linear-orders", 4), 4).unwrap().len(), 2);
    assert_eq!(irreflexive_two_types(&catalog("convex-er", 4), 4).unwrap().len(), 4);
    // Edge and non-edge; both symmetric.
    assert_eq!(irreflexive_two_types(&catalog("graphs", 4), 4).unwrap().len(), 2);
    assert!(irreflexive_two_types(&catalog("graphs", 4), 4).unwrap().iter().all(|p| p.is_irreflexive()));
}

#[test]
fn order_candidates_match_brute_force() {
    let expect = [
        ("linear-orders", 2),
        ("convex-er", 4),
        ("equivalence-relations", 0),
        ("graphs", 0),
        ("ordered-graphs", 2),
        ("maxdeg2-graphs", 0),
    ];
    for (name, count) in expect {
        let (n, max) = if name == "ordered-graphs" { (4, 4) } else { (5, 6) };
        let cat = catalog(name, max);
        let report = find_order_types(&cat, n, SearchLimits::default()).unwrap();
        assert_eq!(report.candidates.len(), count, "{name}");
        assert_eq!(naive_order_count(&cat, n), count, "{name}");
        if name != "ordered-graphs" {
            let at6 = find_order_types(&cat, 6, SearchLimits::default()).unwrap();
            let strip = |r: &OrderReport| r.candidates.iter().map(|c| c.types.clone()).collect::<Vec<_>>();
            assert_eq!(strip(&report), strip(&at6), "{name} unstable");
        }
    }
}

#[test]
fn candidates_are_orders_on_every_model() {
    let cat = catalog("convex-er", 5);
    let report = find_order_types(&cat, 5, SearchLimits::default()).unwrap();
    assert!(report.candidates.windows(2).all(|w| (w[0].types.len(), &w[0].types) <= (w[1].types.len(), &w[1].types)));
    for cand in &report.candidates {
        assert_eq!(cand.types.len(), 2);
        assert_eq!(cand.verified_bound, 5);
        for m in cat.iter() {
            let s = &m.structure;
            let lt = |x: usize, y: usize| x != y && cand.types.contains(&qf_type(s, &[x, y]).unwrap());
            for x in 0..s.size() {
                assert!(!lt(x, x));
                for y in 0..s.size() {
                    assert!(x == y || lt(x, y) ^ lt(y, x));
                    for z in 0..s.size() {
                        assert!(!(lt(x, y) && lt(y, z)) || lt(x, z));
                    }
                }
            }
        }
    }
}

#[test]
fn worker_count_does_not_change_candidates() {
    let cat = catalog("convex-er", 5);
    let one = find_order_types(&cat, 5, SearchLimits::default()).unwrap();
    let four = find_order_types(&cat, 5, SearchLimits::default().with_workers(4)).unwrap();
    assert_eq!(one, four);
}

#[test]
fn non_rigid_classes_have_no_orders() {
    for name in rwb_core::catalog::CLASS_NAMES {
        if name == "ordered-graphs" {
            continue;
        }
        let cat = catalog(name, 6);
        if check_rigidity(&cat, 6).unwrap().verdict == Verdict::Fail {
            assert!(find_order_types(&cat, 5, SearchLimits::default()).unwrap().candidates.is_empty(), "{name}");
        }
    }
}

#[test]
fn type_order_axioms() {
    let lin = catalog("linear-orders", 4);
    let up = qf_type(&chain(2), &[0, 1]).unwrap();
    let r = check_type_order_axioms(&up, &lin, 4).unwrap();
    assert_eq!((r.antisymmetry, r.acyclicity), (Verdict::Pass, Verdict::Pass));

    let graphs = catalog("graphs", 4);
    let edge = qf_type(&complete(2), &[0, 1]).unwrap();
    let r = check_type_order_axioms(&edge, &graphs, 4).unwrap();
    assert_eq!(r.antisymmetry, Verdict::Fail);
    let w = r.antisymmetry_witness.unwrap();
    assert!(w.structure.holds(0, &w.elements) && w.structure.holds(0, &[w.elements[1], w.elements[0]]));
    assert_eq!(r.acyclicity, Verdict::Fail);

    let cer = catalog("convex-er", 6);
    let two = cer.models(2).iter().find(|m| !m.structure.holds2(1, 0, 1) && !m.structure.holds2(1, 1, 0)).unwrap();
    let s = &two.structure;
    let (lo, hi) = if s.holds2(0, 0, 1) { (0, 1) } else { (1, 0) };
    let p = qf_type(s, &[lo, hi]).unwrap();
    let r = check_type_order_axioms(&p, &cer, 6).unwrap();
    assert_eq!((r.antisymmetry, r.acyclicity), (Verdict::Pass, Verdict::Pass));
}

#[test]
fn monochromatic_sequences() {
    let c6 = chain(6);
    let all: Vec<usize> = (0..6).collect();
    let found = find_monochromatic_2type(&c6, &all, 3).unwrap().unwrap();
    assert_eq!(found.pair_type, Some(qf_type(&c6, &[0, 1]).unwrap()));
    assert_eq!(found.elements, vec![0, 1, 2]);

    let single = find_monochromatic_2type(&c6, &all, 1).unwrap().unwrap();
    assert_eq!(single.pair_type, None);
    assert_eq!(single.elements.len(), 1);
    assert_eq!(find_monochromatic_2type(&c6, &[0, 1], 3).unwrap(), None);
    assert!(find_monochromatic_2type(&c6, &[0, 0], 2).is_err());

    // Convex classes {a,b},{c,d},{e,f}.
    let mut s = Structure::new(sig(&[("<", 2), ("E", 2)]), 6);
    for x in 0..6 {
        for y in 0..6 {
            s.set(0, &[x, y], x < y);
            s.set(1, &[x, y], x / 2 == y / 2);
        }
    }
    let found = find_monochromatic_2type(&s, &all, 2).unwrap().unwrap();
    assert_eq!(found.elements.len(), 2);
    let p = found.pair_type.unwrap();
    assert_eq!(p, qf_type(&s, &found.elements).unwrap());
    // Three elements from distinct classes.
    let found = find_monochromatic_2type(&s, &all, 3).unwrap().unwrap();
    assert_eq!(found.elements, vec![0, 2, 4]);
}

/// With `t` types on increasing pairs and `|X| >= R(3,3) = 6`, a
/// monochromatic triple always exists when `t <= 2`: check every
/// 2-colored graph on 6 vertices written as an ordered graph.
#[test]
fn monochromatic_triple_always_exists_at_six() {
    let all: Vec<usize> = (0..6).collect();
    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|x| (x + 1..6).map(move |y| (x, y))).collect();
    for mask in (0..1u32 << 15).step_by(97) {
        let mut s = Structure::new(sig(&[("<", 2), ("E", 2)]), 6);
        for (i, &(x, y)) in pairs.iter().enumerate() {
            s.set(0, &[x, y], true);
            if mask >> i & 1 == 1 {
                s.set(1, &[x, y], true);
                s.set(1, &[y, x], true);
            }
        }
        assert!(find_monochromatic_2type(&s, &all, 3).unwrap().is_some());
    }
}
