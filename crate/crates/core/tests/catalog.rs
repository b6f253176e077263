mod common;

use std::sync::Arc;

use common::*;
use rwb_core::catalog::*;
use rwb_core::fraisse::{enumerate_models, Verdict};
use rwb_core::{Error, SearchLimits, Signature, Structure};

fn tree_sig() -> Arc<Signature> {
    Arc::new(Signature::new([("<", 2), ("T", 2), ("R", 3), ("B", 3)], ["0"]).unwrap())
}

#[test]
fn unknown_class() {
    assert!(matches!(get_class("posets"), Err(Error::UnknownClass(_))));
}

#[test]
fn convex_er_rejects_a_gap() {
    let spec = get_class("convex-er").unwrap();
    let mut s = Structure::new(spec.signature().clone(), 3);
    for x in 0..3 {
        for y in 0..3 {
            s.set(0, &[x, y], x < y);
        }
        s.set(1, &[x, x], true);
    }
    s.set(1, &[0, 2], true);
    s.set(1, &[2, 0], true);
    assert!(!spec.is_member(&s).unwrap());
    s.set(1, &[0, 1], true);
    s.set(1, &[1, 0], true);
    s.set(1, &[1, 2], true);
    s.set(1, &[2, 1], true);
    assert!(spec.is_member(&s).unwrap());
}

#[test]
fn ordered_tree_cherry_is_a_member() {
    // Root 0 with children a=1 and b=2, a before b.
    let s = Structure::from_tuples(
        tree_sig(),
        3,
        &[
            ("<", &[&[0, 1], &[0, 2], &[1, 2]]),
            ("T", &[&[0, 1], &[0, 2]]),
            ("R", &[&[0, 1, 2], &[0, 2, 1]]),
        ],
        &[("0", 0)],
    )
    .unwrap();
    let spec = get_class("ordered-trees").unwrap();
    assert!(spec.is_member(&s).unwrap());
    // Every meet is the root, so B is empty; adding a B tuple breaks it.
    let mut b = s.clone();
    b.set(3, &[1, 2, 0], true);
    assert!(!spec.is_member(&b).unwrap());
    // Dropping the meet relation breaks it.
    let mut t = s.clone();
    t.set(2, &[0, 1, 2], false);
    assert!(!spec.is_member(&t).unwrap());
    // So does putting a child before the root.
    let mut u = s.clone();
    u.set(0, &[0, 1], false);
    u.set(0, &[1, 0], true);
    assert!(!spec.is_member(&u).unwrap());
}

#[test]
fn linear_orders_forbid_antichain_and_cycles() {
    let spec = get_class("linear-orders").unwrap();
    let forbidden = spec.forbidden();
    let antichain = Structure::new(spec.signature().clone(), 2);
    assert!(forbidden.iter().any(|f| naive_isomorphic(f, &antichain)));
    let mut two_cycle = antichain.clone();
    two_cycle.set(0, &[0, 1], true);
    two_cycle.set(0, &[1, 0], true);
    assert!(forbidden.iter().any(|f| naive_isomorphic(f, &two_cycle)));
    let mut loop1 = Structure::new(spec.signature().clone(), 1);
    loop1.set(0, &[0, 0], true);
    assert!(forbidden.iter().any(|f| naive_isomorphic(f, &loop1)));
}

/// For `x < y`, either `x` is a strict ancestor of `y` or the two are
/// incomparable siblings under a unique meet; never `y` above `x`.
#[test]
fn tree_models_satisfy_the_sibling_observation() {
    let spec = get_class("ordered-trees").unwrap();
    let catalog = enumerate_models(&spec, 5, SearchLimits::default()).unwrap();
    for m in catalog.iter() {
        let s = &m.structure;
        let n = s.size();
        for x in 0..n {
            for y in 0..n {
                if !s.holds2(0, x, y) {
                    continue;
                }
                assert!(!s.holds2(1, y, x));
                if !s.holds2(1, x, y) {
                    let meets: Vec<usize> = (0..n).filter(|&z| s.holds(2, &[z, x, y])).collect();
                    assert_eq!(meets.len(), 1, "{}", s.to_json());
                    let z = meets[0];
                    assert!(s.holds2(1, z, x) && s.holds2(1, z, y));
                }
            }
        }
    }
}

#[test]
fn entries_have_expected_tables() {
    let entries = list_classes().unwrap();
    assert_eq!(entries.len(), CLASS_NAMES.len());
    let by_name = |n: &str| entries.iter().find(|e| e.spec.name() == n).unwrap();
    let cer = by_name("convex-er");
    for check in ["hp", "jep", "ap", "rigidity"] {
        assert_eq!(cer.expected[check], Outcome::Verdict(Verdict::Pass));
    }
    assert_eq!(cer.expected["order-types"], Outcome::Count(4));
    assert_eq!(by_name("graphs").expected["rigidity"], Outcome::Verdict(Verdict::Fail));
    assert_eq!(by_name("maxdeg2-graphs").expected["ap"], Outcome::Verdict(Verdict::Fail));
    let json = serde_json::to_value(cer).unwrap();
    assert_eq!(json["expected"]["order-types"], 4);
    assert_eq!(json["expected"]["ap"], "PASS");
}

#[test]
fn entries_replay_at_default_bounds() {
    for entry in list_classes().unwrap() {
        if entry.spec.name() == "ordered-graphs" {
            continue;
        }
        for line in replay(&entry, SearchLimits::default()).unwrap() {
            assert!(line.matches(), "{} {}: expected {} observed {}", entry.spec.name(), line.check, line.expected, line.observed);
        }
    }
}

#[test]
fn ordered_graphs_entry_replays() {
    let entry = get_entry("ordered-graphs").unwrap();
    assert!(replay(&entry, SearchLimits::default()).unwrap().iter().all(ReplayLine::matches));
}
