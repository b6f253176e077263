use std::collections::BTreeMap;
use std::sync::Arc;

use crate::canon::canonical_labeling;
use crate::error::{Error, Result};
use crate::fraisse::{Checker, ClassSpec};
use crate::signature::Signature;
use crate::structure::{for_each_tuple, Structure};

pub const CLASS_NAMES: [&str; 7] = [
    "linear-orders",
    "graphs",
    "ordered-graphs",
    "equivalence-relations",
    "convex-er",
    "ordered-trees",
    "maxdeg2-graphs",
];

fn strict_linear(s: &Structure, lt: usize) -> bool {
    let n = s.size();
    for x in 0..n {
        if s.holds2(lt, x, x) {
            return false;
        }
        for y in 0..n {
            if x != y && s.holds2(lt, x, y) == s.holds2(lt, y, x) {
                return false;
            }
            for z in 0..n {
                if s.holds2(lt, x, y) && s.holds2(lt, y, z) && !s.holds2(lt, x, z) {
                    return false;
                }
            }
        }
    }
    true
}

fn simple_graph(s: &Structure, e: usize) -> bool {
    let n = s.size();
    (0..n).all(|x| !s.holds2(e, x, x) && (0..n).all(|y| s.holds2(e, x, y) == s.holds2(e, y, x)))
}

fn equivalence(s: &Structure, e: usize) -> bool {
    let n = s.size();
    for x in 0..n {
        if !s.holds2(e, x, x) {
            return false;
        }
        for y in 0..n {
            if s.holds2(e, x, y) != s.holds2(e, y, x) {
                return false;
            }
            for z in 0..n {
                if s.holds2(e, x, y) && s.holds2(e, y, z) && !s.holds2(e, x, z) {
                    return false;
                }
            }
        }
    }
    true
}

fn convex(s: &Structure, lt: usize, e: usize) -> bool {
    let n = s.size();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if s.holds2(lt, x, y) && s.holds2(lt, y, z) && s.holds2(e, x, z) && !s.holds2(e, x, y) {
                    return false;
                }
            }
        }
    }
    true
}

fn max_degree(s: &Structure, e: usize, d: usize) -> bool {
    (0..s.size()).all(|x| (0..s.size()).filter(|&y| s.holds2(e, x, y)).count() <= d)
}

/// All minimal structures of size at most `max` violating `valid`, up to
/// isomorphism and sorted by canonical code. A violation is minimal when
/// every one-point deletion is valid.
pub fn minimal_violations(sig: &Arc<Signature>, max: usize, valid: impl Fn(&Structure) -> bool) -> Vec<Structure> {
    let mut found = BTreeMap::new();
    let mut level = vec![Structure::new(sig.clone(), 0)];
    for t in 1..=max {
        let new = t - 1;
        let mut open = Vec::new();
        for (rel, r) in sig.relations.iter().enumerate() {
            for_each_tuple(t, r.arity, |tuple| {
                if tuple.contains(&new) {
                    open.push((rel, tuple.to_vec()));
                }
            });
        }
        let mut next = Vec::new();
        for base in &level {
            let mut s = base.grow(1);
            for mask in 0u64..1 << open.len() {
                for (bit, (rel, tuple)) in open.iter().enumerate() {
                    s.set(*rel, tuple, mask >> bit & 1 == 1);
                }
                if valid(&s) {
                    next.push(s.clone());
                } else if (0..t).all(|drop| {
                    let rest: Vec<usize> = (0..t).filter(|&x| x != drop).collect();
                    valid(&s.restrict(&rest))
                }) {
                    let (lab, code) = canonical_labeling(&s);
                    found.entry(code).or_insert_with(|| s.relabel(&lab));
                }
            }
        }
        level = next;
    }
    found.into_values().collect()
}

fn universal_class(
    name: &str,
    relations: &[(&'static str, usize)],
    max: usize,
    notes: &str,
    valid: impl Fn(&Structure) -> bool,
) -> Result<ClassSpec> {
    let sig = Arc::new(Signature::new(relations.iter().copied(), [])?);
    let forbidden = minimal_violations(&sig, max, valid);
    ClassSpec::new(name, sig, forbidden, None, notes)
}

/// A built-in class by name.
pub fn get_class(name: &str) -> Result<ClassSpec> {
    match name {
        "linear-orders" => universal_class(
            name,
            &[("<", 2)],
            3,
            "strict linear orders",
            |s| strict_linear(s, 0),
        ),
        "graphs" => universal_class(
            name,
            &[("E", 2)],
            2,
            "simple graphs: E irreflexive and symmetric",
            |s| simple_graph(s, 0),
        ),
        "ordered-graphs" => universal_class(
            name,
            &[("<", 2), ("E", 2)],
            3,
            "simple graphs with a strict linear order",
            |s| strict_linear(s, 0) && simple_graph(s, 1),
        ),
        "equivalence-relations" => universal_class(
            name,
            &[("E", 2)],
            3,
            "equivalence relations: E reflexive, symmetric, transitive",
            |s| equivalence(s, 0),
        ),
        "convex-er" => universal_class(
            name,
            &[("<", 2), ("E", 2)],
            3,
            "strict linear order with an equivalence relation whose classes are intervals: x<y<z and E(x,z) imply E(x,y)",
            |s| strict_linear(s, 0) && equivalence(s, 1) && convex(s, 0, 1),
        ),
        "maxdeg2-graphs" => universal_class(
            name,
            &[("E", 2)],
            4,
            "simple graphs of maximum degree 2",
            |s| simple_graph(s, 0) && max_degree(s, 0, 2),
        ),
        "ordered-trees" => {
            let sig = Arc::new(Signature::new([("<", 2), ("T", 2), ("R", 3), ("B", 3)], ["0"])?);
            ClassSpec::new(
                name,
                sig,
                Vec::new(),
                Some(Checker::TreeMeetTotal),
                "finite meet-trees rooted at 0: T is the strict ancestor order, < a linear order extending T \
                 with subtrees convex, R(x,y1,y2) holds iff y1,y2 are T-incomparable with meet x, \
                 B(x1,x2,x3) holds iff x1 != x2 and meet(x1,x3) is strictly below meet(x1,x2)",
            )
        }
        other => Err(Error::UnknownClass(other.to_string())),
    }
}
