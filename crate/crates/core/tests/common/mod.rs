//! Brute-force oracles shared by the integration tests. Nothing here uses
//! the search code under test.
#![allow(dead_code)]

use std::sync::Arc;

use rwb_core::{Signature, Structure};

pub fn sig(relations: &[(&'static str, usize)]) -> Arc<Signature> {
    Arc::new(Signature::new(relations.iter().copied(), []).unwrap())
}

pub fn chain(n: usize) -> Structure {
    let mut s = Structure::new(sig(&[("<", 2)]), n);
    for i in 0..n {
        for j in i + 1..n {
            s.set(0, &[i, j], true);
        }
    }
    s
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let mut s = Structure::new(sig(&[("E", 2)]), n);
    for &(a, b) in edges {
        s.set(0, &[a, b], true);
        s.set(0, &[b, a], true);
    }
    s
}

pub fn complete(n: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    graph(n, &edges)
}

/// All tuples of length `k` over `0..n`, lexicographic.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..n).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Injective maps `0..k -> 0..n`, lexicographic.
pub fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    tuples(n, k)
        .into_iter()
        .filter(|t| (0..t.len()).all(|i| !t[..i].contains(&t[i])))
        .collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    injections(n, n)
}

/// Preserves and reflects every relation on every tuple, and fixes constants.
pub fn naive_embedding(a: &Structure, c: &Structure, map: &[usize]) -> bool {
    for rel in 0..a.relation_count() {
        for t in tuples(a.size(), a.arity(rel)) {
            let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            if a.holds(rel, &t) != c.holds(rel, &image) {
                return false;
            }
        }
    }
    (0..a.constants().len()).all(|i| map[a.constant(i)] == c.constant(i))
}

pub fn naive_homs(a: &Structure, c: &Structure) -> Vec<Vec<usize>> {
    injections(a.size(), c.size()).into_iter().filter(|m| naive_embedding(a, c, m)).collect()
}

pub fn naive_isomorphic(a: &Structure, b: &Structure) -> bool {
    a.size() == b.size() && !naive_homs(a, b).is_empty()
}

/// Every structure on `n` elements over a constant-free signature.
pub fn all_structures(sig: &Arc<Signature>, n: usize) -> Vec<Structure> {
    let slots: Vec<(usize, Vec<usize>)> = (0..sig.relations.len())
        .flat_map(|rel| tuples(n, sig.relations[rel].arity).into_iter().map(move |t| (rel, t)))
        .collect();
    assert!(slots.len() <= 20, "too many structures to list");
    (0..1u64 << slots.len())
        .map(|mask| {
            let mut s = Structure::new(sig.clone(), n);
            for (i, (rel, t)) in slots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s.set(*rel, t, true);
                }
            }
            s
        })
        .collect()
}

/// Isomorphism-class representatives, first occurrence kept.
pub fn naive_iso_classes(structures: impl IntoIterator<Item = Structure>) -> Vec<Structure> {
    let mut reps: Vec<Structure> = Vec::new();
    for s in structures {
        if !reps.iter().any(|r| naive_isomorphic(r, &s)) {
            reps.push(s);
        }
    }
    reps
}

/// True iff some assignment of `k` colors to `0..vertices` leaves every
/// edge with two colors, by listing all `k^vertices` assignments.
pub fn naive_weakly_colorable(vertices: usize, edges: &[Vec<usize>], k: usize) -> bool {
    let total = (k as u64).pow(vertices as u32);
    (0..total).any(|mut code| {
        let colors: Vec<usize> = (0..vertices)
            .map(|_| {
                let c = (code % k as u64) as usize;
                code /= k as u64;
                c
            })
            .collect();
        edges.iter().all(|e| e.iter().any(|&v| colors[v] != colors[e[0]]))
    })
}

/// `C -> (B)^A_k` straight from the definition: list `hom(A,C)`, and for
/// each copy of `B` the embeddings of `A` that factor through it.
pub fn naive_arrow(c: &Structure, b: &Structure, a: &Structure, k: usize) -> bool {
    let vertices = naive_homs(a, c);
    let inner = naive_homs(a, b);
    let edges: Vec<Vec<usize>> = naive_homs(b, c)
        .iter()
        .map(|e| {
            inner
                .iter()
                .map(|f| {
                    let composed: Vec<usize> = f.iter().map(|&x| e[x]).collect();
                    vertices.iter().position(|v| *v == composed).unwrap()
                })
                .collect()
        })
        .collect();
    !naive_weakly_colorable(vertices.len(), &edges, k)
}
