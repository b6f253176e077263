use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::structure::{for_each_tuple, Structure};

/// An injective map between universes that preserves and reflects every
/// relation and fixes every constant. `images()[i]` is the image of source
/// element `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Embedding(Vec<usize>);

impl Embedding {
    pub fn new(images: Vec<usize>) -> Self {
        Embedding(images)
    }

    pub fn identity(n: usize) -> Self {
        Embedding((0..n).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn into_images(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &Embedding) -> Embedding {
        Embedding(inner.0.iter().map(|&x| self.0[x]).collect())
    }

    /// Inverse of a permutation.
    pub fn inverse(&self) -> Embedding {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Embedding(inv)
    }

    /// Checks the embedding conditions directly, tuple by tuple.
    pub fn is_embedding_between(&self, source: &Structure, target: &Structure) -> bool {
        is_embedding(source, target, &self.0)
    }
}

/// Direct check of the preserve-and-reflect conditions for `map`.
pub fn is_embedding(source: &Structure, target: &Structure, map: &[usize]) -> bool {
    if source.signature() != target.signature() || map.len() != source.size() {
        return false;
    }
    if map.iter().any(|&x| x >= target.size()) {
        return false;
    }
    let mut seen = vec![false; target.size()];
    for &x in map {
        if std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    if (0..source.constants().len()).any(|c| map[source.constant(c)] != target.constant(c)) {
        return false;
    }
    let mut ok = true;
    let mut image = Vec::new();
    for rel in 0..source.relation_count() {
        for_each_tuple(source.size(), source.arity(rel), |t| {
            image.clear();
            image.extend(t.iter().map(|&i| map[i]));
            ok &= source.holds(rel, t) == target.holds(rel, &image);
        });
    }
    ok
}

/// Backtracking enumeration of embeddings `source -> target`.
///
/// Source elements are assigned in index order and target candidates are
/// tried in increasing order, so maps come out in lexicographic order of the
/// image sequence. Candidates are pre-filtered by the one-element atomic type
/// and constants; every tuple whose last new coordinate is the element being
/// assigned is checked at assignment time.
pub struct EmbeddingSearch<'a> {
    source: &'a Structure,
    target: &'a Structure,
    domains: Vec<Vec<usize>>,
    /// Per level: (relation, source tuple, holds in source).
    checks: Vec<Vec<(usize, Vec<usize>, bool)>>,
}

impl<'a> EmbeddingSearch<'a> {
    pub fn new(source: &'a Structure, target: &'a Structure) -> Result<Self> {
        source.same_signature(target)?;
        let n = source.size();
        let diag = |s: &Structure, x: usize| -> Vec<bool> {
            (0..s.relation_count()).map(|rel| s.holds(rel, &vec![x; s.arity(rel)])).collect()
        };
        let target_diag: Vec<Vec<bool>> = (0..target.size()).map(|y| diag(target, y)).collect();
        let mut domains: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                let d = diag(source, x);
                (0..target.size()).filter(|&y| target_diag[y] == d).collect()
            })
            .collect();
        for c in 0..source.constants().len() {
            let x = source.constant(c);
            let y = target.constant(c);
            domains[x].retain(|&z| z == y);
        }
        let checks = (0..n)
            .map(|i| {
                let mut level = Vec::new();
                for rel in 0..source.relation_count() {
                    let arity = source.arity(rel);
                    if arity == 1 {
                        continue;
                    }
                    for_each_tuple(i + 1, arity, |t| {
                        if t.contains(&i) && t.iter().any(|&x| x != i) {
                            level.push((rel, t.to_vec(), source.holds(rel, t)));
                        }
                    });
                }
                level
            })
            .collect();
        Ok(EmbeddingSearch { source, target, domains, checks })
    }

    /// Restricts source element `x` to map to `y`.
    pub fn fix(mut self, x: usize, y: usize) -> Self {
        self.domains[x].retain(|&z| z == y);
        self
    }

    pub fn for_each<F>(&self, mut visit: F)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let n = self.source.size();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; self.target.size()];
        let mut image = Vec::with_capacity(8);
        let _ = self.descend(0, &mut map, &mut used, &mut image, &mut visit);
    }

    fn descend<F>(
        &self,
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
        image: &mut Vec<usize>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if i == map.len() {
            return visit(map);
        }
        for &y in &self.domains[i] {
            if used[y] {
                continue;
            }
            map[i] = y;
            let consistent = self.checks[i].iter().all(|(rel, t, truth)| {
                image.clear();
                image.extend(t.iter().map(|&x| map[x]));
                self.target.holds(*rel, image) == *truth
            });
            if consistent {
                used[y] = true;
                let flow = self.descend(i + 1, map, used, image, visit);
                used[y] = false;
                flow?;
            }
        }
        map[i] = usize::MAX;
        ControlFlow::Continue(())
    }

    pub fn collect(&self) -> Vec<Embedding> {
        let mut out = Vec::new();
        self.for_each(|m| {
            out.push(Embedding(m.to_vec()));
            ControlFlow::Continue(())
        });
        out
    }

    pub fn first(&self) -> Option<Embedding> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(Embedding(m.to_vec()));
            ControlFlow::Break(())
        });
        found
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }
}

/// All embeddings `a -> c` in lexicographic order of their image sequences.
pub fn enumerate_embeddings(a: &Structure, c: &Structure) -> Result<Vec<Embedding>> {
    Ok(EmbeddingSearch::new(a, c)?.collect())
}

/// The automorphism group as a list; the identity comes first.
pub fn automorphisms(s: &Structure) -> Vec<Embedding> {
    EmbeddingSearch::new(s, s).expect("same signature").collect()
}

/// First non-identity automorphism, preferring involutions.
pub fn nontrivial_automorphism(s: &Structure) -> Option<Embedding> {
    let search = EmbeddingSearch::new(s, s).expect("same signature");
    let mut first = None;
    let mut involution = None;
    search.for_each(|m| {
        let e = Embedding(m.to_vec());
        if e.is_identity() {
            return ControlFlow::Continue(());
        }
        if e.compose(&e).is_identity() {
            involution = Some(e);
            return ControlFlow::Break(());
        }
        first.get_or_insert(e);
        ControlFlow::Continue(())
    });
    involution.or(first)
}

pub fn is_isomorphic(s: &Structure, t: &Structure) -> Result<bool> {
    s.same_signature(t)?;
    if s.size() != t.size() {
        return Ok(false);
    }
    Ok(EmbeddingSearch::new(s, t)?.first().is_some())
}
