use serde::Serialize;

use super::coloring::{Assignment, Coloring};
use crate::embedding::{nontrivial_automorphism, Embedding, EmbeddingSearch};
use crate::error::{Error, Result};
use crate::fraisse::{ModelCatalog, Verdict};
use crate::structure::Structure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonRigidModel {
    pub structure: Structure,
    pub sigma: Embedding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub verdict: Verdict,
    pub bound: usize,
    pub checked: usize,
    pub counterexample: Option<NonRigidModel>,
}

/// PASS iff every catalog model of size at most `n` has only the identity
/// automorphism. On failure, reports the first offending model with a
/// nontrivial automorphism, an involution whenever one exists.
pub fn check_rigidity(catalog: &ModelCatalog, n: usize) -> Result<RigidityReport> {
    if n > catalog.max_size() {
        return Err(Error::InvalidArgument(format!(
            "bound {n} exceeds catalog size {}",
            catalog.max_size()
        )));
    }
    let mut checked = 0;
    for model in catalog.up_to(n) {
        checked += 1;
        if let Some(sigma) = nontrivial_automorphism(&model.structure) {
            return Ok(RigidityReport {
                verdict: Verdict::Fail,
                bound: n,
                checked,
                counterexample: Some(NonRigidModel { structure: model.structure.clone(), sigma }),
            });
        }
    }
    Ok(RigidityReport { verdict: Verdict::Pass, bound: n, checked, counterexample: None })
}

/// Two-colors `hom(A,C)` so that `e` and `e∘σ` always differ: `e` gets
/// color 0 when its image sequence is lexicographically below that of `e∘σ`.
/// Every copy of `A` then carries both colors.
pub fn nonrigid_bad_coloring(a: &Structure, sigma: &Embedding, c: &Structure) -> Result<Coloring> {
    let n = a.size();
    let is_perm = sigma.len() == n && {
        let mut seen = vec![false; n];
        sigma.images().iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
    };
    if !is_perm || sigma.is_identity() || !sigma.is_embedding_between(a, a) || !sigma.compose(sigma).is_identity() {
        return Err(Error::NotInvolution);
    }
    let homs = EmbeddingSearch::new(a, c)?.collect();
    let assignments = homs
        .into_iter()
        .map(|e| {
            let twisted = e.compose(sigma);
            let color = usize::from(e.images() > twisted.images());
            Assignment { image: e.into_images(), color }
        })
        .collect();
    Ok(Coloring { a_size: n, k: 2, assignments })
}
