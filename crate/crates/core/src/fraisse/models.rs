use std::collections::BTreeMap;

use serde::Serialize;

use super::complete::{all_members, one_point_extensions};
use super::spec::ClassSpec;
use crate::canon::{canonical_labeling, CanonicalCode};
use crate::error::{Error, Result};
use crate::limits::{par_map, SearchLimits};
use crate::structure::Structure;

/// One isomorphism class, stored in canonical labeling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogModel {
    pub structure: Structure,
    pub code: CanonicalCode,
}

/// All members of a class up to a size, one per isomorphism type, sorted by
/// size and then canonical code.
#[derive(Clone, Debug)]
pub struct ModelCatalog {
    spec: ClassSpec,
    max_size: usize,
    levels: Vec<Vec<CatalogModel>>,
}

impl ModelCatalog {
    pub fn spec(&self) -> &ClassSpec {
        &self.spec
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn models(&self, size: usize) -> &[CatalogModel] {
        self.levels.get(size).map_or(&[], Vec::as_slice)
    }

    /// Models of size at most `n`, size-ascending.
    pub fn up_to(&self, n: usize) -> impl Iterator<Item = &CatalogModel> {
        self.levels.iter().take(n.saturating_add(1)).flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CatalogModel> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Model counts per size.
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Position of the isomorphism type of `s` among the models of its size.
    pub fn find(&self, s: &Structure) -> Option<&CatalogModel> {
        let code = canonical_labeling(s).1;
        let level = self.levels.get(s.size())?;
        level.binary_search_by(|m| m.code.cmp(&code)).ok().map(|i| &level[i])
    }
}

fn canonical(s: &Structure) -> (CanonicalCode, Structure) {
    let (lab, code) = canonical_labeling(s);
    (code, s.relabel(&lab))
}

/// Restricted growth strings of length `c`: every way constants can coincide.
fn constant_patterns(c: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..c {
        let mut next = Vec::new();
        for p in &out {
            let blocks = p.iter().max().map_or(0, |m| m + 1);
            for b in 0..=blocks {
                let mut q = p.clone();
                q.push(b);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Enumerates the class up to size `n` by one-point extension and
/// deduplication by canonical code.
///
/// Completeness needs every member of size `k+1` to have a one-point
/// deletion that is a member, which holds for hereditary classes and for
/// the built-in checker classes (deleting a leaf).
pub fn enumerate_models(spec: &ClassSpec, n: usize, limits: SearchLimits) -> Result<ModelCatalog> {
    let mut seeds: Vec<BTreeMap<CanonicalCode, Structure>> = vec![BTreeMap::new(); n + 1];
    let c = spec.signature().constants.len();
    if c == 0 {
        let empty = spec.empty_structure(0);
        if spec.member_unchecked(&empty) {
            let (code, s) = canonical(&empty);
            seeds[0].insert(code, s);
        }
    } else {
        for pattern in constant_patterns(c) {
            let size = pattern.iter().max().map_or(0, |m| m + 1);
            if size > n {
                continue;
            }
            for s in all_members(spec, size, &pattern, limits.node_budget)? {
                let (code, s) = canonical(&s);
                seeds[size].insert(code, s);
            }
        }
    }
    let mut levels: Vec<Vec<CatalogModel>> = Vec::with_capacity(n + 1);
    for size in 0..=n {
        let mut found = std::mem::take(&mut seeds[size]);
        if size > 0 {
            let prev: Vec<&Structure> = levels[size - 1].iter().map(|m| &m.structure).collect();
            let batches = par_map(&prev, limits.workers, |s| -> Result<Vec<(CanonicalCode, Structure)>> {
                Ok(one_point_extensions(spec, s, limits.node_budget)?.iter().map(canonical).collect())
            });
            for batch in batches {
                for (code, s) in batch? {
                    found.entry(code).or_insert(s);
                    if found.len() > limits.model_cap {
                        return Err(Error::ResourceLimit { what: "models per size", limit: limits.model_cap as u64 });
                    }
                }
            }
        }
        levels.push(found.into_iter().map(|(code, structure)| CatalogModel { structure, code }).collect());
    }
    Ok(ModelCatalog { spec: spec.clone(), max_size: n, levels })
}
