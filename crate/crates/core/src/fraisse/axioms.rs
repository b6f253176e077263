//! Bounded checks of the hereditary, joint-embedding and amalgamation
//! properties, each returning a replayable certificate on failure.

use serde::{Deserialize, Serialize};

use super::complete::{find_amalgam, one_point_extensions};
use super::models::ModelCatalog;
use super::spec::{for_each_subset, ClassSpec};
use super::Verdict;
use crate::embedding::{is_embedding, Embedding, EmbeddingSearch};
use crate::error::{Error, Result};
use crate::limits::{par_map, SearchLimits};
use crate::structure::Structure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpFailure {
    pub model: Structure,
    /// Elements of `model` not contained in any member substructure.
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpReport {
    pub verdict: Verdict,
    pub bound: usize,
    pub checked: u64,
    pub failure: Option<HpFailure>,
}

/// Does some member substructure of `model` contain `subset`?
pub fn hp_witness(spec: &ClassSpec, model: &Structure, subset: &[usize]) -> Option<Vec<usize>> {
    let n = model.size();
    let mut required: Vec<usize> = subset.iter().chain(model.constants()).copied().collect();
    required.sort_unstable();
    required.dedup();
    let rest: Vec<usize> = (0..n).filter(|x| required.binary_search(x).is_err()).collect();
    for extra in 0..=rest.len() {
        let mut found = None;
        for_each_subset(rest.len(), extra, |pick| {
            let mut z: Vec<usize> = required.iter().copied().chain(pick.iter().map(|&i| rest[i])).collect();
            z.sort_unstable();
            if spec.member_unchecked(&model.restrict(&z)) {
                found = Some(z);
            }
            found.is_none()
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

pub fn check_hp(catalog: &ModelCatalog, n: usize) -> Result<HpReport> {
    let spec = catalog.spec();
    let mut checked = 0;
    for model in catalog.up_to(n) {
        let b = &model.structure;
        for mask in 0u64..1 << b.size() {
            let subset: Vec<usize> = (0..b.size()).filter(|x| mask >> x & 1 == 1).collect();
            checked += 1;
            if hp_witness(spec, b, &subset).is_none() {
                return Ok(HpReport {
                    verdict: Verdict::Fail,
                    bound: n,
                    checked,
                    failure: Some(HpFailure { model: b.clone(), subset }),
                });
            }
        }
    }
    Ok(HpReport { verdict: Verdict::Pass, bound: n, checked, failure: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JepFailure {
    pub a1: Structure,
    pub a2: Structure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JepReport {
    pub verdict: Verdict,
    pub bound: usize,
    pub amalgam_bound: usize,
    pub checked: u64,
    pub failure: Option<JepFailure>,
}

/// Elements interpreting constants, deduplicated in constant order, and the
/// pattern of which constants coincide.
fn constant_core(s: &Structure) -> (Vec<usize>, Vec<usize>) {
    let mut elems: Vec<usize> = Vec::new();
    let mut pattern = Vec::new();
    for &e in s.constants() {
        let i = elems.iter().position(|&x| x == e).unwrap_or_else(|| {
            elems.push(e);
            elems.len() - 1
        });
        pattern.push(i);
    }
    (elems, pattern)
}

/// Searches for a member of size at most `bound` into which both embed,
/// fixing the constants.
pub fn joint_embedding(
    spec: &ClassSpec,
    a1: &Structure,
    a2: &Structure,
    bound: usize,
    budget: u64,
) -> Result<Option<super::Amalgam>> {
    let (f1, p1) = constant_core(a1);
    let (f2, p2) = constant_core(a2);
    if p1 != p2 {
        return Ok(None);
    }
    find_amalgam(spec, a1, &f1, a2, &f2, bound, budget)
}

pub fn check_jep(catalog: &ModelCatalog, n: usize, amalgam_bound: usize, limits: SearchLimits) -> Result<JepReport> {
    let spec = catalog.spec();
    let models: Vec<&Structure> = catalog.up_to(n).map(|m| &m.structure).collect();
    let rows: Vec<usize> = (0..models.len()).collect();
    let results = par_map(&rows, limits.workers, |&i| -> Result<(u64, Option<usize>)> {
        let mut checked = 0;
        for j in i..models.len() {
            checked += 1;
            if joint_embedding(spec, models[i], models[j], amalgam_bound, limits.node_budget)?.is_none() {
                return Ok((checked, Some(j)));
            }
        }
        Ok((checked, None))
    });
    let mut checked = 0;
    for (i, r) in results.into_iter().enumerate() {
        let (c, fail) = r?;
        checked += c;
        if let Some(j) = fail {
            return Ok(JepReport {
                verdict: Verdict::Fail,
                bound: n,
                amalgam_bound,
                checked,
                failure: Some(JepFailure { a1: models[i].clone(), a2: models[j].clone() }),
            });
        }
    }
    Ok(JepReport { verdict: Verdict::Pass, bound: n, amalgam_bound, checked, failure: None })
}

/// Which triples `A0 -> A1, A0 -> A2` the amalgamation check visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApMode {
    /// Both sides are one-point extensions of `A0`; the amalgam may add at
    /// most the two new points. For hereditary classes this is the usual
    /// reduction of amalgamation to one-point steps.
    OnePoint,
    /// Every pair of embeddings out of every `A0`, amalgam bound
    /// `|A1| + |A2| - |A0|`.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApFailureWitness {
    pub a0: Structure,
    pub a1: Structure,
    pub f1: Embedding,
    pub a2: Structure,
    pub f2: Embedding,
    pub amalgam_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApCertificate {
    pub verdict: Verdict,
    pub mode: ApMode,
    pub bound: usize,
    pub checked: u64,
    pub failure: Option<ApFailureWitness>,
}

impl ApFailureWitness {
    /// Re-runs the amalgam search on the triple. `Ok(true)` means the failure
    /// is reproduced; malformed witnesses are errors.
    pub fn replay(&self, spec: &ClassSpec, budget: u64) -> Result<bool> {
        for s in [&self.a0, &self.a1, &self.a2] {
            if !spec.is_member(s)? {
                return Err(Error::InvalidArgument("certificate structure is not a member".into()));
            }
        }
        if !is_embedding(&self.a0, &self.a1, self.f1.images()) || !is_embedding(&self.a0, &self.a2, self.f2.images()) {
            return Err(Error::InvalidArgument("certificate maps are not embeddings".into()));
        }
        let found = find_amalgam(spec, &self.a1, self.f1.images(), &self.a2, self.f2.images(), self.amalgam_bound, budget)?;
        Ok(found.is_none())
    }
}

pub fn default_ap_mode(spec: &ClassSpec) -> ApMode {
    if spec.is_universal() {
        ApMode::OnePoint
    } else {
        ApMode::Exhaustive
    }
}

pub fn check_ap(catalog: &ModelCatalog, n: usize, mode: ApMode, limits: SearchLimits) -> Result<ApCertificate> {
    let spec = catalog.spec();
    let bases: Vec<&Structure> = catalog.up_to(n.saturating_sub(1)).map(|m| &m.structure).collect();
    let per_base = par_map(&bases, limits.workers, |a0| -> Result<(u64, Option<ApFailureWitness>)> {
        match mode {
            ApMode::OnePoint => ap_one_point(spec, a0, limits.node_budget),
            ApMode::Exhaustive => ap_exhaustive(catalog, a0, n, limits.node_budget),
        }
    });
    let mut checked = 0;
    for r in per_base {
        let (c, failure) = r?;
        checked += c;
        if failure.is_some() {
            return Ok(ApCertificate { verdict: Verdict::Fail, mode, bound: n, checked, failure });
        }
    }
    Ok(ApCertificate { verdict: Verdict::Pass, mode, bound: n, checked, failure: None })
}

fn ap_one_point(spec: &ClassSpec, a0: &Structure, budget: u64) -> Result<(u64, Option<ApFailureWitness>)> {
    let exts = one_point_extensions(spec, a0, budget)?;
    let id: Vec<usize> = (0..a0.size()).collect();
    let bound = a0.size() + 2;
    let mut checked = 0;
    for i in 0..exts.len() {
        for j in i + 1..exts.len() {
            checked += 1;
            if find_amalgam(spec, &exts[i], &id, &exts[j], &id, bound, budget)?.is_none() {
                return Ok((
                    checked,
                    Some(ApFailureWitness {
                        a0: a0.clone(),
                        a1: exts[i].clone(),
                        f1: Embedding::new(id.clone()),
                        a2: exts[j].clone(),
                        f2: Embedding::new(id),
                        amalgam_bound: bound,
                    }),
                ));
            }
        }
    }
    Ok((checked, None))
}

fn ap_exhaustive(catalog: &ModelCatalog, a0: &Structure, n: usize, budget: u64) -> Result<(u64, Option<ApFailureWitness>)> {
    let spec = catalog.spec();
    let mut arrows: Vec<(&Structure, Embedding)> = Vec::new();
    for model in catalog.up_to(n).filter(|m| m.structure.size() > a0.size()) {
        for f in EmbeddingSearch::new(a0, &model.structure)?.collect() {
            arrows.push((&model.structure, f));
        }
    }
    let mut checked = 0;
    for i in 0..arrows.len() {
        for j in i..arrows.len() {
            let (a1, f1) = &arrows[i];
            let (a2, f2) = &arrows[j];
            let bound = a1.size() + a2.size() - a0.size();
            checked += 1;
            if find_amalgam(spec, a1, f1.images(), a2, f2.images(), bound, budget)?.is_none() {
                let failure = ApFailureWitness {
                    a0: a0.clone(),
                    a1: (*a1).clone(),
                    f1: f1.clone(),
                    a2: (*a2).clone(),
                    f2: f2.clone(),
                    amalgam_bound: bound,
                };
                return Ok((checked, Some(failure)));
            }
        }
    }
    Ok((checked, None))
}
