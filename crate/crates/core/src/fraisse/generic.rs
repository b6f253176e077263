//! Extension demands, the extension property, and growth of generic
//! approximants by repeated amalgamation.

use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::complete::{for_each_amalgam, Amalgam, MaskOrder};
use super::models::ModelCatalog;
use super::spec::ClassSpec;
use super::Verdict;
use crate::canon::CanonicalCode;
use crate::embedding::EmbeddingSearch;
use crate::error::{Error, Result};
use crate::limits::SearchLimits;
use crate::structure::Structure;

/// "Every copy of `B0` inside `M` extends to a copy of `B`": one instance,
/// given by the image of `B0`'s elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demand {
    pub b: Structure,
    /// Elements of `b` forming `B0`, increasing.
    pub b0: Vec<usize>,
    /// Image of `b0[i]` in the host.
    pub image: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub verdict: Verdict,
    pub bound: usize,
    pub demands_checked: u64,
    pub failure: Option<Demand>,
}

/// A pair `B0 ⊊ B` from the catalog, with `B0` containing the constants.
struct DemandShape<'a> {
    b: &'a Structure,
    code: &'a CanonicalCode,
    b0: Vec<usize>,
    b0_structure: Structure,
}

fn shapes(catalog: &ModelCatalog, m: usize) -> Vec<DemandShape<'_>> {
    let mut out = Vec::new();
    for model in catalog.up_to(m) {
        let b = &model.structure;
        for mask in 0u64..(1 << b.size()) - 1 {
            let b0: Vec<usize> = (0..b.size()).filter(|x| mask >> x & 1 == 1).collect();
            if b.constants().iter().any(|c| !b0.contains(c)) {
                continue;
            }
            let b0_structure = b.restrict(&b0);
            out.push(DemandShape { b, code: &model.code, b0, b0_structure });
        }
    }
    out
}

/// Unrealized demands of each shape, keyed by (shape, image).
fn unrealized(shapes: &[DemandShape<'_>], host: &Structure) -> Result<(u64, Vec<(usize, Vec<usize>)>)> {
    let mut total = 0;
    let mut missing = Vec::new();
    for (si, shape) in shapes.iter().enumerate() {
        let mut realized = BTreeSet::new();
        EmbeddingSearch::new(shape.b, host)?.for_each(|e| {
            realized.insert(shape.b0.iter().map(|&x| e[x]).collect::<Vec<_>>());
            ControlFlow::Continue(())
        });
        EmbeddingSearch::new(&shape.b0_structure, host)?.for_each(|e| {
            total += 1;
            if !realized.contains(e) {
                missing.push((si, e.to_vec()));
            }
            ControlFlow::Continue(())
        });
    }
    Ok((total, missing))
}

/// Checks that every embedding of `B0` into `host` extends to `B`, for all
/// `B0 ⊊ B` with `B` a member of size at most `m`.
pub fn check_extension_property(catalog: &ModelCatalog, host: &Structure, m: usize) -> Result<ExtensionReport> {
    if catalog.max_size() < m {
        return Err(Error::InvalidArgument(format!(
            "catalog reaches size {} but the demand bound is {m}",
            catalog.max_size()
        )));
    }
    let shapes = shapes(catalog, m);
    let (total, missing) = unrealized(&shapes, host)?;
    let failure = missing.into_iter().next().map(|(si, image)| Demand {
        b: shapes[si].b.clone(),
        b0: shapes[si].b0.clone(),
        image,
    });
    Ok(ExtensionReport {
        verdict: if failure.is_none() { Verdict::Pass } else { Verdict::Fail },
        bound: m,
        demands_checked: total,
        failure,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthOptions {
    /// Largest `|B|` among the demands.
    pub demand_cap: usize,
    /// Amalgams tried per step; the one leaving fewest demands open wins.
    pub candidates: usize,
    pub limits: SearchLimits,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions { demand_cap: 2, candidates: 64, limits: SearchLimits::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthStage {
    pub size: usize,
    pub realized: u64,
    pub unrealized: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub structure: Structure,
    pub stages: Vec<GrowthStage>,
}

/// Grows a member of size at most `budget` by realizing extension demands
/// one at a time, oldest first.
///
/// Each demand gets a queue key when first seen: the step it appeared, the
/// code of `B`, and a random tiebreak from `seed`. The chosen demand is
/// amalgamated in with the host's elements kept and new elements appended.
pub fn grow_generic(spec: &ClassSpec, catalog: &ModelCatalog, budget: usize, seed: u64, opts: GrowthOptions) -> Result<GrowthReport> {
    if catalog.max_size() < opts.demand_cap {
        return Err(Error::InvalidArgument("catalog is smaller than the demand cap".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = shapes(catalog, opts.demand_cap);
    let mut host = catalog
        .iter()
        .next()
        .map(|m| m.structure.clone())
        .ok_or_else(|| Error::InvalidArgument(format!("class `{}` has no models", spec.name())))?;
    let mut queue: HashMap<(usize, Vec<usize>), (usize, &CanonicalCode, u64)> = HashMap::new();
    let mut stages = Vec::new();
    for step in 0.. {
        let (total, missing) = unrealized(&shapes, &host)?;
        stages.push(GrowthStage { size: host.size(), realized: total - missing.len() as u64, unrealized: missing.len() as u64 });
        for key in &missing {
            queue.entry(key.clone()).or_insert_with(|| (step, shapes[key.0].code, rng.gen()));
        }
        queue.retain(|k, _| missing.binary_search(k).is_ok());
        let Some(((si, image), _)) = queue.iter().min_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0))) else {
            break;
        };
        let shape = &shapes[*si];
        let image = image.clone();
        let grown = host.size() + shape.b.size() - shape.b0.len();
        if grown > budget {
            break;
        }
        let mut candidates: Vec<Amalgam> = Vec::new();
        let _ = for_each_amalgam(
            spec,
            &host,
            &image,
            shape.b,
            &shape.b0,
            grown,
            opts.limits.node_budget,
            MaskOrder::Shuffled(&mut rng),
            |a| {
                candidates.push(a);
                if candidates.len() >= opts.candidates {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            },
        )?;
        let mut best: Option<(usize, Structure)> = None;
        for a in candidates {
            let next = keep_host_labels(&a, host.size());
            let open = unrealized(&shapes, &next)?.1.len();
            if best.as_ref().is_none_or(|(o, _)| open < *o) {
                best = Some((open, next));
            }
        }
        host = match best {
            Some((_, s)) => s,
            None => {
                return Err(Error::ApFailure(format!(
                    "no amalgam realizes a demand of shape |B|={} |B0|={} at host size {}",
                    shape.b.size(),
                    shape.b0.len(),
                    host.size()
                )))
            }
        };
    }
    Ok(GrowthReport { structure: host, stages })
}

/// Relabels an amalgam so that host element `i` stays `i` and the rest follow.
fn keep_host_labels(a: &Amalgam, host_size: usize) -> Structure {
    let n = a.structure.size();
    let mut perm = vec![usize::MAX; n];
    for (x, &y) in a.g1.images().iter().enumerate() {
        perm[y] = x;
    }
    let mut next = host_size;
    for slot in perm.iter_mut().filter(|p| **p == usize::MAX) {
        *slot = next;
        next += 1;
    }
    a.structure.relabel(&perm)
}
