//! Definable linear orders as unions of irreflexive 2-types, and
//! monochromatic sub-sequences for the pair-type coloring.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraisse::{ModelCatalog, Verdict};
use crate::limits::{par_map, SearchLimits};
use crate::structure::Structure;
use crate::types::{qf_type_unchecked, QfType};

/// Largest type set whose subsets are searched exhaustively.
pub const MAX_ORDER_TYPES: usize = 20;

/// Arity-2 atomic types with distinct coordinates realized in models of
/// size at most `n`, sorted.
pub fn irreflexive_two_types(catalog: &ModelCatalog, n: usize) -> Result<Vec<QfType>> {
    check_bound(catalog, n)?;
    let mut seen = BTreeSet::new();
    for model in catalog.up_to(n) {
        let s = &model.structure;
        for x in 0..s.size() {
            for y in 0..s.size() {
                if x != y {
                    seen.insert(qf_type_unchecked(s, &[x, y]));
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn check_bound(catalog: &ModelCatalog, n: usize) -> Result<()> {
    if n > catalog.max_size() {
        return Err(Error::InvalidArgument(format!(
            "bound {n} exceeds catalog size {}",
            catalog.max_size()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub structure: Structure,
    pub elements: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeOrderReport {
    pub pair_type: QfType,
    pub bound: usize,
    pub antisymmetry: Verdict,
    /// A model with `p(x,y)` and `p(y,x)`.
    pub antisymmetry_witness: Option<PairWitness>,
    pub acyclicity: Verdict,
    /// A model with `p(x,y)`, `p(y,z)` and `p(z,x)`.
    pub acyclicity_witness: Option<PairWitness>,
}

/// Looks for models of size at most `n` realizing `p` in both directions on
/// one pair, or around a 3-cycle.
pub fn check_type_order_axioms(p: &QfType, catalog: &ModelCatalog, n: usize) -> Result<TypeOrderReport> {
    check_bound(catalog, n)?;
    if p.arity() != 2 {
        return Err(Error::InvalidArgument(format!("expected a 2-type, got arity {}", p.arity())));
    }
    let mut symmetric = None;
    let mut cycle = None;
    for model in catalog.up_to(n) {
        if symmetric.is_some() && cycle.is_some() {
            break;
        }
        let s = &model.structure;
        let m = s.size();
        let rel: Vec<Vec<bool>> =
            (0..m).map(|x| (0..m).map(|y| x != y && qf_type_unchecked(s, &[x, y]) == *p).collect()).collect();
        let witness = |elements: Vec<usize>| Some(PairWitness { structure: s.clone(), elements });
        if symmetric.is_none() {
            if let Some((x, y)) = pairs(m).find(|&(x, y)| rel[x][y] && rel[y][x]) {
                symmetric = witness(vec![x, y]);
            }
        }
        if cycle.is_none() {
            'search: for x in 0..m {
                for y in 0..m {
                    for z in 0..m {
                        if rel[x][y] && rel[y][z] && rel[z][x] {
                            cycle = witness(vec![x, y, z]);
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    Ok(TypeOrderReport {
        pair_type: p.clone(),
        bound: n,
        antisymmetry: Verdict::from_bool(symmetric.is_none()),
        antisymmetry_witness: symmetric,
        acyclicity: Verdict::from_bool(cycle.is_none()),
        acyclicity_witness: cycle,
    })
}

fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |x| (x + 1..m).map(move |y| (x, y)))
}

/// A set `W` of irreflexive 2-types whose union defines a strict linear
/// order on every catalog model up to `verified_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCandidate {
    pub types: Vec<QfType>,
    pub class: String,
    pub verified_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub class: String,
    pub bound: usize,
    pub irreflexive_types: Vec<QfType>,
    pub candidates: Vec<OrderCandidate>,
}

/// Per model, the index in `types` of the type of each ordered pair.
struct TypeGrid {
    size: usize,
    cells: Vec<usize>,
}

impl TypeGrid {
    fn at(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.size + y]
    }

    fn is_order(&self, mask: u32) -> bool {
        let n = self.size;
        let lt = |x: usize, y: usize| mask >> self.at(x, y) & 1 == 1;
        for (x, y) in pairs(n) {
            if lt(x, y) == lt(y, x) {
                return false;
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x == y || !lt(x, y) {
                    continue;
                }
                for z in 0..n {
                    if z != x && z != y && lt(y, z) && !lt(x, z) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Every `W` among the irreflexive 2-types such that `<_W` strictly and
/// linearly orders every catalog model of size at most `n`. Sorted by `|W|`,
/// then by the sorted type lists.
pub fn find_order_types(catalog: &ModelCatalog, n: usize, limits: SearchLimits) -> Result<OrderReport> {
    let types = irreflexive_two_types(catalog, n)?;
    if types.len() > MAX_ORDER_TYPES {
        return Err(Error::ResourceLimit { what: "irreflexive 2-types", limit: MAX_ORDER_TYPES as u64 });
    }
    let mut grids: Vec<TypeGrid> = catalog
        .up_to(n)
        .filter(|m| m.structure.size() >= 2)
        .map(|m| {
            let s = &m.structure;
            let size = s.size();
            let mut cells = vec![usize::MAX; size * size];
            for x in 0..size {
                for y in 0..size {
                    if x != y {
                        let p = qf_type_unchecked(s, &[x, y]);
                        cells[x * size + y] = types.binary_search(&p).expect("type was collected");
                    }
                }
            }
            TypeGrid { size, cells }
        })
        .collect();
    // Small models refute most sets fastest.
    grids.sort_by_key(|g| g.size);
    let masks: Vec<u32> = (0..1u32 << types.len()).collect();
    let chunk = masks.len().div_ceil(limits.workers.max(1) * 8).max(1);
    let chunks: Vec<&[u32]> = masks.chunks(chunk).collect();
    let survivors = par_map(&chunks, limits.workers, |ms| {
        ms.iter().copied().filter(|&mask| grids.iter().all(|g| g.is_order(mask))).collect::<Vec<u32>>()
    });
    let class = catalog.spec().name().to_string();
    let mut candidates: Vec<OrderCandidate> = survivors
        .into_iter()
        .flatten()
        .map(|mask| OrderCandidate {
            types: (0..types.len()).filter(|&i| mask >> i & 1 == 1).map(|i| types[i].clone()).collect(),
            class: class.clone(),
            verified_bound: n,
        })
        .collect();
    candidates.sort_by(|a, b| a.types.len().cmp(&b.types.len()).then_with(|| a.types.cmp(&b.types)));
    Ok(OrderReport { class, bound: n, irreflexive_types: types, candidates })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonochromaticSet {
    /// The common type of increasing pairs; `None` when fewer than two
    /// elements were asked for.
    pub pair_type: Option<QfType>,
    pub elements: Vec<usize>,
}

/// The first sub-sequence of `xs` (lexicographic by positions) of length
/// `target` whose increasing pairs all realize one atomic 2-type.
pub fn find_monochromatic_2type(m: &Structure, xs: &[usize], target: usize) -> Result<Option<MonochromaticSet>> {
    let mut seen = BTreeSet::new();
    for &x in xs {
        if x >= m.size() {
            return Err(Error::OutOfRange { element: x, size: m.size() });
        }
        if !seen.insert(x) {
            return Err(Error::InvalidArgument(format!("element {x} is listed twice")));
        }
    }
    if target > xs.len() {
        return Ok(None);
    }
    if target <= 1 {
        return Ok(Some(MonochromaticSet { pair_type: None, elements: xs[..target].to_vec() }));
    }
    let len = xs.len();
    let grid: Vec<Vec<Option<QfType>>> = (0..len)
        .map(|i| (0..len).map(|j| (i < j).then(|| qf_type_unchecked(m, &[xs[i], xs[j]]))).collect())
        .collect();
    let mut chosen = Vec::with_capacity(target);
    for first in 0..len {
        for second in first + 1..len {
            let p = grid[first][second].as_ref().expect("i < j");
            chosen.clear();
            chosen.extend([first, second]);
            if extend(&grid, p, &mut chosen, target) {
                return Ok(Some(MonochromaticSet {
                    pair_type: Some(p.clone()),
                    elements: chosen.iter().map(|&i| xs[i]).collect(),
                }));
            }
        }
    }
    Ok(None)
}

fn extend(grid: &[Vec<Option<QfType>>], p: &QfType, chosen: &mut Vec<usize>, target: usize) -> bool {
    if chosen.len() == target {
        return true;
    }
    let last = *chosen.last().expect("nonempty");
    for next in last + 1..grid.len() {
        if chosen.iter().all(|&i| grid[i][next].as_ref() == Some(p)) {
            chosen.push(next);
            if extend(grid, p, chosen, target) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}
