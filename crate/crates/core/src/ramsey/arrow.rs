use serde::{Deserialize, Serialize};

use super::coloring::{no_monochromatic_edge, Coloring};
use super::hypergraph::{copy_hypergraph, CopyHypergraph};
use crate::error::{Error, Result};
use crate::fraisse::ModelCatalog;
use crate::limits::{par_map, SearchLimits};
use crate::structure::Structure;

/// Depth at which the coloring search is split into independent tasks.
const SPLIT_DEPTH: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowStats {
    pub vertices: usize,
    pub edges: usize,
    pub nodes: u64,
}

/// Outcome of `C -> (B)^A_k`. When it fails, `coloring` has no
/// monochromatic copy of `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowVerdict {
    pub holds: bool,
    pub coloring: Option<Coloring>,
    pub stats: ArrowStats,
}

struct Solver<'h> {
    k: usize,
    order: Vec<usize>,
    incidence: Vec<Vec<usize>>,
    edge_len: Vec<u32>,
    hg: &'h CopyHypergraph,
}

struct State {
    colors: Vec<usize>,
    /// `counts[edge * k + color]`: members of the edge with that color.
    counts: Vec<u32>,
    nodes: u64,
}

const NONE: usize = usize::MAX;

impl<'h> Solver<'h> {
    fn new(hg: &'h CopyHypergraph, k: usize) -> Self {
        let n = hg.vertices.len();
        let mut incidence = vec![Vec::new(); n];
        for (e, edge) in hg.edges.iter().enumerate() {
            for &v in edge {
                incidence[v].push(e);
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| incidence[y].len().cmp(&incidence[x].len()).then(x.cmp(&y)));
        let edge_len = hg.edges.iter().map(|e| e.len() as u32).collect();
        Solver { k, order, incidence, edge_len, hg }
    }

    fn fresh(&self) -> State {
        State {
            colors: vec![NONE; self.hg.vertices.len()],
            counts: vec![0; self.hg.edges.len() * self.k],
            nodes: 0,
        }
    }

    /// Colors `v` with `c` unless that completes a monochromatic edge.
    fn assign(&self, st: &mut State, v: usize, c: usize) -> bool {
        let k = self.k;
        let mut ok = true;
        let mut done = 0;
        for &e in &self.incidence[v] {
            st.counts[e * k + c] += 1;
            done += 1;
            if st.counts[e * k + c] == self.edge_len[e] {
                ok = false;
                break;
            }
        }
        if ok {
            st.colors[v] = c;
        } else {
            for &e in &self.incidence[v][..done] {
                st.counts[e * k + c] -= 1;
            }
        }
        ok
    }

    fn unassign(&self, st: &mut State, v: usize) {
        let c = std::mem::replace(&mut st.colors[v], NONE);
        for &e in &self.incidence[v] {
            st.counts[e * self.k + c] -= 1;
        }
    }

    /// Colors permitted at `depth`: colors are interchangeable, so a vertex
    /// may only open the next unused color.
    fn palette_at(&self, max_used: Option<usize>) -> usize {
        max_used.map_or(1, |m| m + 2).min(self.k)
    }

    fn search(&self, st: &mut State, depth: usize, max_used: Option<usize>, budget: u64) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let v = self.order[depth];
        for c in 0..self.palette_at(max_used) {
            st.nodes += 1;
            if st.nodes > budget {
                return Err(Error::ResourceLimit { what: "coloring search nodes", limit: budget });
            }
            if self.assign(st, v, c) {
                if self.search(st, depth + 1, max_used.max(Some(c)), budget)? {
                    return Ok(true);
                }
                self.unassign(st, v);
            }
        }
        Ok(false)
    }

    /// Consistent color prefixes for the first `depth` vertices, in search
    /// order, with the nodes spent finding them.
    fn prefixes(&self, depth: usize) -> (Vec<Vec<usize>>, u64) {
        let mut out = Vec::new();
        let mut st = self.fresh();
        let mut cur = Vec::new();
        self.collect_prefixes(&mut st, 0, None, depth, &mut cur, &mut out);
        (out, st.nodes)
    }

    fn collect_prefixes(
        &self,
        st: &mut State,
        depth: usize,
        max_used: Option<usize>,
        target: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == target {
            out.push(cur.clone());
            return;
        }
        let v = self.order[depth];
        for c in 0..self.palette_at(max_used) {
            st.nodes += 1;
            if self.assign(st, v, c) {
                cur.push(c);
                self.collect_prefixes(st, depth + 1, max_used.max(Some(c)), target, cur, out);
                cur.pop();
                self.unassign(st, v);
            }
        }
    }

    fn run_task(&self, prefix: &[usize], budget: u64) -> Result<(Option<Vec<usize>>, u64)> {
        let mut st = self.fresh();
        for (depth, &c) in prefix.iter().enumerate() {
            let ok = self.assign(&mut st, self.order[depth], c);
            debug_assert!(ok);
        }
        let max_used = prefix.iter().copied().max();
        let found = self.search(&mut st, prefix.len(), max_used, budget)?;
        Ok((found.then(|| st.colors.clone()), st.nodes))
    }
}

/// Searches for a `k`-coloring of the vertices with no monochromatic edge.
/// The result and node count equal those of a single-threaded run.
pub fn weak_coloring(hg: &CopyHypergraph, k: usize, limits: SearchLimits) -> Result<(Option<Vec<usize>>, u64)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let solver = Solver::new(hg, k);
    let depth = SPLIT_DEPTH.min(solver.order.len());
    let (prefixes, mut nodes) = solver.prefixes(depth);
    let budget = limits.node_budget;
    let outcomes = if limits.workers <= 1 {
        // Serial: stop at the first success, exactly like the parallel reduction.
        let mut out = Vec::new();
        for p in &prefixes {
            let r = solver.run_task(p, budget);
            let stop = matches!(&r, Ok((Some(_), _)) | Err(_));
            out.push(r);
            if stop {
                break;
            }
        }
        out
    } else {
        par_map(&prefixes, limits.workers, |p| solver.run_task(p, budget))
    };
    for outcome in outcomes {
        let (found, used) = outcome?;
        nodes += used;
        if nodes > budget {
            return Err(Error::ResourceLimit { what: "coloring search nodes", limit: budget });
        }
        if let Some(colors) = found {
            return Ok((Some(colors), nodes));
        }
    }
    Ok((None, nodes))
}

/// Decides `C -> (B)^A_k`: it holds iff every `k`-coloring of `hom(A,C)` is
/// constant on `hom(A, e[B])` for some copy `e`. A failing verdict carries a
/// re-verified bad coloring.
pub fn decide_arrow(c: &Structure, b: &Structure, a: &Structure, k: usize, limits: SearchLimits) -> Result<ArrowVerdict> {
    let hg = copy_hypergraph(a, b, c)?;
    decide_on(&hg, a.size(), k, limits)
}

pub(crate) fn decide_on(hg: &CopyHypergraph, a_size: usize, k: usize, limits: SearchLimits) -> Result<ArrowVerdict> {
    let (found, nodes) = weak_coloring(hg, k, limits)?;
    let stats = ArrowStats { vertices: hg.vertices.len(), edges: hg.edges.len(), nodes };
    match found {
        None => Ok(ArrowVerdict { holds: true, coloring: None, stats }),
        Some(colors) => {
            if !no_monochromatic_edge(hg, &colors) {
                return Err(Error::InvalidStructure("coloring search returned a monochromatic edge".into()));
            }
            let coloring = Coloring::from_vertex_colors(hg, a_size, k, &colors);
            Ok(ArrowVerdict { holds: false, coloring: Some(coloring), stats })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessSearch {
    Found { witness: Structure, stats: ArrowStats, candidates_tried: usize },
    NotFoundUpTo { max_size: usize, candidates_tried: usize },
}

/// The first catalog model (size-ascending, then by canonical code) `C`
/// with `C -> (B)^A_k`.
pub fn find_witness(
    catalog: &ModelCatalog,
    a: &Structure,
    b: &Structure,
    k: usize,
    max_size: usize,
    limits: SearchLimits,
) -> Result<WitnessSearch> {
    let mut tried = 0;
    for model in catalog.up_to(max_size) {
        let c = &model.structure;
        if c.size() < b.size() {
            continue;
        }
        tried += 1;
        let verdict = decide_arrow(c, b, a, k, limits)?;
        if verdict.holds {
            return Ok(WitnessSearch::Found { witness: c.clone(), stats: verdict.stats, candidates_tried: tried });
        }
    }
    Ok(WitnessSearch::NotFoundUpTo { max_size, candidates_tried: tried })
}
