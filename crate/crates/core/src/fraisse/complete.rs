//! Relation completion: fill the undetermined tuples of a partially built
//! structure in every way the class allows.
//!
//! Open tuples are grouped by their element set and the groups are assigned
//! in colex order. After a group is assigned, every small subset whose open
//! groups are now all decided is checked against the class's local
//! conditions, so dead branches die early. Full membership is checked at the
//! leaves, after derived relations are recomputed.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::spec::{for_each_subset, ClassSpec};
use crate::embedding::{is_embedding, Embedding};
use crate::error::{Error, Result};
use crate::signature::MAX_ARITY;
use crate::structure::{for_each_tuple, Structure};

/// Open tuples per element set above this many are refused.
const GROUP_BIT_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum PlanKey {
    /// Universe `0..fixed + fresh`; a tuple is open when it touches a fresh element.
    Extend { fixed: usize, fresh: usize },
    /// Universe is `fixed`, then `left`, then `right` elements; a tuple is
    /// open when it touches both a left and a right element.
    Cross { fixed: usize, left: usize, right: usize },
}

impl PlanKey {
    fn size(self) -> usize {
        match self {
            PlanKey::Extend { fixed, fresh } => fixed + fresh,
            PlanKey::Cross { fixed, left, right } => fixed + left + right,
        }
    }

    fn is_open(self, elems: &[usize]) -> bool {
        match self {
            PlanKey::Extend { fixed, .. } => elems.iter().any(|&x| x >= fixed),
            PlanKey::Cross { fixed, left, .. } => {
                elems.iter().any(|&x| x >= fixed && x < fixed + left)
                    && elems.iter().any(|&x| x >= fixed + left)
            }
        }
    }
}

struct Group {
    tuples: Vec<(usize, Vec<usize>)>,
    checks: Vec<Check>,
}

/// A subset to test, with the table positions of its labeled pattern when
/// the pattern tables cover its size.
struct Check {
    elems: Vec<usize>,
    pattern: Option<Vec<(usize, usize)>>,
}

impl Check {
    fn new(spec: &ClassSpec, n: usize, elems: Vec<usize>) -> Check {
        let pattern = (elems.len() <= spec.pattern_width()).then(|| {
            let mut bits = Vec::new();
            for (rel, sym) in spec.signature().relations.iter().enumerate() {
                for_each_tuple(elems.len(), sym.arity, |t| {
                    bits.push((rel, t.iter().fold(0, |a, &i| a * n + elems[i])));
                });
            }
            bits
        });
        Check { elems, pattern }
    }
}

pub(crate) struct Plan {
    groups: Vec<Group>,
}

impl Plan {
    fn build(spec: &ClassSpec, key: PlanKey) -> Result<Plan> {
        let n = key.size();
        if n > 64 {
            return Err(Error::ResourceLimit { what: "completion universe", limit: 64 });
        }
        let derived = spec.derived_relations();
        let mut by_set: HashMap<u64, Vec<(usize, Vec<usize>)>> = HashMap::new();
        for (rel, sym) in spec.signature().relations.iter().enumerate() {
            if derived.contains(&rel) {
                continue;
            }
            for_each_tuple(n, sym.arity, |t| {
                if key.is_open(t) {
                    let mask = t.iter().fold(0u64, |m, &x| m | 1 << x);
                    by_set.entry(mask).or_default().push((rel, t.to_vec()));
                }
            });
        }
        let mut masks: Vec<u64> = by_set.keys().copied().collect();
        masks.sort_by_key(|&m| colex_key(m));
        let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let width = spec.local_width();
        let mut groups = Vec::with_capacity(masks.len());
        for (g, &mask) in masks.iter().enumerate() {
            let tuples = by_set.remove(&mask).expect("mask comes from the map");
            if tuples.len() > GROUP_BIT_CAP {
                return Err(Error::ResourceLimit {
                    what: "open tuples per element set",
                    limit: GROUP_BIT_CAP as u64,
                });
            }
            let set = elements(mask);
            let rest: Vec<usize> = (0..n).filter(|x| mask >> x & 1 == 0).collect();
            let mut checks = Vec::new();
            for extra in 0..=width.saturating_sub(set.len()) {
                if set.len() > width {
                    break;
                }
                for_each_subset(rest.len(), extra, |pick| {
                    let z = pick.iter().fold(mask, |m, &i| m | 1 << rest[i]);
                    if last_group(z, &index) == Some(g) {
                        checks.push(Check::new(spec, n, elements(z)));
                    }
                    true
                });
            }
            groups.push(Group { tuples, checks });
        }
        Ok(Plan { groups })
    }
}

fn elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|x| mask >> x & 1 == 1).collect()
}

/// Colex order: compare the largest elements first.
fn colex_key(mask: u64) -> Vec<usize> {
    let mut e = elements(mask);
    e.reverse();
    e
}

/// Index of the last-assigned open group inside `z`.
fn last_group(z: u64, index: &HashMap<u64, usize>) -> Option<usize> {
    let mut best = None;
    let mut sub = z;
    while sub != 0 {
        if let Some(&g) = index.get(&sub) {
            best = best.max(Some(g));
        }
        sub = (sub - 1) & z;
    }
    best
}

pub(crate) fn plan_for(spec: &ClassSpec, key: PlanKey) -> Result<Arc<Plan>> {
    if let Some(p) = spec.cache().plans.lock().unwrap().get(&key) {
        return Ok(p.clone());
    }
    let plan = Arc::new(Plan::build(spec, key)?);
    spec.cache().plans.lock().unwrap().insert(key, plan.clone());
    Ok(plan)
}

/// How each group's assignments are ordered.
pub(crate) enum MaskOrder<'r> {
    /// All-true first, then descending as a binary number.
    Descending,
    /// Descending order XORed with a fresh random mask per node.
    Shuffled(&'r mut ChaCha8Rng),
}

struct Run<'a, 'r, F> {
    spec: &'a ClassSpec,
    plan: &'a Plan,
    order: MaskOrder<'r>,
    budget: u64,
    nodes: u64,
    buf: Vec<u64>,
    decided: bool,
    derives: bool,
    visit: F,
}

impl<F: FnMut(&mut Structure) -> ControlFlow<()>> Run<'_, '_, F> {
    /// Same packing as `Structure::pattern_bits`.
    fn check(&mut self, s: &Structure, c: &Check) -> bool {
        if let Some(bits) = &c.pattern {
            self.buf.clear();
            let mut acc = 0u64;
            let mut used = 0;
            for &(rel, index) in bits {
                acc |= (s.bit(rel, index) as u64) << used;
                used += 1;
                if used == 64 {
                    self.buf.push(acc);
                    acc = 0;
                    used = 0;
                }
            }
            self.buf.push(acc);
            if !self.spec.pattern_allowed(c.elems.len(), &self.buf) {
                return false;
            }
        }
        self.spec.checker_local_ok(s, &c.elems)
    }

    fn descend(&mut self, s: &mut Structure, g: usize) -> Result<ControlFlow<()>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceLimit { what: "completion nodes", limit: self.budget });
        }
        if g == self.plan.groups.len() {
            if self.derives {
                // Derived tables must not leak into sibling branches.
                let mut leaf = s.clone();
                self.spec.derive(&mut leaf);
                if self.spec.member_unchecked(&leaf) {
                    return Ok((self.visit)(&mut leaf));
                }
            } else if self.decided || self.spec.member_unchecked(s) {
                return Ok((self.visit)(s));
            }
            return Ok(ControlFlow::Continue(()));
        }
        let group = &self.plan.groups[g];
        let bits = group.tuples.len();
        let full = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        let flip = match &mut self.order {
            MaskOrder::Descending => 0,
            MaskOrder::Shuffled(rng) => rng.gen::<u64>() & full,
        };
        let mut step = full;
        loop {
            let mask = step ^ flip;
            for (bit, (rel, t)) in group.tuples.iter().enumerate() {
                s.set(*rel, t, mask >> bit & 1 == 1);
            }
            let ok = group.checks.iter().all(|c| self.check(s, c));
            if ok && self.descend(s, g + 1)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
            if step == 0 {
                break;
            }
            step -= 1;
        }
        for (rel, t) in &group.tuples {
            s.set(*rel, t, false);
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Runs the completion search on `base` (whose non-open tuples are already
/// set), calling `visit` on every member completion. Returns the number of
/// nodes used. Every substructure of `base` spanned by elements whose
/// tuples are all fixed must be a member.
pub(crate) fn complete<F>(
    spec: &ClassSpec,
    base: &mut Structure,
    key: PlanKey,
    order: MaskOrder<'_>,
    budget: u64,
    visit: F,
) -> Result<(ControlFlow<()>, u64)>
where
    F: FnMut(&mut Structure) -> ControlFlow<()>,
{
    let plan = plan_for(spec, key)?;
    let decided = spec.locally_decided();
    let derives = !spec.derived_relations().is_empty();
    let mut run = Run { spec, plan: &plan, order, budget, nodes: 0, buf: Vec::new(), decided, derives, visit };
    let flow = run.descend(base, 0)?;
    Ok((flow, run.nodes))
}

/// All members obtained from `s` by adding one element (the new element is
/// last), in search order. Only valid bases give complete answers: `s` should
/// itself be a member.
pub fn one_point_extensions(spec: &ClassSpec, s: &Structure, budget: u64) -> Result<Vec<Structure>> {
    let mut base = s.grow(1);
    let mut out = Vec::new();
    let _ = complete(spec, &mut base, PlanKey::Extend { fixed: s.size(), fresh: 1 }, MaskOrder::Descending, budget, |b| {
        out.push(b.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Every member over `signature` with universe `0..size` and the given
/// constant interpretation.
pub(crate) fn all_members(spec: &ClassSpec, size: usize, constants: &[usize], budget: u64) -> Result<Vec<Structure>> {
    let mut base = spec.empty_structure(size);
    for (c, &e) in constants.iter().enumerate() {
        base.set_constant(c, e)?;
    }
    let mut out = Vec::new();
    let _ = complete(spec, &mut base, PlanKey::Extend { fixed: 0, fresh: size }, MaskOrder::Descending, budget, |b| {
        out.push(b.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// An amalgam `B` of `left` and `right` over a common part, with the
/// embeddings of both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amalgam {
    pub structure: Structure,
    pub g1: Embedding,
    pub g2: Embedding,
}

/// Search for amalgams of `f1: A0 -> left` and `f2: A0 -> right` of size at
/// most `max_size`. Identification patterns are tried with fewest
/// identifications first, each completed in `order`. Returns the number of
/// nodes used, or an error when the budget runs out.
#[allow(clippy::too_many_arguments)]
pub(crate) fn for_each_amalgam<F>(
    spec: &ClassSpec,
    left: &Structure,
    f1: &[usize],
    right: &Structure,
    f2: &[usize],
    max_size: usize,
    budget: u64,
    mut order: MaskOrder<'_>,
    mut visit: F,
) -> Result<(ControlFlow<()>, u64)>
where
    F: FnMut(Amalgam) -> ControlFlow<()>,
{
    let m = f1.len();
    let left_only: Vec<usize> = (0..left.size()).filter(|x| !f1.contains(x)).collect();
    let right_only: Vec<usize> = (0..right.size()).filter(|x| !f2.contains(x)).collect();
    let free_size = m + left_only.len() + right_only.len();
    let min_ident = free_size.saturating_sub(max_size);
    let max_ident = left_only.len().min(right_only.len());
    let mut used = 0u64;
    for r in min_ident..=max_ident {
        let mut flow = ControlFlow::Continue(());
        let mut failure = None;
        for_each_subset(left_only.len(), r, |lpick| {
            for_each_arrangement(right_only.len(), r, |rpick| {
                let pairs: Vec<(usize, usize)> =
                    lpick.iter().zip(rpick).map(|(&i, &j)| (left_only[i], right_only[j])).collect();
                match try_matching(spec, left, f1, right, f2, &pairs, budget - used, &mut order, &mut visit) {
                    Ok((f, n)) => {
                        used += n;
                        flow = f;
                        flow.is_continue()
                    }
                    Err(e) => {
                        failure = Some(e);
                        false
                    }
                }
            });
            failure.is_none() && flow.is_continue()
        });
        if let Some(e) = failure {
            return Err(match e {
                Error::ResourceLimit { what, .. } => Error::ResourceLimit { what, limit: budget },
                other => other,
            });
        }
        if flow.is_break() {
            return Ok((flow, used));
        }
    }
    Ok((ControlFlow::Continue(()), used))
}

/// Calls `f` on every injective sequence of length `k` over `0..n`, in
/// lexicographic order, until it returns false.
fn for_each_arrangement(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                let go_on = go(n, k, cur, used, f);
                cur.pop();
                used[x] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
    if k <= n {
        go(n, k, &mut Vec::with_capacity(k), &mut vec![false; n], &mut f);
    }
}

#[allow(clippy::too_many_arguments)]
fn try_matching<F>(
    spec: &ClassSpec,
    left: &Structure,
    f1: &[usize],
    right: &Structure,
    f2: &[usize],
    pairs: &[(usize, usize)],
    budget: u64,
    order: &mut MaskOrder<'_>,
    visit: &mut F,
) -> Result<(ControlFlow<()>, u64)>
where
    F: FnMut(Amalgam) -> ControlFlow<()>,
{
    let m = f1.len();
    let fixed = m + pairs.len();
    let mut g1 = vec![usize::MAX; left.size()];
    let mut g2 = vec![usize::MAX; right.size()];
    for (j, (&a, &b)) in f1.iter().zip(f2).enumerate() {
        g1[a] = j;
        g2[b] = j;
    }
    for (i, &(a, b)) in pairs.iter().enumerate() {
        g1[a] = m + i;
        g2[b] = m + i;
    }
    let mut next = fixed;
    for slot in g1.iter_mut().filter(|x| **x == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let left_count = next - fixed;
    for slot in g2.iter_mut().filter(|x| **x == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let size = next;
    // The shared part must look the same from both sides.
    let mut inv1 = vec![usize::MAX; size];
    let mut inv2 = vec![usize::MAX; size];
    for (x, &y) in g1.iter().enumerate() {
        inv1[y] = x;
    }
    for (x, &y) in g2.iter().enumerate() {
        inv2[y] = x;
    }
    let mut agree = true;
    let (mut ta, mut tb) = (Vec::new(), Vec::new());
    for rel in 0..left.relation_count() {
        for_each_tuple(fixed, left.arity(rel), |t| {
            ta.clear();
            tb.clear();
            ta.extend(t.iter().map(|&x| inv1[x]));
            tb.extend(t.iter().map(|&x| inv2[x]));
            agree &= left.holds(rel, &ta) == right.holds(rel, &tb);
        });
    }
    if !agree || (0..left.constants().len()).any(|c| g1[left.constant(c)] != g2[right.constant(c)]) {
        return Ok((ControlFlow::Continue(()), 0));
    }
    let mut base = Structure::new(left.signature().clone(), size);
    let mut image = [0usize; MAX_ARITY];
    for (src, g) in [(left, &g1), (right, &g2)] {
        for rel in 0..src.relation_count() {
            let arity = src.arity(rel);
            for_each_tuple(src.size(), arity, |t| {
                if src.holds(rel, t) {
                    for (slot, &x) in image.iter_mut().zip(t) {
                        *slot = g[x];
                    }
                    base.set(rel, &image[..arity], true);
                }
            });
        }
    }
    for (c, &e) in left.constants().iter().enumerate() {
        base.set_constant(c, g1[e])?;
    }
    let key = PlanKey::Cross { fixed, left: left_count, right: size - fixed - left_count };
    let derived = !spec.derived_relations().is_empty();
    let order = match order {
        MaskOrder::Descending => MaskOrder::Descending,
        MaskOrder::Shuffled(rng) => MaskOrder::Shuffled(rng),
    };
    complete(spec, &mut base, key, order, budget, |b| {
        if derived && !(is_embedding(left, b, &g1) && is_embedding(right, b, &g2)) {
            return ControlFlow::Continue(());
        }
        visit(Amalgam { structure: b.clone(), g1: Embedding::new(g1.clone()), g2: Embedding::new(g2.clone()) })
    })
}

/// The first amalgam in search order, if any exists within `max_size`.
pub fn find_amalgam(
    spec: &ClassSpec,
    left: &Structure,
    f1: &[usize],
    right: &Structure,
    f2: &[usize],
    max_size: usize,
    budget: u64,
) -> Result<Option<Amalgam>> {
    let mut found = None;
    let _ = for_each_amalgam(spec, left, f1, right, f2, max_size, budget, MaskOrder::Descending, |a| {
        found = Some(a);
        ControlFlow::Break(())
    })?;
    Ok(found)
}
