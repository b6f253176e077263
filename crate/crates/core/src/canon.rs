//! Canonical labeling by partition refinement plus individualization.
//!
//! The code of a structure is the lexicographically largest relation
//! bitstring over all leaves of the search tree; automorphisms found at
//! equal leaves prune sibling branches lying in the same orbit.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::structure::Structure;

/// Isomorphism-invariant key; ordered first by universe size.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

pub fn canonical_form(s: &Structure) -> CanonicalCode {
    canonical_labeling(s).1
}

/// The canonical relabeling of `s` (isomorphic structures map to equal structures).
pub fn canonical_structure(s: &Structure) -> Structure {
    let (lab, _) = canonical_labeling(s);
    s.relabel(&lab)
}

/// Returns `lab` with `lab[old] = new` and the code of `s.relabel(lab)`.
pub fn canonical_labeling(s: &Structure) -> (Vec<usize>, CanonicalCode) {
    let n = s.size();
    let mut search = Search { s, best: None, generators: Vec::new() };
    let start = initial_partition(s);
    let mut prefix = Vec::new();
    search.explore(start, &mut prefix);
    let (code, lab) = search.best.unwrap_or_else(|| (encode(s, &[]), Vec::new()));
    debug_assert_eq!(lab.len(), n);
    (lab, CanonicalCode(code))
}

type Partition = Vec<Vec<usize>>;

fn initial_partition(s: &Structure) -> Partition {
    let keys: Vec<(Vec<usize>, Vec<bool>)> = (0..s.size())
        .map(|v| {
            let consts = (0..s.constants().len()).filter(|&c| s.constant(c) == v).collect();
            let diag = (0..s.relation_count()).map(|r| s.holds(r, &vec![v; s.arity(r)])).collect();
            (consts, diag)
        })
        .collect();
    if s.size() == 0 {
        return Vec::new();
    }
    split_by(vec![(0..s.size()).collect()], |v| keys[v].clone())
}

/// Splits every cell by `key`, keeping sub-cells in key order.
fn split_by<K: Ord>(partition: Partition, key: impl Fn(usize) -> K) -> Partition {
    let mut out = Vec::with_capacity(partition.len());
    for cell in partition {
        if cell.len() == 1 {
            out.push(cell);
            continue;
        }
        let mut keyed: Vec<(K, usize)> = cell.into_iter().map(|v| (key(v), v)).collect();
        keyed.sort();
        let mut current: Vec<usize> = Vec::new();
        for i in 0..keyed.len() {
            if i > 0 && keyed[i].0 != keyed[i - 1].0 {
                out.push(std::mem::take(&mut current));
            }
            current.push(keyed[i].1);
        }
        out.push(current);
    }
    out
}

fn refine(s: &Structure, mut partition: Partition) -> Partition {
    let n = s.size();
    loop {
        let mut cell_of = vec![0u32; n];
        for (i, cell) in partition.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i as u32;
            }
        }
        let mut sigs: Vec<Vec<(u32, u32, Vec<u32>)>> = vec![Vec::new(); n];
        for rel in 0..s.relation_count() {
            for t in s.tuples(rel) {
                let colors: Vec<u32> = t.iter().map(|&x| cell_of[x]).collect();
                for (pos, &v) in t.iter().enumerate() {
                    if t[..pos].contains(&v) {
                        continue;
                    }
                    let mask = t.iter().enumerate().filter(|(_, &x)| x == v).fold(0u32, |m, (i, _)| m | 1 << i);
                    sigs[v].push((rel as u32, mask, colors.clone()));
                }
            }
        }
        for sig in &mut sigs {
            sig.sort_unstable();
        }
        let before = partition.len();
        partition = split_by(partition, |v| sigs[v].clone());
        if partition.len() == before {
            return partition;
        }
    }
}

fn encode(s: &Structure, lab: &[usize]) -> Vec<u8> {
    let n = s.size();
    let mut out = Vec::new();
    out.extend_from_slice(&(n as u16).to_be_bytes());
    let relabeled = if lab.is_empty() { s.clone() } else { s.relabel(lab) };
    for rel in 0..s.relation_count() {
        let bits = n.pow(s.arity(rel) as u32);
        let words = relabeled.table_words(rel);
        let mut byte = 0u8;
        for i in 0..bits {
            let bit = (words[i >> 6] >> (i & 63)) & 1;
            byte = byte << 1 | bit as u8;
            if i % 8 == 7 {
                out.push(byte);
                byte = 0;
            }
        }
        if bits % 8 != 0 {
            out.push(byte << (8 - bits % 8));
        }
    }
    for &c in relabeled.constants() {
        out.extend_from_slice(&(c as u16).to_be_bytes());
    }
    out
}

struct Search<'a> {
    s: &'a Structure,
    best: Option<(Vec<u8>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn explore(&mut self, partition: Partition, prefix: &mut Vec<usize>) {
        let partition = refine(self.s, partition);
        let Some(target) = partition.iter().position(|c| c.len() > 1) else {
            self.leaf(&partition);
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &partition[target] {
            if !tried.is_empty() && self.same_orbit(prefix, &tried, v) {
                continue;
            }
            tried.push(v);
            let mut child = Vec::with_capacity(partition.len() + 1);
            for (i, cell) in partition.iter().enumerate() {
                if i == target {
                    child.push(vec![v]);
                    child.push(cell.iter().copied().filter(|&x| x != v).collect());
                } else {
                    child.push(cell.clone());
                }
            }
            prefix.push(v);
            self.explore(child, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, partition: &Partition) {
        let mut lab = vec![0; self.s.size()];
        for (i, cell) in partition.iter().enumerate() {
            lab[cell[0]] = i;
        }
        let code = encode(self.s, &lab);
        match self.best.as_ref().map(|(b, _)| code.cmp(b)) {
            None | Some(Ordering::Greater) => self.best = Some((code, lab)),
            Some(Ordering::Equal) => {
                // best^{-1} ∘ lab is an automorphism
                let best = &self.best.as_ref().unwrap().1;
                let mut inv = vec![0; best.len()];
                for (v, &l) in best.iter().enumerate() {
                    inv[l] = v;
                }
                let aut: Vec<usize> = lab.iter().map(|&l| inv[l]).collect();
                if aut.iter().enumerate().any(|(i, &x)| i != x) {
                    self.generators.push(aut);
                }
            }
            Some(Ordering::Less) => {}
        }
    }

    /// Orbit test under the known automorphisms fixing `prefix` pointwise.
    fn same_orbit(&self, prefix: &[usize], tried: &[usize], v: usize) -> bool {
        let n = self.s.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in &self.generators {
            if prefix.iter().any(|&x| g[x] != x) {
                continue;
            }
            for (x, &y) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, v);
        tried.iter().any(|&u| find(&mut parent, u) == root)
    }
}
