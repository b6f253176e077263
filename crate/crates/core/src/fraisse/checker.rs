use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::structure::Structure;

/// Built-in semantic predicates for classes that are not closed under
/// substructures. The set is closed; unknown names fail to load.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Checker {
    /// Ordered meet-trees over `<`, `T` (strict ancestor), `R` (meet of an
    /// incomparable pair) and `B` (the `[x1,x2 || x3]` arrangement relation),
    /// rooted at the constant `0`.
    TreeMeetTotal,
}

/// Resolved relation indices for the tree checker.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TreeSymbols {
    lt: usize,
    anc: usize,
    meet: usize,
    arr: usize,
    root: usize,
}

impl Checker {
    pub const NAMES: [&'static str; 1] = ["tree-meet-total"];

    pub fn name(self) -> &'static str {
        match self {
            Checker::TreeMeetTotal => "tree-meet-total",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "tree-meet-total" => Ok(Checker::TreeMeetTotal),
            other => Err(Error::UnknownChecker(other.to_string())),
        }
    }

    pub(crate) fn symbols(self, sig: &Signature) -> Result<TreeSymbols> {
        let rel = |name: &str, arity: usize| {
            sig.relation_index(name)
                .filter(|&i| sig.relations[i].arity == arity)
                .ok_or_else(|| {
                    Error::SignatureMismatch(format!(
                        "checker `{}` needs relation `{name}` of arity {arity}",
                        self.name()
                    ))
                })
        };
        Ok(TreeSymbols {
            lt: rel("<", 2)?,
            anc: rel("T", 2)?,
            meet: rel("R", 3)?,
            arr: rel("B", 3)?,
            root: sig.constant_index("0").ok_or_else(|| {
                Error::SignatureMismatch(format!("checker `{}` needs constant `0`", self.name()))
            })?,
        })
    }

    /// Relations whose tables the checker computes from the others.
    pub(crate) fn derived_relations(self, sig: &Signature) -> Vec<usize> {
        match self.symbols(sig) {
            Ok(s) => vec![s.meet, s.arr],
            Err(_) => Vec::new(),
        }
    }

    /// Largest subset size on which `local_ok` says anything.
    pub(crate) fn local_width(self) -> usize {
        4
    }

    /// Axioms on the base relations that only mention the elements of
    /// `elems`. A structure passes on every small subset iff its base part
    /// is a rooted tree order refined by a linear order.
    pub(crate) fn local_ok(self, s: &Structure, elems: &[usize]) -> bool {
        let Ok(sym) = self.symbols(s.signature()) else { return false };
        local_tree_ok(s, &sym, elems)
    }

    /// Overwrites the derived tables from the base relations.
    pub(crate) fn derive(self, s: &mut Structure) {
        let Ok(sym) = self.symbols(s.signature()) else { return };
        let (meet_tab, arr_tab) = derived_tables(s, &sym);
        let n = s.size();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let i = (x * n + y) * n + z;
                    s.set(sym.meet, &[x, y, z], meet_tab[i]);
                    s.set(sym.arr, &[x, y, z], arr_tab[i]);
                }
            }
        }
    }

    pub(crate) fn accepts(self, s: &Structure) -> bool {
        let Ok(sym) = self.symbols(s.signature()) else { return false };
        let n = s.size();
        if n == 0 {
            return false;
        }
        let all: Vec<usize> = (0..n).collect();
        if !local_tree_ok(s, &sym, &all) {
            return false;
        }
        let (meet_tab, arr_tab) = derived_tables(s, &sym);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let i = (x * n + y) * n + z;
                    if s.holds(sym.meet, &[x, y, z]) != meet_tab[i]
                        || s.holds(sym.arr, &[x, y, z]) != arr_tab[i]
                    {
                        return false;
                    }
                    // [x,y || z] with x < y puts z outside the interval.
                    if arr_tab[i] && s.holds2(sym.lt, x, y) && !(s.holds2(sym.lt, z, x) || s.holds2(sym.lt, y, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn local_tree_ok(s: &Structure, sym: &TreeSymbols, elems: &[usize]) -> bool {
    let lt = |a, b| s.holds2(sym.lt, a, b);
    let anc = |a, b| s.holds2(sym.anc, a, b);
    let root = s.constant(sym.root);
    let below = |v: usize, x: usize| v == x || anc(v, x);
    for &x in elems {
        if lt(x, x) || anc(x, x) {
            return false;
        }
    }
    for &x in elems {
        for &y in elems {
            if x == y {
                continue;
            }
            if lt(x, y) == lt(y, x) || (anc(x, y) && anc(y, x)) || (anc(x, y) && !lt(x, y)) {
                return false;
            }
            if x == root && !anc(x, y) {
                return false;
            }
        }
    }
    for &x in elems {
        for &y in elems {
            for &z in elems {
                if x == y || y == z || x == z {
                    continue;
                }
                if (anc(x, y) && anc(y, z) && !anc(x, z)) || (lt(x, y) && lt(y, z) && !lt(x, z)) {
                    return false;
                }
                // Ancestors of a node are comparable.
                if anc(x, z) && anc(y, z) && !anc(x, y) && !anc(y, x) {
                    return false;
                }
            }
        }
    }
    // Meet tuples already present must stay meets.
    for &x in elems {
        for &y1 in elems {
            for &y2 in elems {
                if !s.holds(sym.meet, &[x, y1, y2]) {
                    continue;
                }
                if y1 == y2 || !below(x, y1) || !below(x, y2) || below(y1, y2) || below(y2, y1) {
                    return false;
                }
                if elems.iter().any(|&z| below(z, y1) && below(z, y2) && !below(z, x)) {
                    return false;
                }
            }
        }
    }
    // Subtrees are <-intervals. Given the rest, this is the arrangement
    // axiom restated on the base relations.
    for &v in elems {
        for &a in elems {
            for &b in elems {
                if !below(v, a) || !below(v, b) || !lt(a, b) {
                    continue;
                }
                if elems.iter().any(|&c| lt(a, c) && lt(c, b) && !below(v, c)) {
                    return false;
                }
            }
        }
    }
    true
}

/// The meet of `a` and `b`: the greatest common non-strict ancestor.
fn meet_of(s: &Structure, sym: &TreeSymbols, a: usize, b: usize) -> Option<usize> {
    let below = |z: usize, x: usize| z == x || s.holds2(sym.anc, z, x);
    let common: Vec<usize> = (0..s.size()).filter(|&z| below(z, a) && below(z, b)).collect();
    common.iter().copied().find(|&m| common.iter().all(|&z| below(z, m)))
}

fn derived_tables(s: &Structure, sym: &TreeSymbols) -> (Vec<bool>, Vec<bool>) {
    let n = s.size();
    let meets: Vec<Option<usize>> =
        (0..n * n).map(|i| meet_of(s, sym, i / n, i % n)).collect();
    let mut meet_tab = vec![false; n * n * n];
    let mut arr_tab = vec![false; n * n * n];
    for y1 in 0..n {
        for y2 in 0..n {
            if y1 == y2 || s.holds2(sym.anc, y1, y2) || s.holds2(sym.anc, y2, y1) {
                continue;
            }
            if let Some(m) = meets[y1 * n + y2] {
                meet_tab[(m * n + y1) * n + y2] = true;
            }
        }
    }
    for x1 in 0..n {
        for x2 in 0..n {
            if x1 == x2 {
                continue;
            }
            let Some(m12) = meets[x1 * n + x2] else { continue };
            for x3 in 0..n {
                if let Some(m13) = meets[x1 * n + x3] {
                    if s.holds2(sym.anc, m13, m12) {
                        arr_tab[(x1 * n + x2) * n + x3] = true;
                    }
                }
            }
        }
    }
    (meet_tab, arr_tab)
}

