use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::checker::Checker;
use super::complete::{Plan, PlanKey};
use crate::embedding::EmbeddingSearch;
use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::structure::{for_each_tuple, Structure};

/// Upper bound on labeled candidates examined while tabulating allowed
/// patterns; past it membership falls back to embedding search.
const PATTERN_CANDIDATE_CAP: u64 = 1 << 22;

/// A class of finite structures: everything in which no forbidden structure
/// embeds and which the checker (if any) accepts.
#[derive(Clone)]
pub struct ClassSpec {
    name: String,
    signature: Arc<Signature>,
    forbidden: Vec<Structure>,
    checker: Option<Checker>,
    notes: String,
    cache: Arc<SpecCache>,
}

#[derive(Default)]
pub(crate) struct SpecCache {
    oracle: OnceLock<Oracle>,
    pub(crate) plans: Mutex<HashMap<PlanKey, Arc<Plan>>>,
}

/// Allowed labeled patterns of every size up to the largest forbidden
/// structure. Empty `allowed` means membership uses embedding search.
struct Oracle {
    width: usize,
    allowed: Vec<PatternSet>,
}

/// Patterns of at most this many bits are kept in a dense bitset.
const DENSE_PATTERN_BITS: usize = 22;

enum PatternSet {
    Dense(Vec<u64>),
    Sparse(HashSet<Vec<u64>>),
}

impl PatternSet {
    fn new(bits: usize) -> Self {
        if bits <= DENSE_PATTERN_BITS {
            PatternSet::Dense(vec![0; (1usize << bits).div_ceil(64)])
        } else {
            PatternSet::Sparse(HashSet::new())
        }
    }

    fn insert(&mut self, pattern: Vec<u64>) {
        match self {
            PatternSet::Dense(words) => {
                let i = pattern[0] as usize;
                words[i >> 6] |= 1 << (i & 63);
            }
            PatternSet::Sparse(set) => {
                set.insert(pattern);
            }
        }
    }

    #[inline]
    fn contains(&self, pattern: &[u64]) -> bool {
        match self {
            PatternSet::Dense(words) => {
                let i = pattern[0] as usize;
                words[i >> 6] >> (i & 63) & 1 == 1
            }
            PatternSet::Sparse(set) => set.contains(pattern),
        }
    }
}

impl ClassSpec {
    pub fn new(
        name: impl Into<String>,
        signature: Arc<Signature>,
        forbidden: Vec<Structure>,
        checker: Option<Checker>,
        notes: impl Into<String>,
    ) -> Result<Self> {
        signature.validate()?;
        for f in &forbidden {
            if f.signature() != &signature {
                return Err(Error::SignatureMismatch(
                    "forbidden structure over a different signature".into(),
                ));
            }
        }
        if let Some(c) = checker {
            c.symbols(&signature)?;
        }
        Ok(ClassSpec {
            name: name.into(),
            signature,
            forbidden,
            checker,
            notes: notes.into(),
            cache: Arc::default(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn forbidden(&self) -> &[Structure] {
        &self.forbidden
    }

    pub fn checker(&self) -> Option<Checker> {
        self.checker
    }

    pub fn notes(&self) -> &str {
        &self.notes
    }

    /// True when membership is closed under induced substructures.
    pub fn is_universal(&self) -> bool {
        self.checker.is_none()
    }

    pub(crate) fn cache(&self) -> &SpecCache {
        &self.cache
    }

    /// An empty structure of this signature.
    pub fn empty_structure(&self, size: usize) -> Structure {
        Structure::new(self.signature.clone(), size)
    }

    pub fn is_member(&self, s: &Structure) -> Result<bool> {
        if s.signature() != &self.signature {
            return Err(Error::SignatureMismatch(format!(
                "structure is not over the signature of `{}`",
                self.name
            )));
        }
        Ok(self.member_unchecked(s))
    }

    pub(crate) fn member_unchecked(&self, s: &Structure) -> bool {
        if !self.signature.constants.is_empty() && s.size() == 0 {
            return false;
        }
        self.universal_ok(s) && self.checker.is_none_or(|c| c.accepts(s))
    }

    fn universal_ok(&self, s: &Structure) -> bool {
        let oracle = self.oracle();
        if oracle.allowed.is_empty() {
            return self.forbidden.iter().all(|f| {
                f.size() > s.size()
                    || EmbeddingSearch::new(f, s).map(|e| e.first().is_none()).unwrap_or(false)
            });
        }
        let n = s.size();
        let w = oracle.width.min(n);
        let mut ok = true;
        let mut buf = Vec::new();
        for_each_subset(n, w, |elems| {
            buf.clear();
            s.pattern_bits(elems, &mut buf);
            ok = oracle.allowed[w].contains(&buf);
            ok
        });
        ok
    }

    /// Largest subset size the local checks inspect.
    pub(crate) fn local_width(&self) -> usize {
        let w = self.oracle().width;
        self.checker.map_or(w, |c| w.max(c.local_width()))
    }

    /// Subsets up to this size are judged by the pattern tables.
    pub(crate) fn pattern_width(&self) -> usize {
        let oracle = self.oracle();
        if oracle.allowed.is_empty() {
            0
        } else {
            oracle.width
        }
    }

    #[inline]
    pub(crate) fn pattern_allowed(&self, len: usize, pattern: &[u64]) -> bool {
        self.oracle().allowed[len].contains(pattern)
    }

    pub(crate) fn checker_local_ok(&self, s: &Structure, elems: &[usize]) -> bool {
        match self.checker {
            Some(c) if elems.len() <= c.local_width() => c.local_ok(s, elems),
            _ => true,
        }
    }

    /// True when passing every local check on subsets of a completion
    /// implies membership, provided the pre-existing parts were members.
    pub(crate) fn locally_decided(&self) -> bool {
        self.checker.is_none() && !self.oracle().allowed.is_empty()
    }

    /// Relations computed by the checker rather than searched over.
    pub(crate) fn derived_relations(&self) -> Vec<usize> {
        self.checker.map_or_else(Vec::new, |c| c.derived_relations(&self.signature))
    }

    pub(crate) fn derive(&self, s: &mut Structure) {
        if let Some(c) = self.checker {
            c.derive(s);
        }
    }

    fn oracle(&self) -> &Oracle {
        self.cache.oracle.get_or_init(|| build_oracle(self))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("class spec serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: SpecDto = serde_json::from_str(text)?;
        dto.into_spec()
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns false.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn build_oracle(spec: &ClassSpec) -> Oracle {
    let none = Oracle { width: 0, allowed: Vec::new() };
    if !spec.signature.constants.is_empty() || spec.forbidden.is_empty() {
        return none;
    }
    let width = spec.forbidden.iter().map(Structure::size).max().unwrap_or(0);
    let pattern_len = |t: usize| -> usize {
        spec.signature.relations.iter().map(|r| t.pow(r.arity as u32)).sum()
    };
    let mut allowed: Vec<PatternSet> = (0..=width).map(|t| PatternSet::new(pattern_len(t))).collect();
    let mut level = Vec::new();
    if spec.forbidden.iter().all(|f| f.size() > 0) {
        let empty = spec.empty_structure(0);
        let mut buf = Vec::new();
        empty.pattern_bits(&[], &mut buf);
        allowed[0].insert(buf);
        level.push(empty);
    }
    let mut examined = 0u64;
    for t in 1..=width {
        let new = t - 1;
        let mut open = Vec::new();
        for rel in 0..spec.signature.relations.len() {
            for_each_tuple(t, spec.signature.relations[rel].arity, |tuple| {
                if tuple.contains(&new) {
                    open.push((rel, tuple.to_vec()));
                }
            });
        }
        if open.len() >= 40 {
            return none;
        }
        examined += level.len() as u64 * (1u64 << open.len());
        if examined > PATTERN_CANDIDATE_CAP {
            return none;
        }
        let elems: Vec<usize> = (0..t).collect();
        let mut next = Vec::new();
        for base in &level {
            let mut s = base.grow(1);
            for mask in 0u64..1 << open.len() {
                for (bit, (rel, tuple)) in open.iter().enumerate() {
                    s.set(*rel, tuple, mask >> bit & 1 == 1);
                }
                let clean = spec.forbidden.iter().all(|f| {
                    f.size() > t || EmbeddingSearch::new(f, &s).is_ok_and(|e| e.first().is_none())
                });
                if clean {
                    let mut buf = Vec::new();
                    s.pattern_bits(&elems, &mut buf);
                    allowed[t].insert(buf);
                    if t < width {
                        next.push(s.clone());
                    }
                }
            }
        }
        level = next;
    }
    Oracle { width, allowed }
}

impl PartialEq for ClassSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.signature == other.signature
            && self.forbidden == other.forbidden
            && self.checker == other.checker
            && self.notes == other.notes
    }
}

impl Eq for ClassSpec {}

impl fmt::Debug for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClassSpec")
            .field("name", &self.name)
            .field("signature", &self.signature)
            .field("forbidden", &self.forbidden.len())
            .field("checker", &self.checker.map(Checker::name))
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDto {
    name: String,
    signature: Signature,
    forbidden: Vec<Structure>,
    checker: Option<String>,
    notes: String,
}

impl SpecDto {
    fn into_spec(self) -> Result<ClassSpec> {
        let signature = Arc::new(self.signature);
        let mut forbidden = Vec::with_capacity(self.forbidden.len());
        for f in self.forbidden {
            if **f.signature() != *signature {
                return Err(Error::SignatureMismatch(
                    "forbidden structure over a different signature".into(),
                ));
            }
            // Rebind to the shared signature so equality checks stay cheap.
            let mut g = Structure::new(signature.clone(), f.size());
            for rel in 0..f.relation_count() {
                for t in f.tuples(rel) {
                    g.set(rel, &t, true);
                }
            }
            for (c, &e) in f.constants().iter().enumerate() {
                g.set_constant(c, e)?;
            }
            forbidden.push(g);
        }
        let checker = self.checker.as_deref().map(Checker::from_name).transpose()?;
        ClassSpec::new(self.name, signature, forbidden, checker, self.notes)
    }
}

impl Serialize for ClassSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpecDto {
            name: self.name.clone(),
            signature: (*self.signature).clone(),
            forbidden: self.forbidden.clone(),
            checker: self.checker.map(|c| c.name().to_string()),
            notes: self.notes.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClassSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        SpecDto::deserialize(deserializer)?.into_spec().map_err(serde::de::Error::custom)
    }
}
