use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::structure::{for_each_tuple, Structure};

/// Atomic (quantifier-free) type of a tuple: which coordinates coincide and
/// which relation instances over the coordinates hold.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QfType {
    arity: usize,
    /// Block label of each coordinate, numbered by first occurrence.
    equality: Vec<usize>,
    /// Per relation symbol, the coordinate tuples that hold (lexicographic).
    relations: Vec<Vec<Vec<usize>>>,
    signature: Arc<Signature>,
}

impl QfType {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn equality_pattern(&self) -> &[usize] {
        &self.equality
    }

    /// The partition of coordinates into blocks of equal entries.
    pub fn equality_blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &b) in self.equality.iter().enumerate() {
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(i);
        }
        blocks
    }

    /// True when all coordinates are pairwise distinct.
    pub fn is_irreflexive(&self) -> bool {
        self.equality.iter().enumerate().all(|(i, &b)| b == i)
    }

    pub fn holds(&self, rel: usize, coords: &[usize]) -> bool {
        self.relations[rel].binary_search_by(|t| t.as_slice().cmp(coords)).is_ok()
    }

    pub fn relation_pattern(&self, rel: usize) -> &[Vec<usize>] {
        &self.relations[rel]
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }
}

/// The atomic type of `tuple` in `s`.
pub fn qf_type(s: &Structure, tuple: &[usize]) -> Result<QfType> {
    if let Some(&element) = tuple.iter().find(|&&e| e >= s.size()) {
        return Err(Error::OutOfRange { element, size: s.size() });
    }
    Ok(qf_type_unchecked(s, tuple))
}

pub(crate) fn qf_type_unchecked(s: &Structure, tuple: &[usize]) -> QfType {
    let k = tuple.len();
    let mut equality = Vec::with_capacity(k);
    for i in 0..k {
        let label = match (0..i).find(|&j| tuple[j] == tuple[i]) {
            Some(j) => equality[j],
            None => equality.iter().copied().max().map_or(0, |m: usize| m + 1),
        };
        equality.push(label);
    }
    let mut image = Vec::new();
    let relations = (0..s.relation_count())
        .map(|rel| {
            let mut held = Vec::new();
            for_each_tuple(k, s.arity(rel), |t| {
                image.clear();
                image.extend(t.iter().map(|&i| tuple[i]));
                if s.holds(rel, &image) {
                    held.push(t.to_vec());
                }
            });
            held
        })
        .collect();
    QfType { arity: k, equality, relations, signature: s.signature().clone() }
}

impl Serialize for QfType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Rels<'a>(&'a QfType);
        impl Serialize for Rels<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.relations.len()))?;
                for (sym, held) in self.0.signature.relations.iter().zip(&self.0.relations) {
                    map.serialize_entry(&sym.name, held)?;
                }
                map.end()
            }
        }
        let n = if self.arity > 2 { 4 } else { 3 };
        let mut map = serializer.serialize_map(Some(n))?;
        map.serialize_entry("arity", &self.arity)?;
        map.serialize_entry("equal", &!self.is_irreflexive())?;
        if self.arity > 2 {
            map.serialize_entry("partition", &self.equality)?;
        }
        map.serialize_entry("relations", &Rels(self))?;
        map.end()
    }
}

impl fmt::Display for QfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        let mut parts = Vec::new();
        for i in 0..self.arity {
            for j in i + 1..self.arity {
                let op = if self.equality[i] == self.equality[j] { "=" } else { "!=" };
                parts.push(format!("{}{op}{}", vars[i], vars[j]));
            }
        }
        for (sym, held) in self.signature.relations.iter().zip(&self.relations) {
            for t in held {
                let args: Vec<&str> = t.iter().map(|&i| vars[i].as_str()).collect();
                parts.push(format!("{}({})", sym.name, args.join(",")));
            }
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}
