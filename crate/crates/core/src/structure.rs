use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::signature::{Signature, MAX_ARITY};

/// Membership table of one relation: a bitset over `size^arity` tuples,
/// indexed by the mixed-radix encoding of the tuple (so bit order is the
/// lexicographic order of tuples).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Table {
    arity: usize,
    bits: Vec<u64>,
}

impl Table {
    fn new(arity: usize, size: usize) -> Self {
        let len = size.pow(arity as u32);
        Table { arity, bits: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    fn get(&self, index: usize) -> bool {
        self.bits[index >> 6] >> (index & 63) & 1 == 1
    }

    #[inline]
    fn put(&mut self, index: usize, value: bool) {
        let word = &mut self.bits[index >> 6];
        if value {
            *word |= 1 << (index & 63);
        } else {
            *word &= !(1 << (index & 63));
        }
    }

    fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.bits
    }
}

/// A finite relational structure with universe `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    signature: Arc<Signature>,
    size: usize,
    tables: Vec<Table>,
    constants: Vec<usize>,
}

#[inline]
fn encode(size: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * size + x)
}

fn decode(size: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    t
}

/// Calls `f` on every tuple of length `arity` over `0..size`, in lexicographic order.
pub fn for_each_tuple(size: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    if size == 0 && arity > 0 {
        return;
    }
    let mut buf = [0usize; MAX_ARITY];
    let t = &mut buf[..arity];
    loop {
        f(t);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < size {
                break;
            }
            t[i] = 0;
        }
    }
}

impl Structure {
    /// The structure with no tuples. Constants are interpreted as element 0
    /// until set, so a signature with constants needs `size >= 1`.
    pub fn new(signature: Arc<Signature>, size: usize) -> Self {
        let tables = signature.relations.iter().map(|r| Table::new(r.arity, size)).collect();
        let constants = vec![0; signature.constants.len()];
        Structure { signature, size, tables, constants }
    }

    /// Builds a structure from named tuple lists; unknown names are rejected.
    pub fn from_tuples(
        signature: Arc<Signature>,
        size: usize,
        tables: &[(&str, &[&[usize]])],
        constants: &[(&str, usize)],
    ) -> Result<Self> {
        let mut s = Structure::new(signature, size);
        for (name, tuples) in tables {
            let rel = s.relation(name)?;
            for t in *tuples {
                s.try_set(rel, t, true)?;
            }
        }
        for (name, e) in constants {
            let c = s
                .signature
                .constant_index(name)
                .ok_or_else(|| Error::SignatureMismatch(format!("no constant `{name}`")))?;
            s.set_constant(c, *e)?;
        }
        if s.size == 0 && !s.constants.is_empty() {
            return Err(Error::InvalidStructure("constants need a nonempty universe".into()));
        }
        Ok(s)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relation(&self, name: &str) -> Result<usize> {
        self.signature
            .relation_index(name)
            .ok_or_else(|| Error::SignatureMismatch(format!("no relation `{name}`")))
    }

    #[inline]
    pub(crate) fn bit(&self, rel: usize, index: usize) -> bool {
        self.tables[rel].get(index)
    }

    #[inline]
    pub fn holds(&self, rel: usize, tuple: &[usize]) -> bool {
        self.tables[rel].get(encode(self.size, tuple))
    }

    #[inline]
    pub fn holds2(&self, rel: usize, a: usize, b: usize) -> bool {
        self.tables[rel].get(a * self.size + b)
    }

    #[inline]
    pub fn set(&mut self, rel: usize, tuple: &[usize], value: bool) {
        debug_assert_eq!(tuple.len(), self.tables[rel].arity);
        self.tables[rel].put(encode(self.size, tuple), value);
    }

    pub fn try_set(&mut self, rel: usize, tuple: &[usize], value: bool) -> Result<()> {
        let arity = self.tables[rel].arity;
        if tuple.len() != arity {
            return Err(Error::InvalidStructure(format!(
                "tuple of length {} for relation `{}` of arity {arity}",
                tuple.len(),
                self.signature.relations[rel].name
            )));
        }
        self.check_elements(tuple)?;
        self.set(rel, tuple, value);
        Ok(())
    }

    fn check_elements(&self, elems: &[usize]) -> Result<()> {
        match elems.iter().find(|&&e| e >= self.size) {
            Some(&element) => Err(Error::OutOfRange { element, size: self.size }),
            None => Ok(()),
        }
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.tables[rel].arity
    }

    pub fn relation_count(&self) -> usize {
        self.tables.len()
    }

    pub fn tuple_count(&self, rel: usize) -> usize {
        self.tables[rel].count()
    }

    /// Tuples of `rel` in lexicographic order.
    pub fn tuples(&self, rel: usize) -> Vec<Vec<usize>> {
        let t = &self.tables[rel];
        let mut out = Vec::new();
        for (w, &word) in t.bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                out.push(decode(self.size, t.arity, w * 64 + b));
                word &= word - 1;
            }
        }
        out
    }

    pub fn constants(&self) -> &[usize] {
        &self.constants
    }

    pub fn constant(&self, c: usize) -> usize {
        self.constants[c]
    }

    pub fn set_constant(&mut self, c: usize, element: usize) -> Result<()> {
        self.check_elements(&[element])?;
        self.constants[c] = element;
        Ok(())
    }

    pub fn is_constant(&self, element: usize) -> bool {
        self.constants.contains(&element)
    }

    pub(crate) fn table_words(&self, rel: usize) -> &[u64] {
        self.tables[rel].words()
    }

    /// The induced substructure on `subset`, relabeled `0..k` preserving the
    /// original order. Every constant must lie in the subset.
    pub fn induced_substructure(&self, subset: &[usize]) -> Result<Structure> {
        self.check_elements(subset)?;
        let mut elems = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        for (c, &e) in self.constants.iter().enumerate() {
            if elems.binary_search(&e).is_err() {
                return Err(Error::MissingConstant(self.signature.constants[c].clone()));
            }
        }
        Ok(self.restrict(&elems))
    }

    /// The substructure on `elems` (new element `i` is `elems[i]`). Constants
    /// outside `elems` are mapped to 0.
    pub(crate) fn restrict(&self, elems: &[usize]) -> Structure {
        let k = elems.len();
        let mut out = Structure::new(self.signature.clone(), k);
        let mut image = Vec::new();
        for rel in 0..self.tables.len() {
            let arity = self.tables[rel].arity;
            for_each_tuple(k, arity, |t| {
                image.clear();
                image.extend(t.iter().map(|&i| elems[i]));
                if self.holds(rel, &image) {
                    out.set(rel, t, true);
                }
            });
        }
        for (c, &e) in self.constants.iter().enumerate() {
            out.constants[c] = elems.iter().position(|&x| x == e).unwrap_or(0);
        }
        out
    }

    /// Applies the bijection `perm` (old element `i` becomes `perm[i]`).
    pub fn relabel(&self, perm: &[usize]) -> Structure {
        let mut out = Structure::new(self.signature.clone(), self.size);
        let mut image = Vec::new();
        for rel in 0..self.tables.len() {
            for t in self.tuples(rel) {
                image.clear();
                image.extend(t.iter().map(|&i| perm[i]));
                out.set(rel, &image, true);
            }
        }
        for (c, &e) in self.constants.iter().enumerate() {
            out.constants[c] = perm[e];
        }
        out
    }

    /// Same tuples over a universe enlarged by `extra` fresh elements.
    pub fn grow(&self, extra: usize) -> Structure {
        let mut out = Structure::new(self.signature.clone(), self.size + extra);
        for rel in 0..self.tables.len() {
            for t in self.tuples(rel) {
                out.set(rel, &t, true);
            }
        }
        out.constants = self.constants.clone();
        out
    }

    /// Appends the labeled pattern of `elems` (all relation bits of the
    /// restriction, relation by relation) to `out`.
    pub(crate) fn pattern_bits(&self, elems: &[usize], out: &mut Vec<u64>) {
        let k = elems.len();
        let n = self.size;
        let mut acc = 0u64;
        let mut used = 0u32;
        for table in &self.tables {
            for_each_tuple(k, table.arity, |t| {
                let index = t.iter().fold(0, |a, &i| a * n + elems[i]);
                let bit = table.get(index) as u64;
                acc |= bit << used;
                used += 1;
                if used == 64 {
                    out.push(acc);
                    acc = 0;
                    used = 0;
                }
            });
        }
        out.push(acc);
    }

    pub(crate) fn same_signature(&self, other: &Structure) -> Result<()> {
        if self.signature == other.signature {
            Ok(())
        } else {
            Err(Error::SignatureMismatch("structures have different signatures".into()))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structure serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Structure> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct StructureDto {
    signature: Signature,
    size: usize,
    tables: IndexMap<String, Vec<Vec<usize>>>,
    constant_map: IndexMap<String, usize>,
}

impl Serialize for Structure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let tables = self
            .signature
            .relations
            .iter()
            .enumerate()
            .map(|(i, r)| (r.name.clone(), self.tuples(i)))
            .collect();
        let constant_map = self
            .signature
            .constants
            .iter()
            .zip(&self.constants)
            .map(|(c, &e)| (c.clone(), e))
            .collect();
        StructureDto { signature: (*self.signature).clone(), size: self.size, tables, constant_map }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = StructureDto::deserialize(deserializer)?;
        dto.into_structure().map_err(D::Error::custom)
    }
}

impl StructureDto {
    fn into_structure(self) -> Result<Structure> {
        self.signature.validate()?;
        let sig = Arc::new(self.signature);
        for r in &sig.relations {
            if !self.tables.contains_key(&r.name) {
                return Err(Error::InvalidStructure(format!("missing table `{}`", r.name)));
            }
        }
        if let Some(extra) = self.tables.keys().find(|k| sig.relation_index(k).is_none()) {
            return Err(Error::InvalidStructure(format!("table `{extra}` not in signature")));
        }
        let mut s = Structure::new(sig.clone(), self.size);
        for (name, tuples) in &self.tables {
            let rel = s.relation(name)?;
            for t in tuples {
                s.try_set(rel, t, true)?;
            }
        }
        for c in &sig.constants {
            let e = self
                .constant_map
                .get(c)
                .ok_or_else(|| Error::InvalidStructure(format!("constant `{c}` unmapped")))?;
            let idx = sig.constant_index(c).expect("listed constant");
            s.set_constant(idx, *e)?;
        }
        if self.constant_map.len() != sig.constants.len() {
            return Err(Error::InvalidStructure("constant_map names unknown constants".into()));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_sig() -> Arc<Signature> {
        Arc::new(Signature::new([("<", 2), ("E", 2)], []).unwrap())
    }

    #[test]
    fn json_layout_is_exact() {
        let s = Structure::from_tuples(
            order_sig(),
            3,
            &[("<", &[&[0, 1], &[0, 2], &[1, 2]]), ("E", &[&[0, 0], &[1, 1], &[2, 2], &[0, 1], &[1, 0]])],
            &[],
        )
        .unwrap();
        assert_eq!(
            s.to_json(),
            r#"{"signature":{"relations":[{"name":"<","arity":2},{"name":"E","arity":2}],"constants":[]},"size":3,"tables":{"<":[[0,1],[0,2],[1,2]],"E":[[0,0],[0,1],[1,0],[1,1],[2,2]]},"constant_map":{}}"#
        );
        let text = r#"{"signature":{"relations":[{"name":"<","arity":2},{"name":"E","arity":2}],"constants":[]},"size":3,"tables":{"<":[[0,1],[0,2],[1,2]],"E":[[0,0],[1,1],[2,2],[0,1],[1,0]]},"constant_map":{}}"#;
        assert_eq!(Structure::from_json(text).unwrap(), s);
    }

    #[test]
    fn json_rejects_missing_keys_and_bad_indices() {
        let missing = r#"{"signature":{"relations":[{"name":"<","arity":2}],"constants":[]},"size":2,"tables":{"<":[[0,1]]}}"#;
        assert!(Structure::from_json(missing).is_err());
        let no_table = r#"{"signature":{"relations":[{"name":"<","arity":2}],"constants":[]},"size":2,"tables":{},"constant_map":{}}"#;
        assert!(Structure::from_json(no_table).is_err());
        let oob = r#"{"signature":{"relations":[{"name":"<","arity":2}],"constants":[]},"size":2,"tables":{"<":[[0,2]]},"constant_map":{}}"#;
        assert!(Structure::from_json(oob).is_err());
    }

    #[test]
    fn induced_substructure_of_chain() {
        let sig = Arc::new(Signature::new([("<", 2)], []).unwrap());
        let chain = Structure::from_tuples(sig.clone(), 3, &[("<", &[&[0, 1], &[0, 2], &[1, 2]])], &[]).unwrap();
        let sub = chain.induced_substructure(&[2, 0]).unwrap();
        let two = Structure::from_tuples(sig, 2, &[("<", &[&[0, 1]])], &[]).unwrap();
        assert_eq!(sub, two);
        assert_eq!(chain.induced_substructure(&[0, 1, 2]).unwrap(), chain);
        assert!(matches!(chain.induced_substructure(&[3]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn induced_substructure_of_convex_er() {
        // a<b<c with classes {a,b},{c}; keep {a,c}
        let s = Structure::from_tuples(
            order_sig(),
            3,
            &[("<", &[&[0, 1], &[0, 2], &[1, 2]]), ("E", &[&[0, 0], &[1, 1], &[2, 2], &[0, 1], &[1, 0]])],
            &[],
        )
        .unwrap();
        let sub = s.induced_substructure(&[0, 2]).unwrap();
        assert_eq!(sub.tuples(0), vec![vec![0, 1]]);
        assert_eq!(sub.tuples(1), vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn subsets_must_keep_constants() {
        let sig = Arc::new(Signature { relations: vec![], constants: vec!["0".into()] });
        let s = Structure::from_tuples(sig, 3, &[], &[("0", 1)]).unwrap();
        assert!(matches!(s.induced_substructure(&[0, 2]), Err(Error::MissingConstant(c)) if c == "0"));
        let sub = s.induced_substructure(&[1, 2]).unwrap();
        assert_eq!(sub.constant(0), 0);
    }

    #[test]
    fn relabel_and_grow() {
        let sig = Arc::new(Signature::new([("R", 3)], []).unwrap());
        let s = Structure::from_tuples(sig, 3, &[("R", &[&[0, 1, 2]])], &[]).unwrap();
        let r = s.relabel(&[2, 0, 1]);
        assert_eq!(r.tuples(0), vec![vec![2, 0, 1]]);
        let g = s.grow(2);
        assert_eq!(g.size(), 5);
        assert_eq!(g.tuples(0), vec![vec![0, 1, 2]]);
    }
}
