use std::collections::BTreeSet;

use serde::Serialize;

use super::models::ModelCatalog;
use crate::structure::for_each_tuple;
use crate::types::{qf_type_unchecked, QfType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeCensus {
    pub arity: usize,
    pub bound: usize,
    pub count: usize,
    pub types: Vec<QfType>,
}

/// Every atomic type of a `k`-tuple (repetitions allowed) realized in some
/// model of size at most `n`, sorted.
pub fn type_census(catalog: &ModelCatalog, k: usize, n: usize) -> TypeCensus {
    let mut seen = BTreeSet::new();
    for model in catalog.up_to(n) {
        let s = &model.structure;
        for_each_tuple(s.size(), k, |t| {
            seen.insert(qf_type_unchecked(s, t));
        });
    }
    let types: Vec<QfType> = seen.into_iter().collect();
    TypeCensus { arity: k, bound: n, count: types.len(), types }
}
