use std::collections::HashMap;

use serde::Serialize;

use crate::embedding::{Embedding, EmbeddingSearch};
use crate::error::{Error, Result};
use crate::structure::Structure;

/// Vertices are the embeddings `A -> C`; each copy `e: B -> C` contributes
/// the edge `{ e∘f : f ∈ hom(A,B) }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyHypergraph {
    pub vertices: Vec<Embedding>,
    /// Sorted vertex-index lists, deduplicated, in lexicographic order.
    pub edges: Vec<Vec<usize>>,
}

impl CopyHypergraph {
    pub fn vertex_index(&self, image: &[usize]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.images().cmp(image)).ok()
    }
}

pub fn copy_hypergraph(a: &Structure, b: &Structure, c: &Structure) -> Result<CopyHypergraph> {
    let hom_ab = EmbeddingSearch::new(a, b)?.collect();
    if hom_ab.is_empty() {
        return Err(Error::EmptyHom);
    }
    let vertices = EmbeddingSearch::new(a, c)?.collect();
    let index: HashMap<&[usize], usize> = vertices.iter().enumerate().map(|(i, v)| (v.images(), i)).collect();
    let mut edges = Vec::new();
    let mut image = Vec::new();
    for e in EmbeddingSearch::new(b, c)?.collect() {
        let mut edge: Vec<usize> = hom_ab
            .iter()
            .map(|f| {
                image.clear();
                image.extend(f.images().iter().map(|&x| e.images()[x]));
                index[image.as_slice()]
            })
            .collect();
        edge.sort_unstable();
        edge.dedup();
        edges.push(edge);
    }
    edges.sort();
    edges.dedup();
    Ok(CopyHypergraph { vertices, edges })
}
