use std::collections::BTreeMap;
use std::ops::ControlFlow;

use super::coloring::Palette;
use crate::embedding::{Embedding, EmbeddingSearch};
use crate::error::Result;
use crate::structure::{for_each_tuple, Structure};
use crate::types::{qf_type, QfType};

/// Tuples over `A` of length 1..=r grouped by atomic type, groups in type order.
fn type_classes(a: &Structure, r: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    let mut classes: BTreeMap<QfType, Vec<Vec<usize>>> = BTreeMap::new();
    for len in 1..=r {
        let mut err = None;
        for_each_tuple(a.size(), len, |t| match qf_type(a, t) {
            Ok(p) => classes.entry(p).or_default().push(t.to_vec()),
            Err(e) => err = Some(e),
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(classes.into_values().filter(|c| c.len() > 1).collect())
}

fn respects(class: &[Vec<usize>], g: &[usize], palette: &Palette) -> bool {
    let mut image = Vec::new();
    let mut first = None;
    class.iter().all(|t| {
        image.clear();
        image.extend(t.iter().map(|&x| g[x]));
        let c = palette.color(&image);
        *first.get_or_insert(c) == c
    })
}

/// The lexicographically first embedding `g: A -> C` under which tuples of
/// length at most the palette arity with equal atomic type in `A` get equal
/// palette colors.
pub fn extract_indiscernible(c: &Structure, a: &Structure, palette: &Palette) -> Result<Option<Embedding>> {
    let classes = type_classes(a, palette.arity())?;
    let mut found = None;
    EmbeddingSearch::new(a, c)?.for_each(|g| {
        if classes.iter().all(|class| respects(class, g, palette)) {
            found = Some(Embedding::new(g.to_vec()));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found)
}

/// Same answer as [`extract_indiscernible`], computed one type class at a
/// time: the surviving embeddings are filtered by each class in turn.
pub fn extract_indiscernible_iterated(c: &Structure, a: &Structure, palette: &Palette) -> Result<Option<Embedding>> {
    let classes = type_classes(a, palette.arity())?;
    let mut alive = EmbeddingSearch::new(a, c)?.collect();
    for class in &classes {
        alive.retain(|g| respects(class, g.images(), palette));
        if alive.is_empty() {
            break;
        }
    }
    Ok(alive.into_iter().next())
}
