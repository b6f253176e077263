use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::hypergraph::CopyHypergraph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub image: Vec<usize>,
    pub color: usize,
}

/// A coloring of `hom(A,C)`, each embedding named by its image sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    #[serde(rename = "A_size")]
    pub a_size: usize,
    pub k: usize,
    pub assignments: Vec<Assignment>,
}

impl Coloring {
    /// Colors listed in vertex order of `hg`.
    pub fn from_vertex_colors(hg: &CopyHypergraph, a_size: usize, k: usize, colors: &[usize]) -> Coloring {
        let assignments = hg
            .vertices
            .iter()
            .zip(colors)
            .map(|(v, &color)| Assignment { image: v.images().to_vec(), color })
            .collect();
        Coloring { a_size, k, assignments }
    }

    pub fn color_of(&self, image: &[usize]) -> Option<usize> {
        self.assignments.iter().find(|a| a.image == image).map(|a| a.color)
    }

    /// Colors in vertex order of `hg`; fails unless the coloring is total on
    /// the vertices and uses colors below `k`.
    pub fn vertex_colors(&self, hg: &CopyHypergraph) -> Result<Vec<usize>> {
        let by_image: BTreeMap<&[usize], usize> =
            self.assignments.iter().map(|a| (a.image.as_slice(), a.color)).collect();
        hg.vertices
            .iter()
            .map(|v| match by_image.get(v.images()) {
                Some(&c) if c < self.k => Ok(c),
                Some(&c) => Err(Error::InvalidArgument(format!("color {c} is not below k = {}", self.k))),
                None => Err(Error::InvalidArgument(format!("embedding {:?} has no color", v.images()))),
            })
            .collect()
    }

    /// True when no edge of `hg` is monochromatic.
    pub fn is_bad_for(&self, hg: &CopyHypergraph) -> Result<bool> {
        let colors = self.vertex_colors(hg)?;
        Ok(no_monochromatic_edge(hg, &colors))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Coloring> {
        Ok(serde_json::from_str(text)?)
    }
}

pub(crate) fn no_monochromatic_edge(hg: &CopyHypergraph, colors: &[usize]) -> bool {
    hg.edges.iter().all(|e| e.iter().any(|&v| colors[v] != colors[e[0]]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteEntry {
    pub tuple: Vec<usize>,
    pub color: usize,
}

/// Colors for tuples of a host structure. Tuples not listed get `default`.
/// Entries may be shorter than `arity`; indiscernibility is checked on all
/// tuple lengths up to `arity`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PaletteDto", into = "PaletteDto")]
pub struct Palette {
    arity: usize,
    default: usize,
    colormap: BTreeMap<Vec<usize>, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PaletteDto {
    arity: usize,
    default: usize,
    colormap: Vec<PaletteEntry>,
}

impl TryFrom<PaletteDto> for Palette {
    type Error = Error;

    fn try_from(dto: PaletteDto) -> Result<Palette> {
        let mut p = Palette::new(dto.arity, dto.default);
        for e in dto.colormap {
            p.set(e.tuple, e.color)?;
        }
        Ok(p)
    }
}

impl From<Palette> for PaletteDto {
    fn from(p: Palette) -> PaletteDto {
        PaletteDto {
            arity: p.arity,
            default: p.default,
            colormap: p.colormap.into_iter().map(|(tuple, color)| PaletteEntry { tuple, color }).collect(),
        }
    }
}

impl Palette {
    pub fn new(arity: usize, default: usize) -> Palette {
        Palette { arity, default, colormap: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn default_color(&self) -> usize {
        self.default
    }

    pub fn set(&mut self, tuple: Vec<usize>, color: usize) -> Result<()> {
        if tuple.is_empty() || tuple.len() > self.arity {
            return Err(Error::InvalidArgument(format!(
                "palette tuple {tuple:?} does not fit arity {}",
                self.arity
            )));
        }
        self.colormap.insert(tuple, color);
        Ok(())
    }

    pub fn color(&self, tuple: &[usize]) -> usize {
        self.colormap.get(tuple).copied().unwrap_or(self.default)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], usize)> {
        self.colormap.iter().map(|(t, &c)| (t.as_slice(), c))
    }

    /// Reads an arrow certificate as a palette: each embedding's image gets
    /// its color.
    pub fn from_coloring(coloring: &Coloring) -> Result<Palette> {
        let mut p = Palette::new(coloring.a_size, 0);
        for a in &coloring.assignments {
            p.set(a.image.clone(), a.color)?;
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("palette serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Palette> {
        Ok(serde_json::from_str(text)?)
    }
}
