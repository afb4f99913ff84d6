//! The orbit tree of an admissible embedding: translates of the image under
//! the enumerated group, bounded audits of its structure, the quotient graph
//! and the branch data it induces.

mod audit;
mod quotient;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::admissibility::{Bounds, EmbeddingSpec, Image, WordElement};
use crate::bt_tree::{SubtreeTruncation, Vertex};
use crate::error::{Error, Result};
use crate::tree_of_groups::{AmalgamWord, DEFAULT_WORD_CAP};

pub use audit::{
    contraction_audit, discreteness_audit, disjointness_audit, limit_tree_approx, stabilizer_audit,
    stabilizer_of_vertex, DiscretenessReport, LimitTree, PROXIMITY_THRESHOLD,
};
pub use quotient::{branch_report, quotient_graph, BranchReport, EndReport, QuotientEdge, QuotientGraph, QuotientVertex};

/// Union of the translates `g · image` over enumerated words `g`.
#[derive(Debug, Clone)]
pub struct OrbitTree<'a> {
    pub spec: &'a EmbeddingSpec,
    pub bounds: Bounds,
    /// The image truncated to the ball of radius `bounds.radius`.
    pub base: Image,
    /// Enumerated words, shortest first; index 0 is the identity.
    pub words: Vec<WordElement>,
    /// Vertex set of each translate.
    pub translates: BTreeMap<AmalgamWord, BTreeSet<Vertex>>,
    pub tree: SubtreeTruncation,
    /// Base vertex each orbit-tree vertex is a translate of, with the index of
    /// the first word that puts it there.
    pub section: BTreeMap<Vertex, (Vertex, usize)>,
    /// Vertices lying on more than one translate, with the number of translates.
    pub glue: BTreeMap<Vertex, usize>,
    /// Vertices reached as translates of two different base vertices.
    pub conflicts: Vec<(Vertex, Vertex, Vertex)>,
}

/// Translates the truncated image by every word of length at most
/// `bounds.length` and glues them along equal vertices. Callers are expected
/// to have run the admissibility check first.
pub fn build_orbit_tree(spec: &EmbeddingSpec, bounds: Bounds) -> Result<OrbitTree<'_>> {
    let base = spec.image(bounds.radius)?;
    let words = spec.words(bounds.length, DEFAULT_WORD_CAP)?;
    let base_vertices: Vec<&Vertex> = base.tree.vertices.iter().collect();
    let moved: Vec<Vec<Vertex>> = words
        .par_iter()
        .map(|w| base_vertices.iter().map(|v| w.matrix.act(v)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let index: BTreeMap<&Vertex, usize> = base_vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();

    let mut tree = SubtreeTruncation { radius: bounds.radius, center: Some(spec.anchor()), ..Default::default() };
    let mut translates = BTreeMap::new();
    let mut section: BTreeMap<Vertex, (Vertex, usize)> = BTreeMap::new();
    let mut seen: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut conflicts = Vec::new();
    for (wi, (w, images)) in words.iter().zip(&moved).enumerate() {
        for (y, x) in base_vertices.iter().zip(images) {
            *seen.entry(x.clone()).or_default() += 1;
            match section.get(x) {
                None => {
                    section.insert(x.clone(), ((*y).clone(), wi));
                }
                Some((y0, _)) if y0 != *y => conflicts.push((x.clone(), y0.clone(), (*y).clone())),
                Some(_) => {}
            }
            tree.vertices.insert(x.clone());
        }
        for (a, b) in &base.tree.edges {
            tree.insert_path(&[images[index[a]].clone(), images[index[b]].clone()]);
        }
        translates.insert(w.word.clone(), images.iter().cloned().collect());
    }
    if !tree.is_tree() {
        return Err(Error::NotAdmissible(format!(
            "the union of translates by words of length <= {} is not a tree",
            bounds.length
        )));
    }
    let glue = seen.into_iter().filter(|(_, n)| *n > 1).collect();
    Ok(OrbitTree { spec, bounds, base, words, translates, tree, section, glue, conflicts })
}

impl OrbitTree<'_> {
    pub fn anchor(&self) -> Vertex {
        self.spec.anchor()
    }

    /// Name of the image place a vertex is a translate of.
    pub fn orbit_name(&self, v: &Vertex) -> Option<String> {
        let (y, _) = self.section.get(v)?;
        Some(self.spec.place_name(self.base.places[y]))
    }

    /// DOT rendering; base vertices carry their place name, the others the
    /// place they are a translate of.
    pub fn to_dot(&self, name: &str) -> String {
        let mut decorations = BTreeMap::new();
        for (v, (y, wi)) in &self.section {
            let place = self.spec.place_name(self.base.places[y]);
            let label = if *wi == 0 { place } else { format!("~{place}") };
            decorations.insert(v.clone(), label);
        }
        self.tree.to_dot(name, &decorations)
    }
}

#[cfg(test)]
mod tests;
