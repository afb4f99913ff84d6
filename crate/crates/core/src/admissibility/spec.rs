use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bt_tree::{ProjPoint, SubtreeTruncation, Vertex};
use crate::error::{Error, Result};
use crate::padic::FieldSpec;
use crate::pgl2::Pgl2;
use crate::tree_of_groups::{Amalgam, AmalgamWord, Injection, TreeJson, TreeOfGroups};

/// Word-length and radius bounds used by every bounded check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub length: usize,
    pub radius: u64,
}

pub const DEFAULT_LENGTH: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub p: u64,
    pub f: u32,
    pub e: u32,
    pub precision: u32,
}

impl FieldJson {
    pub fn build(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.p, self.f, self.e, self.precision)
    }

    pub fn of(k: &FieldSpec) -> FieldJson {
        FieldJson { p: k.p(), f: k.f(), e: k.e(), precision: k.precision() }
    }
}

/// Serialized embedding: the tree-of-groups fields plus the field, vertex
/// positions `(n; b)`, generator matrices keyed `vertex.generator`, and the
/// end each ray converges to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub field: FieldJson,
    #[serde(flatten)]
    pub tree: TreeJson,
    pub vertex_map: BTreeMap<String, String>,
    pub generators: BTreeMap<String, String>,
    pub ray_ends: BTreeMap<String, String>,
}

/// Where a vertex of the truncated image sits in the abstract tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Place {
    /// A core or prefix vertex, by index in the expanded tree.
    Core(usize),
    /// The `step`-th vertex (from 1) past the last prefix vertex of a ray.
    Ray { ray: usize, step: u64 },
}

/// The truncated image of the abstract tree.
#[derive(Debug, Clone)]
pub struct Image {
    pub tree: SubtreeTruncation,
    pub places: BTreeMap<Vertex, Place>,
}

/// An abstract tree of groups together with positions in the tree of K and
/// matrix representations of its vertex groups.
#[derive(Debug, Clone)]
pub struct EmbeddingSpec {
    field: FieldSpec,
    tree: TreeOfGroups,
    amalgam: Amalgam,
    /// Position of each expanded-tree vertex.
    positions: Vec<Vertex>,
    /// Matrix of every element of each expanded-tree vertex group.
    elements: Vec<Vec<Pgl2>>,
    ray_ends: Vec<ProjPoint>,
    letter_matrices: Vec<Pgl2>,
}

/// All element matrices from generator images; fails unless they define an
/// injective homomorphism.
fn represent(group: &crate::tree_of_groups::FiniteGroup, gens: &[Pgl2], field: &FieldSpec, at: &str) -> Result<Vec<Pgl2>> {
    let words = group.generator_words();
    let mats: Vec<Pgl2> = words
        .iter()
        .map(|w| w.iter().fold(Pgl2::identity(field), |acc, &g| acc.mul(&gens[g])))
        .collect();
    for (x, mx) in mats.iter().enumerate().skip(1) {
        if mx.is_identity() {
            return Err(Error::InvalidInput(format!("{at}: element {} acts trivially", group.name(x))));
        }
    }
    for a in 0..group.order() {
        for b in 0..group.order() {
            if !mats[a].mul(&mats[b]).same(&mats[group.mul(a, b)]) {
                return Err(Error::InvalidInput(format!(
                    "{at}: generator matrices violate {} * {} = {}",
                    group.name(a),
                    group.name(b),
                    group.name(group.mul(a, b))
                )));
            }
        }
    }
    Ok(mats)
}

impl EmbeddingSpec {
    /// `vertex_map` and `generators` are keyed by core and prefix vertex ids;
    /// `generators[id]` lists matrices in the order of the group's generators.
    pub fn new(
        field: &FieldSpec,
        tree: TreeOfGroups,
        vertex_map: &BTreeMap<String, Vertex>,
        generators: &BTreeMap<String, Vec<Pgl2>>,
        ray_ends: Vec<ProjPoint>,
    ) -> Result<Self> {
        tree.check()?;
        let amalgam = Amalgam::new(&tree)?;
        let expanded = amalgam.tree().clone();
        let mut positions = Vec::new();
        let mut elements = Vec::new();
        for v in &expanded.vertices {
            let pos = vertex_map
                .get(&v.id)
                .ok_or_else(|| Error::InvalidInput(format!("vertex {} has no position", v.id)))?;
            if pos.field() != field {
                return Err(Error::FieldMismatch);
            }
            positions.push(pos.clone());
            let gens = match generators.get(&v.id) {
                Some(g) => g.clone(),
                None if v.group.generators().is_empty() => Vec::new(),
                None => return Err(Error::InvalidInput(format!("vertex {} has no generator matrices", v.id))),
            };
            if gens.len() != v.group.generators().len() {
                return Err(Error::InvalidInput(format!(
                    "vertex {}: {} generator matrices for {} generators",
                    v.id,
                    gens.len(),
                    v.group.generators().len()
                )));
            }
            elements.push(represent(&v.group, &gens, field, &format!("vertex {}", v.id))?);
        }
        let distinct: BTreeSet<&Vertex> = positions.iter().collect();
        if distinct.len() != positions.len() {
            return Err(Error::InvalidInput("vertex positions are not distinct".into()));
        }
        for (e, (ia, ib)) in expanded.edges.iter().zip(expanded.injections()?) {
            let (ida, idb) = (&expanded.vertices[e.a].id, &expanded.vertices[e.b].id);
            if positions[e.a].distance(&positions[e.b]) != 1 {
                return Err(Error::InvalidInput(format!("edge {ida} - {idb} does not map to an edge")));
            }
            for x in 0..e.group.order() {
                if !elements[e.a][ia.apply(x)].same(&elements[e.b][ib.apply(x)]) {
                    return Err(Error::InvalidInput(format!(
                        "edge {ida} - {idb}: edge element {} has different matrices at its ends",
                        e.group.name(x)
                    )));
                }
            }
        }
        if ray_ends.len() != expanded.rays.len() {
            return Err(Error::InvalidInput(format!(
                "{} ray ends for {} rays",
                ray_ends.len(),
                expanded.rays.len()
            )));
        }
        for (ray, end) in expanded.rays.iter().zip(&ray_ends) {
            let start = &positions[ray.attach];
            let first = end.walk(start, 1)?;
            if distinct.contains(&first) {
                return Err(Error::InvalidInput(format!("ray {} runs back into the core", ray.name)));
            }
        }
        let letter_matrices =
            amalgam.letters().iter().map(|l| elements[l.home().0][l.home().1].clone()).collect();
        Ok(EmbeddingSpec {
            field: field.clone(),
            tree,
            amalgam,
            positions,
            elements,
            ray_ends,
            letter_matrices,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// The tree as given, prefixes unexpanded.
    pub fn tree(&self) -> &TreeOfGroups {
        &self.tree
    }

    /// The tree with ray prefixes expanded; all indices refer to it.
    pub fn expanded(&self) -> &TreeOfGroups {
        self.amalgam.tree()
    }

    pub fn amalgam(&self) -> &Amalgam {
        &self.amalgam
    }

    pub fn position(&self, v: usize) -> &Vertex {
        &self.positions[v]
    }

    pub fn positions(&self) -> &[Vertex] {
        &self.positions
    }

    pub fn ray_end(&self, ray: usize) -> &ProjPoint {
        &self.ray_ends[ray]
    }

    /// Matrices of the group at an expanded vertex, indexed by element.
    pub fn group_matrices(&self, v: usize) -> &[Pgl2] {
        &self.elements[v]
    }

    /// Matrices of a ray's tail group.
    pub fn tail_matrices(&self, ray: usize) -> Result<Vec<Pgl2>> {
        let r = &self.expanded().rays[ray];
        let inj = Injection::new(&r.tail, &self.expanded().vertices[r.attach].group, &r.tail_into)?;
        Ok((0..r.tail.order()).map(|x| self.elements[r.attach][inj.apply(x)].clone()).collect())
    }

    /// Matrices of an expanded edge group, through its first endpoint.
    pub fn edge_matrices(&self, edge: usize) -> Result<Vec<Pgl2>> {
        let e = &self.expanded().edges[edge];
        let inj = Injection::new(&e.group, &self.expanded().vertices[e.a].group, &e.into_a)?;
        Ok((0..e.group.order()).map(|x| self.elements[e.a][inj.apply(x)].clone()).collect())
    }

    /// Every nontrivial element of every vertex group, each once.
    pub fn elliptic_generators(&self) -> Vec<(usize, usize, Pgl2)> {
        let mut out: Vec<(usize, usize, Pgl2)> = Vec::new();
        for (v, mats) in self.elements.iter().enumerate() {
            for (x, m) in mats.iter().enumerate().skip(1) {
                if !out.iter().any(|(_, _, o)| o.same(m)) {
                    out.push((v, x, m.clone()));
                }
            }
        }
        out
    }

    pub fn word_matrix(&self, w: &AmalgamWord) -> Pgl2 {
        w.letters
            .iter()
            .fold(Pgl2::identity(&self.field), |acc, &l| acc.mul(&self.letter_matrices[l]))
    }

    pub fn format_word(&self, w: &AmalgamWord) -> String {
        self.amalgam.format(w)
    }

    /// The core image vertex of least eccentricity within the core image;
    /// balls of the bounded checks are centered here.
    pub fn anchor(&self) -> Vertex {
        let core: BTreeSet<&Vertex> = self.positions.iter().collect();
        core.iter()
            .map(|v| (core.iter().map(|w| v.distance(w)).max().unwrap_or(0), *v))
            .min()
            .map(|(_, v)| v.clone())
            .expect("nonempty core")
    }

    /// Diameter of the core image.
    pub fn core_diameter(&self) -> u64 {
        let mut d = 0;
        for a in &self.positions {
            for b in &self.positions {
                d = d.max(a.distance(b));
            }
        }
        d
    }

    /// `L = 6`, `R = diameter + 2 max fixed radius + 4`.
    pub fn default_bounds(&self) -> Result<Bounds> {
        let mut s = 0;
        for (_, _, g) in self.elliptic_generators() {
            s = s.max(g.fixed_radius()?);
        }
        Ok(Bounds { length: DEFAULT_LENGTH, radius: self.core_diameter() + 2 * s + 4 })
    }

    /// The image of the tree inside the ball of the given radius around the anchor.
    pub fn image(&self, radius: u64) -> Result<Image> {
        let anchor = self.anchor();
        let mut out = SubtreeTruncation { radius, center: Some(anchor.clone()), ..Default::default() };
        let mut places = BTreeMap::new();
        for (i, v) in self.positions.iter().enumerate() {
            if anchor.distance(v) <= radius {
                out.vertices.insert(v.clone());
                places.insert(v.clone(), Place::Core(i));
            }
        }
        for e in &self.expanded().edges {
            let (a, b) = (&self.positions[e.a], &self.positions[e.b]);
            if out.contains(a) && out.contains(b) {
                out.insert_path(&[a.clone(), b.clone()]);
            }
        }
        for (ri, ray) in self.expanded().rays.iter().enumerate() {
            let mut prev = self.positions[ray.attach].clone();
            if anchor.distance(&prev) > radius {
                continue;
            }
            let mut step = 0;
            loop {
                let next = self.ray_ends[ri].walk(&prev, 1)?;
                if anchor.distance(&next) > radius {
                    out.ends.push((self.ray_ends[ri].clone(), prev.clone()));
                    break;
                }
                step += 1;
                if places.insert(next.clone(), Place::Ray { ray: ri, step }).is_some() {
                    return Err(Error::InvalidInput(format!(
                        "ray {} meets another part of the image at {next}",
                        ray.name
                    )));
                }
                out.insert_path(&[prev.clone(), next.clone()]);
                prev = next;
            }
        }
        out.boundary = out.vertices.iter().filter(|v| anchor.distance(v) == radius).cloned().collect();
        Ok(Image { tree: out, places })
    }

    /// Matrices of the group attached to a place of the image.
    pub fn place_matrices(&self, place: Place) -> Result<Vec<Pgl2>> {
        match place {
            Place::Core(v) => Ok(self.elements[v].clone()),
            Place::Ray { ray, .. } => self.tail_matrices(ray),
        }
    }

    /// Matrices of the group on the image edge joining two places, and a label.
    pub fn edge_between(&self, a: Place, b: Place) -> Result<Option<(String, Vec<Pgl2>)>> {
        let t = self.expanded();
        match (a, b) {
            (Place::Core(x), Place::Core(y)) => match t.edge_between(x, y) {
                Some(e) => Ok(Some((
                    format!("{} - {}", t.vertices[x].id, t.vertices[y].id),
                    self.edge_matrices(e)?,
                ))),
                None => Ok(None),
            },
            (Place::Core(x), Place::Ray { ray, step: 1 }) | (Place::Ray { ray, step: 1 }, Place::Core(x))
                if t.rays[ray].attach == x =>
            {
                Ok(Some((format!("{} ray {} step 1", t.vertices[x].id, t.rays[ray].name), self.tail_matrices(ray)?)))
            }
            (Place::Ray { ray: r1, step: s1 }, Place::Ray { ray: r2, step: s2 }) if r1 == r2 && s1.abs_diff(s2) == 1 => {
                Ok(Some((format!("ray {} step {}", t.rays[r1].name, s1.max(s2)), self.tail_matrices(r1)?)))
            }
            _ => Ok(None),
        }
    }

    pub fn place_name(&self, place: Place) -> String {
        let t = self.expanded();
        match place {
            Place::Core(v) => t.vertices[v].id.clone(),
            Place::Ray { ray, step } => format!("{}+{step}", t.rays[ray].name),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: EmbeddingJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&j)
    }

    pub fn from_json_value(j: &EmbeddingJson) -> Result<Self> {
        let field = j.field.build()?;
        let tree = j.tree.build()?;
        let vertex_map = j
            .vertex_map
            .iter()
            .map(|(id, s)| Ok((id.clone(), Vertex::parse(&field, s)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let expanded = tree.expand_prefixes();
        let mut generators = BTreeMap::new();
        for v in &expanded.vertices {
            let mut mats = Vec::new();
            for (g, _) in v.group.generators() {
                let key = format!("{}.{}", v.id, g);
                let lit = j
                    .generators
                    .get(&key)
                    .ok_or_else(|| Error::InvalidInput(format!("missing generator {key}")))?;
                mats.push(Pgl2::parse(&field, lit)?);
            }
            generators.insert(v.id.clone(), mats);
        }
        let ray_ends = expanded
            .rays
            .iter()
            .map(|r| {
                let lit = j
                    .ray_ends
                    .get(&r.name)
                    .ok_or_else(|| Error::InvalidInput(format!("missing end of ray {}", r.name)))?;
                ProjPoint::parse(&field, lit)
            })
            .collect::<Result<Vec<_>>>()?;
        EmbeddingSpec::new(&field, tree, &vertex_map, &generators, ray_ends)
    }

    pub fn to_json(&self) -> Result<EmbeddingJson> {
        let t = self.expanded();
        let vertex_map = t
            .vertices
            .iter()
            .zip(&self.positions)
            .map(|(v, pos)| (v.id.clone(), pos.label()))
            .collect();
        let mut generators = BTreeMap::new();
        for (v, vert) in t.vertices.iter().enumerate() {
            for (g, idx) in vert.group.generators() {
                generators.insert(format!("{}.{}", vert.id, g), self.elements[v][*idx].to_literal());
            }
        }
        let ray_ends = t
            .rays
            .iter()
            .zip(&self.ray_ends)
            .map(|(r, z)| Ok((r.name.clone(), z.to_literal()?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(EmbeddingJson {
            field: FieldJson::of(&self.field),
            tree: self.tree.to_json(),
            vertex_map,
            generators,
            ray_ends,
        })
    }
}

/// An enumerated group element with its matrix and classification.
#[derive(Debug, Clone)]
pub struct WordElement {
    pub word: AmalgamWord,
    pub matrix: Pgl2,
    /// Whether the element fixes a vertex of the tree (the identity included).
    pub elliptic: bool,
}

impl EmbeddingSpec {
    /// Every element of length at most `length`, shortest first.
    pub fn words(&self, length: usize, cap: usize) -> Result<Vec<WordElement>> {
        let filtration = self.amalgam.enumerate(length, cap)?;
        filtration
            .all()
            .map(|w| {
                let matrix = self.word_matrix(w);
                let elliptic = matrix.fixes_a_vertex()?;
                Ok(WordElement { word: w.clone(), matrix, elliptic })
            })
            .collect()
    }
}
