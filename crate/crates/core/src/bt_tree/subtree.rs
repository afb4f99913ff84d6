use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use super::ends::{median, project_to_apartment, ProjPoint};
use super::vertex::{Direction, Vertex};
use crate::error::Result;

/// A finite piece of the tree carrying the radius it was cut at.
#[derive(Clone, Debug, Default)]
pub struct SubtreeTruncation {
    pub vertices: BTreeSet<Vertex>,
    /// Edges stored with the smaller endpoint first.
    pub edges: BTreeSet<(Vertex, Vertex)>,
    /// Vertices on the truncation frontier, whose stars are incomplete.
    pub boundary: BTreeSet<Vertex>,
    /// Declared ends with the frontier vertex each half-line exits through.
    pub ends: Vec<(ProjPoint, Vertex)>,
    pub center: Option<Vertex>,
    pub radius: u64,
}

pub(crate) fn edge(a: &Vertex, b: &Vertex) -> (Vertex, Vertex) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl SubtreeTruncation {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.vertices.contains(v)
    }

    pub fn contains_edge(&self, a: &Vertex, b: &Vertex) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn adjacency(&self) -> BTreeMap<Vertex, Vec<Vertex>> {
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> =
            self.vertices.iter().map(|v| (v.clone(), Vec::new())).collect();
        for (a, b) in &self.edges {
            adj.entry(a.clone()).or_default().push(b.clone());
            adj.entry(b.clone()).or_default().push(a.clone());
        }
        adj
    }

    /// Connected and acyclic, with every edge joining adjacent listed vertices.
    pub fn is_tree(&self) -> bool {
        if self.vertices.is_empty() {
            return self.edges.is_empty();
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return false;
        }
        if self
            .edges
            .iter()
            .any(|(a, b)| a.distance(b) != 1 || !self.contains(a) || !self.contains(b))
        {
            return false;
        }
        let adj = self.adjacency();
        let start = self.vertices.iter().next().expect("nonempty");
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(v) = queue.pop_front() {
            for w in &adj[&v] {
                if seen.insert(w.clone()) {
                    queue.push_back(w.clone());
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    pub fn degree(&self, v: &Vertex) -> usize {
        self.edges.iter().filter(|(a, b)| a == v || b == v).count()
    }

    /// Adds `v` and an edge to an adjacent member, if any.
    pub fn insert_path(&mut self, path: &[Vertex]) {
        for w in path.windows(2) {
            self.edges.insert(edge(&w[0], &w[1]));
        }
        self.vertices.extend(path.iter().cloned());
    }

    /// Union, keeping the first operand's center and the larger radius.
    pub fn union(&self, other: &SubtreeTruncation) -> SubtreeTruncation {
        let mut out = self.clone();
        out.vertices.extend(other.vertices.iter().cloned());
        out.edges.extend(other.edges.iter().cloned());
        out.boundary.extend(other.boundary.iter().cloned());
        out.ends.extend(other.ends.iter().cloned());
        out.radius = out.radius.max(other.radius);
        if out.center.is_none() {
            out.center = other.center.clone();
        }
        out
    }

    /// DOT rendering; vertices are labelled `(n; b)` and declared ends are
    /// drawn as point-shaped nodes reached by arrows.
    pub fn to_dot(&self, name: &str, decorations: &BTreeMap<Vertex, String>) -> String {
        let mut ids: BTreeMap<&Vertex, usize> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            ids.insert(v, i);
        }
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", escape(name));
        let _ = writeln!(s, "  node [shape=circle, fontsize=10];");
        for (v, i) in &ids {
            let mut label = v.label();
            if let Some(d) = decorations.get(*v) {
                label = format!("{label}\\n{d}");
            }
            let shape = if self.boundary.contains(*v) { ", style=dashed" } else { "" };
            let _ = writeln!(s, "  v{i} [label=\"{}\"{shape}];", escape(&label));
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  v{} -- v{};", ids[a], ids[b]);
        }
        for (k, (z, exit)) in self.ends.iter().enumerate() {
            if let Some(i) = ids.get(exit) {
                let _ = writeln!(s, "  e{k} [shape=plaintext, label=\"{}\"];", escape(&z.label(6)));
                let _ = writeln!(s, "  v{i} -- e{k} [dir=forward, style=dotted];");
            }
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace("\\\\n", "\\n")
}

/// Whether `v` lies on the tree spanned by `ends`: at least two ends are
/// seen in different directions from `v`.
pub fn spans(v: &Vertex, ends: &[ProjPoint]) -> Result<bool> {
    let mut dirs = BTreeSet::new();
    for z in ends {
        dirs.insert(z.direction_at(v)?);
        if dirs.len() >= 2 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The vertex the truncation of the tree spanned by `ends` is centered at:
/// for two ends the apartment vertex nearest the standard vertex; otherwise
/// the branch point of least eccentricity among branch points, ties broken
/// by canonical vertex order.
pub fn core_center(ends: &[ProjPoint]) -> Result<Vertex> {
    let origin = Vertex::standard(ends[0].field());
    if ends.len() == 2 {
        return project_to_apartment(&origin, &ends[0], &ends[1]);
    }
    let mut branch = BTreeSet::new();
    for i in 0..ends.len() {
        for j in i + 1..ends.len() {
            for k in j + 1..ends.len() {
                branch.insert(median(&ends[i], &ends[j], &ends[k])?);
            }
        }
    }
    let best = branch
        .iter()
        .map(|v| (branch.iter().map(|w| v.distance(w)).max().unwrap_or(0), v))
        .min()
        .map(|(_, v)| v.clone())
        .expect("at least one triple");
    Ok(best)
}

/// The subtree spanned by a finite set of ends, cut to the ball of radius
/// `radius` around its core center. Fewer than two ends give the empty tree.
pub fn tree_of_ends(ends: &[ProjPoint], radius: u64) -> Result<SubtreeTruncation> {
    let mut distinct: Vec<ProjPoint> = Vec::new();
    for z in ends {
        if !distinct.iter().any(|w| w.same(z)) {
            distinct.push(z.clone());
        }
    }
    if distinct.len() < 2 {
        return Ok(SubtreeTruncation { radius, ..Default::default() });
    }
    let center = core_center(&distinct)?;
    tree_of_ends_around(&distinct, &center, radius)
}

/// Same as [`tree_of_ends`] but centered at a caller-chosen vertex of the span.
pub fn tree_of_ends_around(
    ends: &[ProjPoint],
    center: &Vertex,
    radius: u64,
) -> Result<SubtreeTruncation> {
    let mut out = SubtreeTruncation { radius, center: Some(center.clone()), ..Default::default() };
    out.vertices.insert(center.clone());
    let mut queue = VecDeque::from([(center.clone(), 0u64)]);
    while let Some((v, d)) = queue.pop_front() {
        let mut dirs: BTreeSet<Direction> = BTreeSet::new();
        for z in ends {
            dirs.insert(z.direction_at(&v)?);
        }
        if d == radius {
            if dirs.len() > 1 || v != *center {
                out.boundary.insert(v.clone());
            }
            continue;
        }
        for dir in dirs {
            let w = v.neighbor(dir);
            if out.vertices.insert(w.clone()) {
                out.edges.insert(edge(&v, &w));
                queue.push_back((w, d + 1));
            }
        }
    }
    for z in ends {
        let exit = z.walk(center, radius)?;
        out.ends.push((z.clone(), exit));
    }
    Ok(out)
}
