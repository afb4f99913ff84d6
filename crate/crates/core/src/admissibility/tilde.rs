use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::spec::EmbeddingSpec;
use crate::bt_tree::{self, Direction, ProjPoint, SubtreeTruncation, Vertex};
use crate::error::{Error, Result};
use crate::pgl2::{generate_group, Pgl2};

/// Cap on the size of generated stabilizers; larger means not finite for
/// the purposes of the checks.
pub const STABILIZER_CAP: usize = 1024;

/// The subtree spanned by the fixed ends of every vertex group, cut to a ball
/// around the anchor, with the order of the generated group at each vertex.
#[derive(Debug, Clone)]
pub struct TildeTree {
    pub tree: SubtreeTruncation,
    pub fixed_ends: Vec<ProjPoint>,
    /// Order of the group generated by vertex-group elements fixing each
    /// vertex; `None` when it exceeds [`STABILIZER_CAP`].
    pub labels: BTreeMap<Vertex, Option<usize>>,
}

impl TildeTree {
    pub fn contains(&self, v: &Vertex) -> bool {
        self.tree.contains(v)
    }

    pub fn neighbors(&self, v: &Vertex) -> Result<Vec<Vertex>> {
        Ok(v.star()?.into_iter().map(|(_, w)| w).filter(|w| self.tree.contains_edge(v, w)).collect())
    }

    pub fn decorations(&self) -> BTreeMap<Vertex, String> {
        self.labels
            .iter()
            .filter(|(_, o)| **o != Some(1))
            .map(|(v, o)| (v.clone(), o.map_or("inf".to_string(), |n| format!("|G|={n}"))))
            .collect()
    }
}

/// Fixed ends of the nontrivial group elements, deduplicated.
pub fn fixed_ends(spec: &EmbeddingSpec) -> Result<Vec<ProjPoint>> {
    let mut ends: Vec<ProjPoint> = Vec::new();
    for (v, x, g) in spec.elliptic_generators() {
        let fp = g.fixed_points()?;
        if fp.len() != 2 {
            return Err(Error::InvalidInput(format!(
                "element {} at {} does not have two fixed points",
                spec.expanded().vertices[v].group.name(x),
                spec.expanded().vertices[v].id
            )));
        }
        for z in fp {
            if !ends.iter().any(|w| w.same(&z)) {
                ends.push(z);
            }
        }
    }
    Ok(ends)
}

/// The span of `ends` inside the ball of `radius` around `anchor`.
pub fn span_in_ball(ends: &[ProjPoint], anchor: &Vertex, radius: u64) -> Result<SubtreeTruncation> {
    let mut out = SubtreeTruncation { radius, center: Some(anchor.clone()), ..Default::default() };
    if ends.len() < 2 {
        return Ok(out);
    }
    // nearest vertex of the span: step toward the ends until they split
    let mut start = anchor.clone();
    loop {
        let dirs: BTreeSet<Direction> = ends.iter().map(|z| z.direction_at(&start)).collect::<Result<_>>()?;
        if dirs.len() > 1 {
            break;
        }
        start = start.neighbor(*dirs.iter().next().expect("nonempty"));
        if anchor.distance(&start) > radius {
            return Ok(out);
        }
    }
    out.vertices.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let dirs: BTreeSet<Direction> = ends.iter().map(|z| z.direction_at(&v)).collect::<Result<_>>()?;
        for dir in dirs {
            let w = v.neighbor(dir);
            if anchor.distance(&w) > radius {
                out.boundary.insert(v.clone());
                continue;
            }
            if out.vertices.insert(w.clone()) {
                out.insert_path(&[v.clone(), w.clone()]);
                queue.push_back(w);
            }
        }
    }
    for z in ends {
        let exit = z.walk(anchor, radius)?;
        if out.contains(&exit) {
            out.ends.push((z.clone(), exit));
        }
    }
    Ok(out)
}

/// Orders of the groups generated by elements of `pool` fixing each vertex.
pub fn stabilizer_orders(
    spec: &EmbeddingSpec,
    vertices: &BTreeSet<Vertex>,
    pool: &[Pgl2],
) -> Result<BTreeMap<Vertex, Option<usize>>> {
    let mut out = BTreeMap::new();
    for v in vertices {
        let mut gens = Vec::new();
        for g in pool {
            if g.fixes(v)? {
                gens.push(g.clone());
            }
        }
        let order = generate_group(&gens, spec.field(), STABILIZER_CAP).map(|g| g.len());
        out.insert(v.clone(), order);
    }
    Ok(out)
}

/// The tilde tree truncated to `radius` around the embedding's anchor. Vertices
/// are labelled by the group generated by the vertex-group elements that fix
/// them, so fixed-radius thickening around mirrors shows up in the labels.
pub fn build_tilde_tree(spec: &EmbeddingSpec, radius: u64) -> Result<TildeTree> {
    let ends = fixed_ends(spec)?;
    let anchor = spec.anchor();
    let tree = span_in_ball(&ends, &anchor, radius)?;
    let pool: Vec<Pgl2> = spec.elliptic_generators().into_iter().map(|(_, _, g)| g).collect();
    let labels = stabilizer_orders(spec, &tree.vertices, &pool)?;
    Ok(TildeTree { tree, fixed_ends: ends, labels })
}

/// Whether the apartment `]z, w[` contains the edge `a - b`.
pub(crate) fn apartment_has_edge(a: &Vertex, b: &Vertex, z: &ProjPoint, w: &ProjPoint) -> Result<bool> {
    Ok(bt_tree::on_apartment(a, z, w)? && bt_tree::on_apartment(b, z, w)?)
}
