use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::groups::{FiniteGroup, Injection};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CoreVertex {
    pub id: String,
    pub group: FiniteGroup,
}

/// An edge with the generator images of its group in both endpoint groups.
#[derive(Debug, Clone)]
pub struct CoreEdge {
    pub a: usize,
    pub b: usize,
    pub group: FiniteGroup,
    pub into_a: Vec<usize>,
    pub into_b: Vec<usize>,
}

/// One decorated step of a ray before its constant tail.
#[derive(Debug, Clone)]
pub struct RayStep {
    pub id: String,
    pub vertex_group: FiniteGroup,
    pub edge_group: FiniteGroup,
    /// Images of the edge generators in the previous vertex group.
    pub into_prev: Vec<usize>,
    /// Images of the edge generators in this step's vertex group.
    pub into_next: Vec<usize>,
}

/// A half-line leaving the core: a finite decorated prefix followed by a
/// constant tail group on every further vertex and edge.
#[derive(Debug, Clone)]
pub struct Ray {
    pub name: String,
    pub attach: usize,
    pub prefix: Vec<RayStep>,
    pub tail: FiniteGroup,
    /// Images of the tail generators in the last prefix group (or the attach group).
    pub tail_into: Vec<usize>,
}

/// A finite core tree with decorated rays; every ray is one end.
#[derive(Debug, Clone)]
pub struct TreeOfGroups {
    pub vertices: Vec<CoreVertex>,
    pub edges: Vec<CoreEdge>,
    pub rays: Vec<Ray>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub location: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub issues: Vec<Issue>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndStabilizer {
    pub ray: usize,
    pub name: String,
    pub group: String,
    pub order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionVerdict {
    pub is_contraction: bool,
    pub reasons: Vec<String>,
}

impl TreeOfGroups {
    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::Group(format!("unknown vertex {id:?}")))
    }

    pub fn ray_index(&self, name: &str) -> Result<usize> {
        self.rays
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::Group(format!("unknown ray {name:?}")))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.a == v {
                    Some(e.b)
                } else if e.b == v {
                    Some(e.a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.iter().position(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// Path of core vertices from `a` to `b`.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.vertices.len()];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                let mut path = vec![b];
                let mut cur = b;
                while cur != a {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for y in self.neighbors(x) {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Injections of each edge group into its endpoints, `(into_a, into_b)`.
    pub fn injections(&self) -> Result<Vec<(Injection, Injection)>> {
        self.edges
            .iter()
            .map(|e| {
                let ga = &self.vertices[e.a].group;
                let gb = &self.vertices[e.b].group;
                Ok((Injection::new(&e.group, ga, &e.into_a)?, Injection::new(&e.group, gb, &e.into_b)?))
            })
            .collect()
    }

    /// The same tree with every ray prefix turned into core vertices and edges.
    pub fn expand_prefixes(&self) -> TreeOfGroups {
        let mut out = self.clone();
        for (ri, ray) in self.rays.iter().enumerate() {
            let mut last = ray.attach;
            for step in &ray.prefix {
                out.vertices.push(CoreVertex { id: step.id.clone(), group: step.vertex_group.clone() });
                let idx = out.vertices.len() - 1;
                out.edges.push(CoreEdge {
                    a: last,
                    b: idx,
                    group: step.edge_group.clone(),
                    into_a: step.into_prev.clone(),
                    into_b: step.into_next.clone(),
                });
                last = idx;
            }
            out.rays[ri].attach = last;
            out.rays[ri].prefix.clear();
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let push = |issues: &mut Vec<Issue>, location: String, message: String| issues.push(Issue { location, message });
        let n = self.vertices.len();
        if n == 0 {
            push(&mut issues, "core".into(), "core tree has no vertices".into());
        }
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id.clone()) {
                push(&mut issues, format!("vertex {}", v.id), "duplicate vertex id".into());
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.a >= n || e.b >= n || e.a == e.b {
                push(&mut issues, format!("edge {i}"), "edge endpoints invalid".into());
            }
        }
        if n > 0 && issues.is_empty() {
            if self.edges.len() + 1 != n {
                push(&mut issues, "core".into(), format!("{} vertices but {} edges: not a tree", n, self.edges.len()));
            } else if (0..n).any(|v| self.path(0, v).is_none()) {
                push(&mut issues, "core".into(), "core is not connected".into());
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.a >= n || e.b >= n {
                continue;
            }
            let loc = format!("edge {i} ({} - {})", self.vertices[e.a].id, self.vertices[e.b].id);
            if let Err(err) = Injection::new(&e.group, &self.vertices[e.a].group, &e.into_a) {
                push(&mut issues, loc.clone(), format!("into {}: {err}", self.vertices[e.a].id));
            }
            if let Err(err) = Injection::new(&e.group, &self.vertices[e.b].group, &e.into_b) {
                push(&mut issues, loc, format!("into {}: {err}", self.vertices[e.b].id));
            }
        }
        let mut names = BTreeSet::new();
        for ray in &self.rays {
            let loc = format!("ray {}", ray.name);
            if !names.insert(ray.name.clone()) {
                push(&mut issues, loc.clone(), "duplicate ray name (one ray per end)".into());
            }
            if ray.attach >= n {
                push(&mut issues, loc, "attach vertex out of range".into());
                continue;
            }
            let mut prev = &self.vertices[ray.attach].group;
            for step in &ray.prefix {
                let sl = format!("{loc} step {}", step.id);
                if let Err(err) = Injection::new(&step.edge_group, prev, &step.into_prev) {
                    push(&mut issues, sl.clone(), err.to_string());
                }
                if let Err(err) = Injection::new(&step.edge_group, &step.vertex_group, &step.into_next) {
                    push(&mut issues, sl, err.to_string());
                }
                prev = &step.vertex_group;
            }
            if let Err(err) = Injection::new(&ray.tail, prev, &ray.tail_into) {
                push(&mut issues, format!("{loc} tail"), err.to_string());
            }
            if ray.tail.is_trivial() {
                push(&mut issues, loc, "half-line carrying only trivial groups".into());
            }
        }
        ValidationReport { valid: issues.is_empty(), issues }
    }

    /// Fails with the first validation issue.
    pub fn check(&self) -> Result<()> {
        let report = self.validate();
        match report.issues.first() {
            None => Ok(()),
            Some(i) => Err(Error::Group(format!("{}: {}", i.location, i.message))),
        }
    }

    /// The group fixing the end of a ray: its tail, which must be cyclic.
    pub fn end_stabilizer(&self, ray: usize) -> Result<EndStabilizer> {
        self.check()?;
        let r = self.rays.get(ray).ok_or_else(|| Error::Group(format!("no ray {ray}")))?;
        if !r.tail.is_cyclic() {
            return Err(Error::Group(format!(
                "end {} has non-cyclic stabilizer {}",
                r.name,
                r.tail.describe()
            )));
        }
        Ok(EndStabilizer { ray, name: r.name.clone(), group: r.tail.describe(), order: r.tail.order() })
    }

    /// Whether `inner` is a contraction of `outer` along the vertex map
    /// `embedding` (inner id to outer id): the end sets correspond and the
    /// groups increase along every path from an outer vertex toward the image.
    pub fn contraction_check(
        inner: &TreeOfGroups,
        outer: &TreeOfGroups,
        embedding: &BTreeMap<String, String>,
    ) -> Result<ContractionVerdict> {
        inner.check()?;
        outer.check()?;
        let inner = inner.expand_prefixes();
        let outer = outer.expand_prefixes();
        let mut map = vec![usize::MAX; inner.vertices.len()];
        for (i, v) in inner.vertices.iter().enumerate() {
            let target = embedding
                .get(&v.id)
                .ok_or_else(|| Error::InvalidInput(format!("vertex {} is not mapped", v.id)))?;
            map[i] = outer.vertex_index(target)?;
        }
        let image: BTreeSet<usize> = map.iter().copied().collect();
        if image.len() != map.len() {
            return Err(Error::InvalidInput("embedding is not injective".into()));
        }
        for e in &inner.edges {
            if outer.edge_between(map[e.a], map[e.b]).is_none() {
                return Err(Error::InvalidInput(format!(
                    "edge {} - {} does not map to an edge",
                    inner.vertices[e.a].id, inner.vertices[e.b].id
                )));
            }
        }
        let mut reasons = Vec::new();
        for (i, v) in inner.vertices.iter().enumerate() {
            if outer.vertices[map[i]].group.order() != v.group.order() {
                reasons.push(format!("group at {} changes under the embedding", v.id));
            }
        }
        // where each outer vertex lands on the image
        let landing = |x: usize| -> (usize, Vec<usize>) {
            let mut best: Option<Vec<usize>> = None;
            for &t in &image {
                let p = outer.path(x, t).expect("connected");
                if best.as_ref().is_none_or(|b| p.len() < b.len()) {
                    best = Some(p);
                }
            }
            let p = best.expect("nonempty image");
            (*p.last().expect("path"), p)
        };
        for x in 0..outer.vertices.len() {
            if image.contains(&x) {
                continue;
            }
            let (_, path) = landing(x);
            for w in path.windows(2) {
                let (u, v) = (w[0], w[1]);
                let gu = outer.vertices[u].group.order();
                let gv = outer.vertices[v].group.order();
                let ge = outer.edges[outer.edge_between(u, v).expect("path edge")].group.order();
                if !(gu <= gv && ge == gu) {
                    reasons.push(format!(
                        "groups do not increase from {} toward {}",
                        outer.vertices[u].id, outer.vertices[v].id
                    ));
                }
            }
        }
        let mut inner_ends: Vec<(usize, usize)> =
            inner.rays.iter().map(|r| (map[r.attach], r.tail.order())).collect();
        let mut outer_ends: Vec<(usize, usize)> = outer
            .rays
            .iter()
            .map(|r| {
                let land = if image.contains(&r.attach) { r.attach } else { landing(r.attach).0 };
                (land, r.tail.order())
            })
            .collect();
        inner_ends.sort_unstable();
        outer_ends.sort_unstable();
        if inner_ends != outer_ends {
            reasons.push(format!(
                "end sets differ: {} ends inside, {} outside",
                inner_ends.len(),
                outer_ends.len()
            ));
        }
        Ok(ContractionVerdict { is_contraction: reasons.is_empty(), reasons })
    }
}
