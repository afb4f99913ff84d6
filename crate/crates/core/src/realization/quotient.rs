use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{stabilizer_of_vertex, OrbitTree};
use crate::admissibility::{Bounds, Place};
use crate::bt_tree::Vertex;
use crate::error::{Error, Result};
use crate::pgl2::{same_set, Order, Pgl2};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientVertex {
    pub place: String,
    pub position: String,
    /// Order of the enumerated stabilizer, equal to the attached group's.
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientEdge {
    pub a: String,
    pub b: String,
    pub order: usize,
}

/// The truncated orbit tree modulo the enumerated action, identified with
/// the truncated input through the image.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientGraph {
    pub vertices: Vec<QuotientVertex>,
    pub edges: Vec<QuotientEdge>,
    /// First Betti number.
    pub betti: usize,
}

impl QuotientGraph {
    pub fn to_dot(&self, name: &str) -> String {
        let ids: BTreeMap<&str, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.place.as_str(), i)).collect();
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", name.replace('"', "\\\""));
        let _ = writeln!(s, "  node [shape=box, fontsize=10];");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  q{i} [label=\"{}\\n{}\\n|G|={}\"];", v.place, v.position, v.order);
        }
        for e in &self.edges {
            let _ = writeln!(s, "  q{} -- q{} [label=\"{}\"];", ids[e.a.as_str()], ids[e.b.as_str()], e.order);
        }
        s.push_str("}\n");
        s
    }
}

fn compare(found: &[Pgl2], expected: &[Pgl2], what: impl FnOnce() -> String) -> Result<()> {
    if same_set(found, expected) {
        Ok(())
    } else {
        Err(Error::NotAdmissible(format!(
            "stabilizer of {} has {} enumerated elements but its group has order {}",
            what(),
            found.len(),
            expected.len()
        )))
    }
}

/// Quotient of the orbit tree, checked against the input: the section must be
/// well defined, edges must map to edges and every stabilizer must equal the
/// attached group.
pub fn quotient_graph(ot: &OrbitTree) -> Result<QuotientGraph> {
    let spec = ot.spec;
    if let Some((x, y0, y1)) = ot.conflicts.first() {
        return Err(Error::NotAdmissible(format!(
            "{x} is a translate of both {} and {}",
            spec.place_name(ot.base.places[y0]),
            spec.place_name(ot.base.places[y1])
        )));
    }
    for (a, b) in &ot.tree.edges {
        let (ya, yb) = (&ot.section[a].0, &ot.section[b].0);
        if !ot.base.tree.contains_edge(ya, yb) {
            return Err(Error::NotAdmissible(format!("edge {a} - {b} does not map to an edge of the image")));
        }
    }
    let mut vertices = Vec::new();
    for (v, place) in &ot.base.places {
        let found = stabilizer_of_vertex(ot, v)?;
        compare(&found, &spec.place_matrices(*place)?, || format!("{} at {v}", spec.place_name(*place)))?;
        vertices.push(QuotientVertex { place: spec.place_name(*place), position: v.label(), order: found.len() });
    }
    let mut edges = Vec::new();
    for (a, b) in &ot.base.tree.edges {
        let (pa, pb) = (ot.base.places[a], ot.base.places[b]);
        let (label, expected) = spec.edge_between(pa, pb)?.ok_or_else(|| {
            Error::NotAdmissible(format!("{} - {} is not an edge of the input", spec.place_name(pa), spec.place_name(pb)))
        })?;
        let mut found = Vec::new();
        for g in stabilizer_of_vertex(ot, a)? {
            if g.fixes(b)? {
                found.push(g);
            }
        }
        compare(&found, &expected, || format!("edge {label}"))?;
        edges.push(QuotientEdge { a: spec.place_name(pa), b: spec.place_name(pb), order: found.len() });
    }
    let betti = (edges.len() + 1).saturating_sub(vertices.len());
    Ok(QuotientGraph { vertices, edges, betti })
}

#[derive(Debug, Clone, Serialize)]
pub struct EndReport {
    pub ray: String,
    pub end: String,
    /// Order of the stabilizer read off the orbit tree.
    pub order: usize,
    /// Order of the tail group in the abstract tree of groups.
    pub abstract_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub field: String,
    pub precision: u32,
    pub bounds: Bounds,
    pub ends: Vec<EndReport>,
    pub count: usize,
    pub degrees: Vec<usize>,
    /// First Betti number of the quotient.
    pub genus: usize,
}

/// Ends of the quotient with their cyclic stabilizer orders.
pub fn branch_report(ot: &OrbitTree) -> Result<BranchReport> {
    let spec = ot.spec;
    let quotient = quotient_graph(ot)?;
    let t = spec.expanded();
    let mut ends = Vec::new();
    for (ri, ray) in t.rays.iter().enumerate() {
        let exit: Option<&Vertex> = ot
            .base
            .places
            .iter()
            .filter(|(_, p)| matches!(p, Place::Ray { ray, .. } if *ray == ri))
            .max_by_key(|(_, p)| match p {
                Place::Ray { step, .. } => *step,
                Place::Core(_) => 0,
            })
            .map(|(v, _)| v);
        let exit = match exit {
            Some(v) => v.clone(),
            None => spec.position(ray.attach).clone(),
        };
        let stab = stabilizer_of_vertex(ot, &exit)?;
        let cyclic = stab
            .iter()
            .map(|g| g.order(stab.len() as u64))
            .collect::<Result<Vec<_>>>()?.contains(&Order::Finite(stab.len() as u64));
        if !cyclic {
            return Err(Error::NotAdmissible(format!("stabilizer of end {} is not cyclic", ray.name)));
        }
        let abstract_order = t.end_stabilizer(ri).map_err(|e| Error::NotAdmissible(e.to_string()))?.order;
        if abstract_order != stab.len() {
            return Err(Error::NotAdmissible(format!(
                "end {} has stabilizer of order {} but tail group of order {abstract_order}",
                ray.name,
                stab.len()
            )));
        }
        ends.push(EndReport { ray: ray.name.clone(), end: spec.ray_end(ri).to_literal()?, order: stab.len(), abstract_order });
    }
    Ok(BranchReport {
        field: spec.field().describe(),
        precision: spec.field().precision(),
        bounds: ot.bounds,
        count: ends.len(),
        degrees: ends.iter().map(|e| e.order).collect(),
        ends,
        genus: quotient.betti,
    })
}
