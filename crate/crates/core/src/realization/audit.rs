use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::OrbitTree;
use crate::admissibility::{span_in_ball, Verdict, STABILIZER_CAP};
use crate::bt_tree::{ProjPoint, SubtreeTruncation, Vertex};
use crate::error::{Error, Result};
use crate::pgl2::{same_set, ElementClass, Order, Pgl2};
use crate::tree_of_groups::{ContractionVerdict, CoreVertex, TreeOfGroups};

/// Elements closer than this to the identity (as a valuation of the
/// off-identity part of the normalised matrix) must be torsion.
pub const PROXIMITY_THRESHOLD: i64 = 8;

/// Base meets its translate exactly when the word has length at most one.
pub fn disjointness_audit(ot: &OrbitTree) -> Verdict {
    let base = &ot.base.tree.vertices;
    let mut checked = 0;
    for w in &ot.words {
        let image = &ot.translates[&w.word];
        checked += 1;
        let shared = image.intersection(base).next();
        let name = || ot.spec.format_word(&w.word);
        match (w.word.len(), shared) {
            (0, _) if image != base => {
                return Verdict::Refuted { witness: "the identity moves the base".into() };
            }
            (1, None) => {
                return Verdict::Refuted { witness: format!("{} moves the base off itself", name()) };
            }
            (n, Some(v)) if n >= 2 => {
                return Verdict::Refuted { witness: format!("{} · base meets the base at {v}", name()) };
            }
            _ => {}
        }
    }
    Verdict::Verified {
        detail: format!("{checked} words up to length {}; only length <= 1 meets the base", ot.bounds.length),
    }
}

/// Enumerated elements fixing `v`.
pub fn stabilizer_of_vertex(ot: &OrbitTree, v: &Vertex) -> Result<Vec<Pgl2>> {
    stabilizer_within(ot, v, ot.bounds.length)
}

fn stabilizer_within(ot: &OrbitTree, v: &Vertex, length: usize) -> Result<Vec<Pgl2>> {
    if !ot.tree.contains(v) {
        return Err(Error::InvalidInput(format!("{v} is not in the orbit tree")));
    }
    let mut out = Vec::new();
    for w in ot.words.iter().filter(|w| w.elliptic && w.word.len() <= length) {
        if w.matrix.fixes(v)? {
            out.push(w.matrix.clone());
        }
    }
    Ok(out)
}

/// The stabilizer of every core image vertex equals its attached group.
pub fn stabilizer_audit(ot: &OrbitTree) -> Result<Verdict> {
    let t = ot.spec.expanded();
    let mut checked = 0;
    for (u, pos) in ot.spec.positions().iter().enumerate() {
        if !ot.base.tree.contains(pos) {
            continue;
        }
        checked += 1;
        let found = stabilizer_of_vertex(ot, pos)?;
        let expected = ot.spec.group_matrices(u);
        if !same_set(&found, expected) {
            return Ok(Verdict::Refuted {
                witness: format!(
                    "stabilizer of {} has {} enumerated elements, its group has {}",
                    t.vertices[u].id,
                    found.len(),
                    expected.len()
                ),
            });
        }
    }
    Ok(Verdict::Verified { detail: format!("{checked} core vertices at length <= {}", ot.bounds.length) })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscretenessReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub vertex: String,
    /// Stabilizer sizes at lengths `L - 2` and `L`.
    pub stabilizer_sizes: (usize, usize),
    pub screened: usize,
}

fn off_identity_valuation(g: &Pgl2) -> Result<Option<i64>> {
    let m = g.matrix();
    let diff = m.a.try_sub(&m.d)?;
    let base = match m.a.valuation()? {
        Some(v) => v,
        None => return Ok(None),
    };
    let mut low = i64::MAX;
    for x in [&diff, &m.b, &m.c] {
        low = low.min(x.valuation_lower_bound());
    }
    Ok(Some(low - base))
}

/// Stabilizer of the anchor is finite and stable under shortening the words
/// by two, and no enumerated element is parabolic or a non-torsion element
/// fixing a vertex.
pub fn discreteness_audit(ot: &OrbitTree) -> Result<DiscretenessReport> {
    let anchor = ot.anchor();
    let short = stabilizer_within(ot, &anchor, ot.bounds.length.saturating_sub(2))?.len();
    let full = stabilizer_within(ot, &anchor, ot.bounds.length)?.len();
    let mut report = DiscretenessReport {
        verdict: Verdict::Verified { detail: String::new() },
        vertex: anchor.label(),
        stabilizer_sizes: (short, full),
        screened: 0,
    };
    for w in ot.words.iter().skip(1) {
        report.screened += 1;
        let name = || ot.spec.format_word(&w.word);
        let class = match w.matrix.classify() {
            Ok(c) => c,
            Err(Error::PrecisionExhausted(_)) => {
                report.verdict = Verdict::Refuted { witness: format!("{} is indistinguishable from a parabolic", name()) };
                return Ok(report);
            }
            Err(e) => return Err(e),
        };
        let near = off_identity_valuation(&w.matrix)?.is_some_and(|v| v >= PROXIMITY_THRESHOLD);
        let torsion = match class {
            ElementClass::Parabolic => false,
            ElementClass::Hyperbolic { .. } => true,
            _ => matches!(w.matrix.order(STABILIZER_CAP as u64)?, Order::Finite(_)),
        };
        if !torsion {
            let what = if near { "close to the identity" } else { "fixes a vertex" };
            report.verdict = Verdict::Refuted {
                witness: format!("{} {what} but does not have finite order", name()),
            };
            return Ok(report);
        }
    }
    report.verdict = if short != full || full > STABILIZER_CAP {
        Verdict::Inconclusive {
            reason: format!(
                "stabilizer of {} grows from {short} to {full} between lengths {} and {}; raise the length bound",
                anchor,
                ot.bounds.length.saturating_sub(2),
                ot.bounds.length
            ),
        }
    } else {
        Verdict::Verified {
            detail: format!("stabilizer of {anchor} has {full} elements at lengths {} and {}", ot.bounds.length.saturating_sub(2), ot.bounds.length),
        }
    };
    Ok(report)
}

/// Inner approximation of the minimal invariant subtree: the span of the
/// fixed ends of every enumerated hyperbolic element.
#[derive(Debug, Clone)]
pub struct LimitTree {
    pub tree: SubtreeTruncation,
    pub hyperbolic: usize,
    pub ends: Vec<ProjPoint>,
    /// Vertices of the approximation missing from the orbit tree.
    pub outside: Vec<Vertex>,
}

pub fn limit_tree_approx(ot: &OrbitTree) -> Result<LimitTree> {
    let mut ends: Vec<ProjPoint> = Vec::new();
    let mut hyperbolic = 0;
    for w in ot.words.iter().filter(|w| !w.elliptic) {
        if !matches!(w.matrix.classify()?, ElementClass::Hyperbolic { .. }) {
            continue;
        }
        hyperbolic += 1;
        for z in w.matrix.fixed_points()? {
            if !ends.iter().any(|e| e.same(&z)) {
                ends.push(z);
            }
        }
    }
    let tree = span_in_ball(&ends, &ot.anchor(), ot.bounds.radius)?;
    let outside = tree.vertices.iter().filter(|v| !ot.tree.contains(v)).cloned().collect();
    Ok(LimitTree { tree, hyperbolic, ends, outside })
}

/// Restricts the input to the core vertices whose image meets the span of all
/// enumerated fixed ends, and checks the result is a contraction of the input.
pub fn contraction_audit(ot: &OrbitTree) -> Result<ContractionVerdict> {
    let mut ends: Vec<ProjPoint> = Vec::new();
    for w in ot.words.iter().skip(1) {
        if !matches!(w.matrix.classify()?, ElementClass::Elliptic { .. } | ElementClass::Hyperbolic { .. }) {
            continue;
        }
        let fixed = match w.matrix.fixed_points() {
            Ok(f) => f,
            Err(Error::NotRational(_)) => continue,
            Err(e) => return Err(e),
        };
        for z in fixed {
            if !ends.iter().any(|e| e.same(&z)) {
                ends.push(z);
            }
        }
    }
    let span = span_in_ball(&ends, &ot.anchor(), ot.bounds.radius)?;
    let t = ot.spec.expanded();
    let mut keep: BTreeSet<usize> = (0..t.vertices.len())
        .filter(|&u| span.contains(ot.spec.position(u)) || !ot.base.tree.contains(ot.spec.position(u)))
        .collect();
    for r in &t.rays {
        keep.insert(r.attach);
    }
    // close up to a subtree
    let seeds: Vec<usize> = keep.iter().copied().collect();
    for &a in &seeds {
        for &b in &seeds {
            keep.extend(t.path(a, b).unwrap_or_default());
        }
    }
    let renumber: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let inner = TreeOfGroups {
        vertices: keep.iter().map(|&u| CoreVertex { id: t.vertices[u].id.clone(), group: t.vertices[u].group.clone() }).collect(),
        edges: t
            .edges
            .iter()
            .filter(|e| keep.contains(&e.a) && keep.contains(&e.b))
            .map(|e| {
                let mut e = e.clone();
                e.a = renumber[&e.a];
                e.b = renumber[&e.b];
                e
            })
            .collect(),
        rays: t
            .rays
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.attach = renumber[&r.attach];
                r
            })
            .collect(),
    };
    let embedding = inner.vertices.iter().map(|v| (v.id.clone(), v.id.clone())).collect();
    TreeOfGroups::contraction_check(&inner, t, &embedding)
}
