use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::spec::{Bounds, EmbeddingSpec, Image, WordElement};
use super::tilde::{apartment_has_edge, build_tilde_tree, TildeTree, STABILIZER_CAP};
use crate::bt_tree::Vertex;
use crate::error::Result;
use crate::pgl2::{contains_element, generate_group, same_set, Pgl2};
use crate::tree_of_groups::DEFAULT_WORD_CAP;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Verified { detail: String },
    Refuted { witness: String },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    fn rank(&self) -> u8 {
        match self {
            Verdict::Verified { .. } => 0,
            Verdict::Inconclusive { .. } => 1,
            Verdict::Refuted { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Verified,
    Inconclusive,
    Refuted,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: u8,
    pub name: &'static str,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Items examined.
    pub checked: usize,
    /// Items left out because their star reaches the truncation frontier.
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeSummary {
    pub vertices: usize,
    pub edges: usize,
    pub ends: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub field: String,
    pub precision: u32,
    pub bounds: Bounds,
    pub anchor: String,
    pub words: usize,
    pub image: TreeSummary,
    pub tilde_tree: TreeSummary,
    pub conditions: Vec<ConditionReport>,
    pub overall: Overall,
}

impl CheckReport {
    pub fn condition(&self, n: u8) -> &ConditionReport {
        &self.conditions[usize::from(n) - 1]
    }

    pub fn any_refuted(&self) -> bool {
        self.overall == Overall::Refuted
    }
}

/// Everything the five checks share.
pub struct CheckContext<'a> {
    pub spec: &'a EmbeddingSpec,
    pub bounds: Bounds,
    pub image: Image,
    pub tilde: TildeTree,
    pub words: Vec<WordElement>,
}

impl<'a> CheckContext<'a> {
    pub fn new(spec: &'a EmbeddingSpec, bounds: Bounds) -> Result<Self> {
        let image = spec.image(bounds.radius)?;
        let tilde = build_tilde_tree(spec, bounds.radius)?;
        let words = spec.words(bounds.length, DEFAULT_WORD_CAP)?;
        Ok(CheckContext { spec, bounds, image, tilde, words })
    }

    fn interior(&self, v: &Vertex) -> bool {
        self.spec.anchor().distance(v) < self.bounds.radius
    }

    /// Group generated by enumerated elements fixing all of `vertices`, or
    /// `Err(word)` naming an element that pushes it past the cap.
    fn stabilizer(&self, vertices: &[&Vertex]) -> Result<Option<Vec<Pgl2>>> {
        let mut gens: Vec<Pgl2> = Vec::new();
        for w in &self.words {
            if !w.elliptic || contains_element(&gens, &w.matrix) {
                continue;
            }
            let mut fixes = true;
            for v in vertices {
                if !w.matrix.fixes(v)? {
                    fixes = false;
                    break;
                }
            }
            if fixes {
                gens.push(w.matrix.clone());
            }
        }
        Ok(generate_group(&gens, self.spec.field(), STABILIZER_CAP))
    }

    /// Shortest enumerated word with the given matrix, for witnesses.
    fn name_of(&self, g: &Pgl2) -> String {
        self.words
            .iter()
            .find(|w| w.matrix.same(g))
            .map(|w| self.spec.format_word(&w.word))
            .unwrap_or_else(|| g.short(6))
    }

    fn condition_one(&self) -> ConditionReport {
        let missing = self.image.tree.vertices.iter().find(|v| !self.tilde.contains(v));
        let verdict = match missing {
            Some(v) => Verdict::Refuted {
                witness: format!("image vertex {} ({}) lies outside the tilde tree", v, self.spec.place_name(self.image.places[v])),
            },
            None => Verdict::Verified {
                detail: format!("all {} image vertices within radius {}", self.image.tree.vertices.len(), self.bounds.radius),
            },
        };
        ConditionReport { condition: 1, name: "image inside tilde tree", verdict, checked: self.image.tree.vertices.len(), skipped: 0 }
    }

    fn condition_two(&self) -> Result<ConditionReport> {
        let t = self.spec.expanded();
        let mut checked = 0;
        let mut failures = Vec::new();
        for (v, vert) in t.vertices.iter().enumerate() {
            for (x, g) in self.spec.group_matrices(v).iter().enumerate().skip(1) {
                checked += 1;
                let fp = g.fixed_points()?;
                let mut found = false;
                'search: for delta in &self.words {
                    let z = delta.matrix.apply(&fp[0])?;
                    let w = delta.matrix.apply(&fp[1])?;
                    for (a, b) in &self.image.tree.edges {
                        if apartment_has_edge(a, b, &z, &w)? {
                            found = true;
                            break 'search;
                        }
                    }
                }
                if !found {
                    failures.push(format!("{} at {}", vert.group.name(x), vert.id));
                }
            }
        }
        let verdict = if failures.is_empty() {
            Verdict::Verified { detail: format!("conjugators found among words of length <= {}", self.bounds.length) }
        } else {
            Verdict::Inconclusive {
                reason: format!(
                    "no conjugator of length <= {} brings a mirror onto an image edge for: {}",
                    self.bounds.length,
                    failures.join(", ")
                ),
            }
        };
        Ok(ConditionReport { condition: 2, name: "mirrors meet the image", verdict, checked, skipped: 0 })
    }

    /// Compares generated stabilizers with the attached groups.
    fn compare(&self, expected: &[Pgl2], found: Option<Vec<Pgl2>>, at: &str) -> Option<String> {
        match found {
            None => Some(format!("stabilizer of {at} exceeds {STABILIZER_CAP} elements")),
            Some(found) => {
                if let Some(extra) = found.iter().find(|g| !contains_element(expected, g)) {
                    return Some(format!(
                        "{} fixes {at} but is not in its group of order {}",
                        self.name_of(extra),
                        expected.len()
                    ));
                }
                if let Some(lost) = expected.iter().find(|g| !contains_element(&found, g)) {
                    return Some(format!("{} in the group of {at} does not fix it", lost.short(6)));
                }
                debug_assert!(same_set(expected, &found));
                None
            }
        }
    }

    fn condition_three(&self) -> Result<ConditionReport> {
        let mut checked = 0;
        let mut skipped = 0;
        for (v, place) in &self.image.places {
            if !self.interior(v) {
                skipped += 1;
                continue;
            }
            checked += 1;
            let expected = self.spec.place_matrices(*place)?;
            let at = format!("{} = {}", self.spec.place_name(*place), v);
            if let Some(witness) = self.compare(&expected, self.stabilizer(&[v])?, &at) {
                return Ok(ConditionReport { condition: 3, name: "vertex stabilizers", verdict: Verdict::Refuted { witness }, checked, skipped });
            }
        }
        let verdict = Verdict::Verified {
            detail: format!("stabilizers from words of length <= {} match at every interior image vertex", self.bounds.length),
        };
        Ok(ConditionReport { condition: 3, name: "vertex stabilizers", verdict, checked, skipped })
    }

    fn condition_four(&self) -> Result<ConditionReport> {
        let mut checked = 0;
        let mut skipped = 0;
        for (a, b) in &self.image.tree.edges {
            if !self.interior(a) || !self.interior(b) {
                skipped += 1;
                continue;
            }
            let (pa, pb) = (self.image.places[a], self.image.places[b]);
            let Some((label, expected)) = self.spec.edge_between(pa, pb)? else {
                continue;
            };
            checked += 1;
            if let Some(witness) = self.compare(&expected, self.stabilizer(&[a, b])?, &format!("edge {label}")) {
                return Ok(ConditionReport { condition: 4, name: "edge stabilizers", verdict: Verdict::Refuted { witness }, checked, skipped });
            }
        }
        let verdict = Verdict::Verified {
            detail: format!("edge stabilizers from words of length <= {} match", self.bounds.length),
        };
        Ok(ConditionReport { condition: 4, name: "edge stabilizers", verdict, checked, skipped })
    }

    fn condition_five(&self) -> Result<ConditionReport> {
        let adjacency = self.image.tree.adjacency();
        let mut checked = 0;
        let mut skipped = 0;
        for (v, place) in &self.image.places {
            if !self.interior(v) || !self.tilde.contains(v) || self.tilde.tree.boundary.contains(v) {
                skipped += 1;
                continue;
            }
            checked += 1;
            let group = self.spec.place_matrices(*place)?;
            let star = self.tilde.neighbors(v)?;
            // orbits of the group on the saturated star
            let mut orbit_of: BTreeMap<Vertex, usize> = BTreeMap::new();
            let mut orbits = 0;
            for w in &star {
                if orbit_of.contains_key(w) {
                    continue;
                }
                for g in &group {
                    orbit_of.insert(g.act(w)?, orbits);
                }
                orbits += 1;
            }
            let tree_star: BTreeSet<&Vertex> = adjacency.get(v).map(|n| n.iter().collect()).unwrap_or_default();
            let mut hits = vec![Vec::new(); orbits];
            for w in &tree_star {
                match orbit_of.get(*w) {
                    Some(&o) => hits[o].push((*w).clone()),
                    None => {
                        let witness = format!("edge from {v} to {w} is not in the tilde tree star");
                        return Ok(ConditionReport { condition: 5, name: "local fundamental domain", verdict: Verdict::Refuted { witness }, checked, skipped });
                    }
                }
            }
            let at = self.spec.place_name(*place);
            if let Some(h) = hits.iter().find(|h| h.len() > 1) {
                let witness = format!("at {at} = {v}: image edges toward {} and {} are in one orbit", h[0], h[1]);
                return Ok(ConditionReport { condition: 5, name: "local fundamental domain", verdict: Verdict::Refuted { witness }, checked, skipped });
            }
            if let Some(o) = hits.iter().position(Vec::is_empty) {
                let rep = orbit_of.iter().find(|(_, &k)| k == o).map(|(w, _)| w.clone()).expect("orbit");
                let witness = format!("at {at} = {v}: the orbit of {rep} contains no image edge");
                return Ok(ConditionReport { condition: 5, name: "local fundamental domain", verdict: Verdict::Refuted { witness }, checked, skipped });
            }
        }
        let verdict = Verdict::Verified { detail: "stars match orbit sets at every interior image vertex".into() };
        Ok(ConditionReport { condition: 5, name: "local fundamental domain", verdict, checked, skipped })
    }

    pub fn report(&self) -> Result<CheckReport> {
        let conditions = vec![
            self.condition_one(),
            self.condition_two()?,
            self.condition_three()?,
            self.condition_four()?,
            self.condition_five()?,
        ];
        let overall = match conditions.iter().map(|c| c.verdict.rank()).max().unwrap_or(0) {
            0 => Overall::Verified,
            1 => Overall::Inconclusive,
            _ => Overall::Refuted,
        };
        let summary = |t: &crate::bt_tree::SubtreeTruncation| TreeSummary {
            vertices: t.vertices.len(),
            edges: t.edges.len(),
            ends: t.ends.len(),
        };
        Ok(CheckReport {
            field: self.spec.field().describe(),
            precision: self.spec.field().precision(),
            bounds: self.bounds,
            anchor: self.spec.anchor().label(),
            words: self.words.len(),
            image: summary(&self.image.tree),
            tilde_tree: summary(&self.tilde.tree),
            conditions,
            overall,
        })
    }
}

/// Bounded verification of the five admissibility conditions.
pub fn check_admissible(spec: &EmbeddingSpec, bounds: Bounds) -> Result<CheckReport> {
    CheckContext::new(spec, bounds)?.report()
}
