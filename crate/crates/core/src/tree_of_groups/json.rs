//! Serde schema for trees of groups. Group elements and injection images
//! are written by name.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::groups::{FiniteGroup, GroupKind};
use super::tree::{CoreEdge, CoreVertex, Ray, RayStep, TreeOfGroups};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupJson {
    Cyclic {
        n: usize,
    },
    Dihedral {
        n: usize,
    },
    Table {
        elements: Vec<String>,
        /// `table[i][j]` names the product of elements `i` and `j`.
        table: Vec<Vec<String>>,
        #[serde(default)]
        generators: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    pub id: String,
    pub group: GroupJson,
}

/// Generator images of the edge group in each endpoint group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeInjectionsJson {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub a: String,
    pub b: String,
    pub group: GroupJson,
    pub injections: EdgeInjectionsJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayStepJson {
    pub id: String,
    pub group: GroupJson,
    pub edge_group: GroupJson,
    pub into_prev: Vec<String>,
    pub into_next: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub attach: String,
    #[serde(default)]
    pub prefix: Vec<RayStepJson>,
    pub tail_group: GroupJson,
    /// Generator images of the tail group in the last prefix (or attach) group.
    pub tail_into: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub rays: Vec<RayJson>,
}

impl GroupJson {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupJson::Cyclic { n } => FiniteGroup::cyclic(*n),
            GroupJson::Dihedral { n } => FiniteGroup::dihedral(*n),
            GroupJson::Table { elements, table, generators } => {
                let index: BTreeMap<&str, usize> =
                    elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
                if index.len() != elements.len() {
                    return Err(Error::Group("duplicate element names".into()));
                }
                let rows = table
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|x| {
                                index
                                    .get(x.as_str())
                                    .copied()
                                    .ok_or_else(|| Error::Group(format!("unknown element {x:?} in table")))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::from_table(elements.clone(), rows, generators.clone())
            }
        }
    }

    pub fn of(g: &FiniteGroup) -> GroupJson {
        match g.kind() {
            GroupKind::Cyclic(n) => GroupJson::Cyclic { n: *n },
            GroupKind::Dihedral(n) => GroupJson::Dihedral { n: *n },
            GroupKind::Table => GroupJson::Table {
                elements: g.elements().to_vec(),
                table: g
                    .table()
                    .iter()
                    .map(|row| row.iter().map(|&x| g.name(x).to_string()).collect())
                    .collect(),
                generators: g.generators().iter().map(|(n, _)| n.clone()).collect(),
            },
        }
    }
}

fn resolve(target: &FiniteGroup, names: &[String], location: &str) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| target.element(n).map_err(|e| Error::Group(format!("{location}: {e}"))))
        .collect()
}

fn names_of(target: &FiniteGroup, images: &[usize]) -> Vec<String> {
    images.iter().map(|&x| target.name(x).to_string()).collect()
}

impl TreeJson {
    /// Builds the tree; structural problems such as non-injective maps are
    /// left for [`TreeOfGroups::validate`].
    pub fn build(&self) -> Result<TreeOfGroups> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Ok(CoreVertex { id: v.id.clone(), group: v.group.build()? }))
            .collect::<Result<Vec<_>>>()?;
        let tree = TreeOfGroups { vertices, edges: Vec::new(), rays: Vec::new() };
        let mut edges = Vec::new();
        for e in &self.edges {
            let a = tree.vertex_index(&e.a)?;
            let b = tree.vertex_index(&e.b)?;
            let loc = format!("edge {} - {}", e.a, e.b);
            edges.push(CoreEdge {
                a,
                b,
                group: e.group.build()?,
                into_a: resolve(&tree.vertices[a].group, &e.injections.a, &loc)?,
                into_b: resolve(&tree.vertices[b].group, &e.injections.b, &loc)?,
            });
        }
        let mut rays = Vec::new();
        for (i, r) in self.rays.iter().enumerate() {
            let name = r.name.clone().unwrap_or_else(|| format!("ray{i}"));
            let attach = tree.vertex_index(&r.attach)?;
            let mut prev = tree.vertices[attach].group.clone();
            let mut prefix = Vec::new();
            for s in &r.prefix {
                let loc = format!("ray {name} step {}", s.id);
                let group = s.group.build()?;
                prefix.push(RayStep {
                    id: s.id.clone(),
                    edge_group: s.edge_group.build()?,
                    into_prev: resolve(&prev, &s.into_prev, &loc)?,
                    into_next: resolve(&group, &s.into_next, &loc)?,
                    vertex_group: group.clone(),
                });
                prev = group;
            }
            rays.push(Ray {
                tail_into: resolve(&prev, &r.tail_into, &format!("ray {name} tail"))?,
                name,
                attach,
                prefix,
                tail: r.tail_group.build()?,
            });
        }
        Ok(TreeOfGroups { edges, rays, ..tree })
    }

    pub fn of(t: &TreeOfGroups) -> TreeJson {
        let vertices = t
            .vertices
            .iter()
            .map(|v| VertexJson { id: v.id.clone(), group: GroupJson::of(&v.group) })
            .collect();
        let edges = t
            .edges
            .iter()
            .map(|e| EdgeJson {
                a: t.vertices[e.a].id.clone(),
                b: t.vertices[e.b].id.clone(),
                group: GroupJson::of(&e.group),
                injections: EdgeInjectionsJson {
                    a: names_of(&t.vertices[e.a].group, &e.into_a),
                    b: names_of(&t.vertices[e.b].group, &e.into_b),
                },
            })
            .collect();
        let rays = t
            .rays
            .iter()
            .map(|r| {
                let mut prev = &t.vertices[r.attach].group;
                let prefix = r
                    .prefix
                    .iter()
                    .map(|s| {
                        let step = RayStepJson {
                            id: s.id.clone(),
                            group: GroupJson::of(&s.vertex_group),
                            edge_group: GroupJson::of(&s.edge_group),
                            into_prev: names_of(prev, &s.into_prev),
                            into_next: names_of(&s.vertex_group, &s.into_next),
                        };
                        prev = &s.vertex_group;
                        step
                    })
                    .collect();
                RayJson {
                    name: Some(r.name.clone()),
                    attach: t.vertices[r.attach].id.clone(),
                    prefix,
                    tail_group: GroupJson::of(&r.tail),
                    tail_into: names_of(prev, &r.tail_into),
                }
            })
            .collect();
        TreeJson { vertices, edges, rays }
    }
}

impl TreeOfGroups {
    pub fn from_json(text: &str) -> Result<TreeOfGroups> {
        let j: TreeJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        j.build()
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson::of(self)
    }
}
