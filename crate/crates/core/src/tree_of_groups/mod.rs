//! Abstract trees of finite groups: a finite core tree plus rays whose
//! decorations become constant, and the amalgam they define.

mod amalgam;
mod groups;
mod json;
mod tree;

pub use amalgam::{amalgam_enumerate, Amalgam, AmalgamWord, Filtration, Letter, DEFAULT_WORD_CAP};
pub use groups::{FiniteGroup, GroupKind, Injection, MAX_GROUP_ORDER};
pub use json::{EdgeInjectionsJson, EdgeJson, GroupJson, RayJson, RayStepJson, TreeJson, VertexJson};
pub use tree::{
    ContractionVerdict, CoreEdge, CoreVertex, EndStabilizer, Issue, Ray, RayStep, TreeOfGroups,
    ValidationReport,
};

/// Builder for the common case of cyclic and dihedral groups with
/// injections given by generator names.
#[derive(Debug, Default, Clone)]
pub struct TreeBuilder {
    tree: Option<TreeOfGroups>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        TreeBuilder { tree: Some(TreeOfGroups { vertices: Vec::new(), edges: Vec::new(), rays: Vec::new() }) }
    }

    fn t(&mut self) -> &mut TreeOfGroups {
        self.tree.as_mut().expect("builder used after finish")
    }

    pub fn vertex(mut self, id: &str, group: FiniteGroup) -> Self {
        self.t().vertices.push(CoreVertex { id: id.to_string(), group });
        self
    }

    /// An edge whose group maps by the named generator images.
    pub fn edge(
        mut self,
        a: &str,
        b: &str,
        group: FiniteGroup,
        into_a: &[&str],
        into_b: &[&str],
    ) -> crate::Result<Self> {
        let t = self.t();
        let ia = t.vertex_index(a)?;
        let ib = t.vertex_index(b)?;
        let resolve = |g: &FiniteGroup, names: &[&str]| -> crate::Result<Vec<usize>> {
            names.iter().map(|n| g.element(n)).collect()
        };
        let into_a = resolve(&t.vertices[ia].group, into_a)?;
        let into_b = resolve(&t.vertices[ib].group, into_b)?;
        t.edges.push(CoreEdge { a: ia, b: ib, group, into_a, into_b });
        Ok(self)
    }

    /// A ray without prefix.
    pub fn ray(mut self, name: &str, attach: &str, tail: FiniteGroup, tail_into: &[&str]) -> crate::Result<Self> {
        let t = self.t();
        let at = t.vertex_index(attach)?;
        let images = tail_into.iter().map(|n| t.vertices[at].group.element(n)).collect::<crate::Result<Vec<_>>>()?;
        t.rays.push(Ray { name: name.to_string(), attach: at, prefix: Vec::new(), tail, tail_into: images });
        Ok(self)
    }

    pub fn finish(mut self) -> TreeOfGroups {
        self.tree.take().expect("builder used after finish")
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    fn gen(n: usize) -> &'static str {
        if n == 1 {
            ""
        } else {
            "g"
        }
    }

    /// Two cyclic vertices joined by a chain of trivial vertices, two rays at each end.
    fn free_product_tree(n: usize, m: usize, r: usize) -> TreeOfGroups {
        let mut b = TreeBuilder::new().vertex("u", z(n));
        let mut prev = "u".to_string();
        for i in 1..2 * r {
            let id = format!("h{i}");
            b = b.vertex(&id, z(1)).edge(&prev, &id, z(1), &[], &[]).unwrap();
            prev = id;
        }
        b = b.vertex("w", z(m)).edge(&prev, "w", z(1), &[], &[]).unwrap();
        let _ = gen(1);
        b.ray("u0", "u", z(n), &["g"])
            .unwrap()
            .ray("u1", "u", z(n), &["g"])
            .unwrap()
            .ray("w0", "w", z(m), &["g"])
            .unwrap()
            .ray("w1", "w", z(m), &["g"])
            .unwrap()
            .finish()
    }

    #[test]
    fn single_vertex_counts() {
        for n in 2..6 {
            let t = TreeBuilder::new().vertex("v", z(n)).ray("e", "v", z(n), &["g"]).unwrap().finish();
            let f = amalgam_enumerate(&t, 4).unwrap();
            assert_eq!(f.counts, vec![1, n - 1, 0, 0, 0]);
        }
    }

    #[test]
    fn free_product_counts() {
        let t = TreeBuilder::new()
            .vertex("a", z(2))
            .vertex("b", z(3))
            .edge("a", "b", z(1), &[], &[])
            .unwrap()
            .finish();
        let f = amalgam_enumerate(&t, 2).unwrap();
        assert_eq!(f.counts, vec![1, 3, 4]);
        let f1 = amalgam_enumerate(&free_product_tree(2, 2, 1), 3).unwrap();
        assert_eq!(f1.counts, vec![1, 2, 2, 2]);
    }

    #[test]
    fn amalgamated_product() {
        // Z_4 *_{Z_2} Z_6: length-m count is 2 (1 + 2) (2 + 1) ... with coset reps
        let t = TreeBuilder::new()
            .vertex("a", z(4))
            .vertex("b", z(6))
            .edge("a", "b", z(2), &["g^2"], &["g^3"])
            .unwrap()
            .finish();
        let am = Amalgam::new(&t).unwrap();
        // letters: 3 from Z_4, 5 from Z_6, shared involution
        assert_eq!(am.letters().len(), 7);
        let f = am.enumerate(3, DEFAULT_WORD_CAP).unwrap();
        // |C| = 2, cosets A/C = 2, B/C = 3: words of length m >= 1 are
        // 2 * (alternating coset counts) summed over starting side
        assert_eq!(f.counts[1], 7);
        assert_eq!(f.counts[2], 2 * (2 + 2));
        assert_eq!(f.counts[3], 2 * (2 + 2 * 2));
    }

    #[test]
    fn words_close_under_inversion() {
        let t = free_product_tree(3, 2, 1);
        let am = Amalgam::new(&t).unwrap();
        let f = am.enumerate(4, DEFAULT_WORD_CAP).unwrap();
        for (m, stratum) in f.strata.iter().enumerate() {
            for w in stratum {
                let inv = am.canonical(&am.inverse(w).letters);
                assert_eq!(inv.len(), m);
                assert!(stratum.contains(&inv));
                assert_eq!(am.canonical(&w.letters), *w);
            }
        }
        let w = &f.strata[2][0];
        assert_eq!(am.format(w), "g[u] · g[w]");
        assert_eq!(am.format(&f.strata[1][1]), "g[u]^2");
    }

    #[test]
    fn validation() {
        assert!(free_product_tree(3, 4, 2).validate().valid);
        let trivial_tail = TreeBuilder::new().vertex("v", z(2)).ray("e", "v", z(1), &[]).unwrap().finish();
        let report = trivial_tail.validate();
        assert!(!report.valid);
        assert!(report.issues[0].message.contains("trivial"));
        let bad = TreeBuilder::new()
            .vertex("a", z(2))
            .vertex("b", z(4))
            .edge("a", "b", z(4), &["g"], &["g"])
            .unwrap()
            .finish();
        let report = bad.validate();
        assert!(!report.valid);
        assert!(report.issues[0].location.starts_with("edge 0"));
        let cycle = TreeBuilder::new()
            .vertex("a", z(1))
            .vertex("b", z(1))
            .edge("a", "b", z(1), &[], &[])
            .unwrap()
            .edge("b", "a", z(1), &[], &[])
            .unwrap()
            .finish();
        assert!(!cycle.validate().valid);
    }

    #[test]
    fn end_stabilizers() {
        let t = free_product_tree(3, 5, 1);
        let s = t.end_stabilizer(t.ray_index("u0").unwrap()).unwrap();
        assert_eq!((s.order, s.group.as_str()), (3, "Z_3"));
        let d = FiniteGroup::dihedral(2).unwrap();
        let klein = TreeBuilder::new().vertex("v", d.clone()).ray("e", "v", d, &["r", "s"]).unwrap().finish();
        assert!(klein.end_stabilizer(0).is_err());
    }

    #[test]
    fn contractions() {
        let inner = free_product_tree(2, 3, 1);
        let ident: BTreeMap<String, String> =
            inner.vertices.iter().map(|v| (v.id.clone(), v.id.clone())).collect();
        assert!(TreeOfGroups::contraction_check(&inner, &inner, &ident).unwrap().is_contraction);
        let pendant = TreeBuilder { tree: Some(inner.clone()) }
            .vertex("x", z(1))
            .edge("u", "x", z(1), &[], &[])
            .unwrap()
            .finish();
        assert!(TreeOfGroups::contraction_check(&inner, &pendant, &ident).unwrap().is_contraction);
        let extra = TreeBuilder { tree: Some(inner.clone()) }.ray("new", "w", z(3), &["g"]).unwrap().finish();
        let v = TreeOfGroups::contraction_check(&inner, &extra, &ident).unwrap();
        assert!(!v.is_contraction);
        let mut broken = ident.clone();
        broken.insert("h1".into(), "u".into());
        assert!(TreeOfGroups::contraction_check(&inner, &pendant, &broken).is_err());
        // contraction keeps the amalgam
        let a = amalgam_enumerate(&inner, 4).unwrap();
        let b = amalgam_enumerate(&pendant, 4).unwrap();
        assert_eq!(a.counts, b.counts);
    }

    #[test]
    fn json_round_trip() {
        let t = free_product_tree(2, 3, 2);
        let text = serde_json::to_string(&t.to_json()).unwrap();
        let back = TreeOfGroups::from_json(&text).unwrap();
        assert_eq!(back.to_json(), t.to_json());
        let bad = r#"{"vertices":[{"id":"a","group":{"type":"cyclic","n":2}}],
            "edges":[],"rays":[{"attach":"a","tail_group":{"type":"cyclic","n":1},"tail_into":[]}]}"#;
        assert!(!TreeOfGroups::from_json(bad).unwrap().validate().valid);
    }
}
