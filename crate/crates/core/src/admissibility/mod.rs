//! Embeddings of abstract trees of groups into the tree of K, and bounded
//! verification that an embedding is admissible.

mod check;
mod spec;
mod tilde;

pub use check::{check_admissible, CheckContext, CheckReport, ConditionReport, Overall, TreeSummary, Verdict};
pub use spec::{Bounds, EmbeddingJson, EmbeddingSpec, FieldJson, Image, Place, WordElement, DEFAULT_LENGTH};
pub use tilde::{build_tilde_tree, fixed_ends, span_in_ball, stabilizer_orders, TildeTree, STABILIZER_CAP};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bt_tree::{on_apartment, ProjPoint};
    use crate::gallery;

    #[test]
    fn single_vertex_tilde_is_the_mirror() {
        let s = gallery::cyclic_vertex(5, 4).unwrap();
        let t = build_tilde_tree(&s, 4).unwrap();
        let k = s.field();
        let (z, w) = (ProjPoint::finite(k.zero()), ProjPoint::infinity(k));
        assert_eq!(t.tree.vertices.len(), 9);
        assert!(t.tree.vertices.iter().all(|v| on_apartment(v, &z, &w).unwrap()));
        let r = check_admissible(&s, Bounds { length: 3, radius: 4 }).unwrap();
        assert_eq!(r.overall, Overall::Verified, "{r:#?}");
    }

    #[test]
    fn free_product_is_admissible() {
        let s = gallery::free_product(3, 2, 2, 1).unwrap();
        let bounds = Bounds { length: 4, radius: 6 };
        let ctx = CheckContext::new(&s, bounds).unwrap();
        assert_eq!(ctx.tilde.tree.vertices, ctx.image.tree.vertices);
        let r = ctx.report().unwrap();
        assert_eq!(r.overall, Overall::Verified, "{r:#?}");
    }

    #[test]
    fn triangle_is_admissible() {
        for (n, m, e) in [(3, 3, 1), (3, 1, 2)] {
            let s = gallery::triangle_dyadic(n, m, e).unwrap();
            let ctx = CheckContext::new(&s, Bounds { length: 3, radius: 5 }).unwrap();
            assert!(ctx.tilde.tree.vertices.len() > ctx.image.tree.vertices.len());
            let r = ctx.report().unwrap();
            assert_eq!(r.overall, Overall::Verified, "{r:#?}");
        }
    }

    #[test]
    fn overlapping_mirrors_are_refuted() {
        let s = crate::fixtures::overlapping_mirrors();
        let r = check_admissible(&s, Bounds { length: 3, radius: 4 }).unwrap();
        assert_eq!(r.overall, Overall::Refuted);
        assert!(r.condition(3).verdict.is_refuted(), "{r:#?}");
    }

    #[test]
    fn json_round_trip() {
        let s = gallery::free_product(5, 2, 4, 1).unwrap();
        let j = s.to_json().unwrap();
        let text = serde_json::to_string(&j).unwrap();
        let back = EmbeddingSpec::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), j);
    }
}
