use super::*;
use crate::admissibility::{Bounds, Verdict};
use crate::gallery;
use crate::pgl2::ElementClass;

fn bounds(length: usize, radius: u64) -> Bounds {
    Bounds { length, radius }
}

#[test]
fn cyclic_vertex_orbit_is_the_mirror() {
    let s = gallery::cyclic_vertex(5, 4).unwrap();
    let ot = build_orbit_tree(&s, bounds(3, 4)).unwrap();
    assert_eq!(ot.tree.vertices, ot.base.tree.vertices);
    assert!(disjointness_audit(&ot).is_verified());
    let q = quotient_graph(&ot).unwrap();
    assert!(q.vertices.iter().all(|v| v.order == 4));
    assert_eq!(q.betti, 0);
    let b = branch_report(&ot).unwrap();
    assert_eq!(b.degrees, [4, 4]);
    let lim = limit_tree_approx(&ot).unwrap();
    assert_eq!(lim.hyperbolic, 0);
    assert!(lim.tree.is_empty());
}

#[test]
fn free_product_orbit_tree() {
    let (n, m) = (3u64, 2u64);
    let s = gallery::free_product(7, n, m, 1).unwrap();
    let ot = build_orbit_tree(&s, bounds(2, 5)).unwrap();
    let second = ot.translates.keys().filter(|w| w.len() == 2).count() as u64;
    assert_eq!(second, (n - 1) * (m - 1) * 2);
    assert!(ot.tree.is_tree());
    assert!(disjointness_audit(&ot).is_verified());
    assert!(stabilizer_audit(&ot).unwrap().is_verified());
    let b = branch_report(&ot).unwrap();
    assert_eq!(b.degrees, [3, 3, 2, 2]);
    assert_eq!(b.genus, 0);
}

#[test]
fn free_product_hyperbolic_axis() {
    let s = gallery::free_product(3, 2, 2, 1).unwrap();
    let ot = build_orbit_tree(&s, bounds(4, 6)).unwrap();
    let gd = ot.words.iter().find(|w| w.word.len() == 2).unwrap();
    assert!(matches!(gd.matrix.classify().unwrap(), ElementClass::Hyperbolic { .. }));
    // the geodesic from the base to its translate runs through the first letter's translate
    let first = crate::tree_of_groups::AmalgamWord { letters: gd.word.letters[..1].to_vec() };
    let image = &ot.translates[&gd.word];
    let a = ot.base.tree.vertices.iter().min_by_key(|v| image.iter().map(|w| v.distance(w)).min()).unwrap();
    let b = image.iter().min_by_key(|w| a.distance(w)).unwrap();
    assert!(a.distance(b) > 0);
    assert!(a.geodesic(b).iter().any(|v| ot.translates[&first].contains(v)));
    let lim = limit_tree_approx(&ot).unwrap();
    assert!(lim.hyperbolic > 0);
    assert!(!lim.tree.is_empty());
    let axis = gd.matrix.fixed_points().unwrap();
    let inner = crate::admissibility::span_in_ball(&axis, &ot.anchor(), 4).unwrap();
    assert!(inner.vertices.iter().all(|v| ot.tree.contains(v)));
    assert!(lim.outside.is_empty(), "{:?}", lim.outside);
    let d = discreteness_audit(&ot).unwrap();
    assert!(d.verdict.is_verified(), "{d:?}");
    assert!(contraction_audit(&ot).unwrap().is_contraction);
}

#[test]
fn triangle_orbit_tree() {
    let s = gallery::triangle_dyadic(3, 3, 1).unwrap();
    let ot = build_orbit_tree(&s, bounds(4, 5)).unwrap();
    assert!(disjointness_audit(&ot).is_verified());
    let v0 = s.position(s.expanded().vertex_index("v0").unwrap());
    assert_eq!(stabilizer_of_vertex(&ot, v0).unwrap().len(), 6);
    let b = branch_report(&ot).unwrap();
    assert_eq!(b.degrees, [3, 6, 6]);
    assert_eq!(b.genus, 0);
    assert!(stabilizer_audit(&ot).unwrap().is_verified());
}

#[test]
fn overlapping_mirrors_fail_the_audits() {
    let s = crate::fixtures::overlapping_mirrors();
    let ot = build_orbit_tree(&s, bounds(3, 3)).unwrap();
    let d = discreteness_audit(&ot).unwrap();
    let q = quotient_graph(&ot);
    assert!(d.verdict.is_refuted() || q.is_err(), "{d:?}");
    assert!(matches!(disjointness_audit(&ot), Verdict::Refuted { .. }) || q.is_err());
}

#[test]
fn dot_output() {
    let s = gallery::free_product(3, 2, 2, 1).unwrap();
    let ot = build_orbit_tree(&s, bounds(1, 4)).unwrap();
    let dot = ot.to_dot("orbit");
    assert!(dot.starts_with("graph \"orbit\""));
    assert!(dot.contains("~u"));
    let q = quotient_graph(&ot).unwrap().to_dot("quotient");
    assert!(q.contains("|G|=2"));
}
