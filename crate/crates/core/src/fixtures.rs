//! Specs shared by unit tests.

use std::collections::BTreeMap;

use crate::admissibility::EmbeddingSpec;
use crate::bt_tree::{ProjPoint, Vertex};
use crate::matrix::Mat2;
use crate::padic::FieldSpec;
use crate::pgl2::Pgl2;
use crate::tree_of_groups::{FiniteGroup, TreeBuilder};

/// Two involutions over Q_3 laid out like the free product with r = 0:
/// both mirrors pass through the end 1, so their product is unipotent.
pub fn overlapping_mirrors() -> EmbeddingSpec {
    let k = FieldSpec::new(3, 1, 1, 32).unwrap();
    let z = k.from_int(-1);
    let one = k.one();
    let gamma = Pgl2::new(Mat2::new(z.clone(), k.zero(), &z - &one, one.clone()).unwrap()).unwrap();
    let delta = Pgl2::new(Mat2::new(z.clone(), -&(&z - &one), k.zero(), one.clone()).unwrap()).unwrap();
    let z2 = FiniteGroup::cyclic(2).unwrap();
    let tree = TreeBuilder::new()
        .vertex("u", z2.clone())
        .vertex("w", z2.clone())
        .edge("u", "w", FiniteGroup::cyclic(1).unwrap(), &[], &[])
        .unwrap()
        .ray("u_0", "u", z2.clone(), &["g"])
        .unwrap()
        .ray("w_inf", "w", z2, &["g"])
        .unwrap()
        .finish();
    let pos = BTreeMap::from([
        ("u".to_string(), Vertex::standard(&k)),
        ("w".to_string(), Vertex::new(-1, &k.zero()).unwrap()),
    ]);
    let gens = BTreeMap::from([("u".to_string(), vec![gamma]), ("w".to_string(), vec![delta])]);
    let ends = vec![ProjPoint::finite(k.zero()), ProjPoint::infinity(&k)];
    EmbeddingSpec::new(&k, tree, &pos, &gens, ends).unwrap()
}
