//! Strategies and laws shared by the property suites and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeSet;

use bruhat::bt_tree::{gromov_product, on_apartment, ProjPoint, Vertex};
use bruhat::matrix::Mat2;
use bruhat::padic::{FieldSpec, PAdic, SquareRoot};
use bruhat::pgl2::Pgl2;
use bruhat::tree_of_groups::{Amalgam, FiniteGroup, TreeBuilder, DEFAULT_WORD_CAP};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Cases per property; at least 200 everywhere.
pub const CASES: u32 = 256;
const PRECISION: u32 = 24;

type Outcome = Result<(), TestCaseError>;

pub fn fields() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just((2, 1, 1)),
        Just((3, 1, 1)),
        Just((5, 1, 1)),
        Just((2, 2, 1)),
        Just((3, 1, 2)),
        Just((2, 1, 2)),
    ]
    .prop_map(|(p, f, e)| FieldSpec::new(p, f, e, PRECISION).unwrap())
}

/// An exact element with a few digits starting somewhere near valuation 0.
pub fn element(k: &FieldSpec) -> impl Strategy<Value = PAdic> {
    let q = k.q();
    let k = k.clone();
    (-3i64..4, prop::collection::vec(0..q, 1..7)).prop_map(move |(start, digits)| k.from_digits(start, &digits))
}

pub fn nonzero(k: &FieldSpec) -> impl Strategy<Value = PAdic> {
    element(k).prop_filter("nonzero", |x| !x.is_zero())
}

pub fn vertex(k: &FieldSpec) -> impl Strategy<Value = Vertex> {
    (-4i64..5, element(k)).prop_map(|(n, b)| Vertex::new(n, &b).unwrap())
}

pub fn point(k: &FieldSpec) -> impl Strategy<Value = ProjPoint> {
    let inf = ProjPoint::infinity(k);
    prop_oneof![1 => Just(inf), 5 => element(k).prop_map(ProjPoint::finite)]
}

pub fn matrix(k: &FieldSpec) -> impl Strategy<Value = Pgl2> {
    (element(k), element(k), element(k), element(k)).prop_filter_map("singular", |(a, b, c, d)| {
        let m = Mat2::new(a, b, c, d).ok()?;
        if m.det().is_zero() {
            return None;
        }
        Pgl2::new(m).ok()
    })
}

pub fn with_field<S: Strategy, F: Fn(&FieldSpec) -> S>(f: F) -> impl Strategy<Value = (FieldSpec, S::Value)> {
    fields().prop_flat_map(move |k| (Just(k.clone()), f(&k)))
}

pub fn config() -> ProptestConfig {
    ProptestConfig { cases: CASES, ..ProptestConfig::default() }
}


/// A path of two or three cyclic vertices, edges trivial or amalgamating a
/// common cyclic subgroup.
pub fn amalgams() -> impl Strategy<Value = Amalgam> {
    (prop::collection::vec(1usize..6, 2..4), prop::collection::vec(any::<bool>(), 2)).prop_map(|(orders, amalg)| {
        let mut b = TreeBuilder::new();
        for (i, &n) in orders.iter().enumerate() {
            b = b.vertex(&format!("v{i}"), FiniteGroup::cyclic(n).unwrap());
        }
        for i in 0..orders.len() - 1 {
            let (n, m) = (orders[i], orders[i + 1]);
            let d = num_integer::gcd(n, m);
            let (a, c) = (format!("v{i}"), format!("v{}", i + 1));
            b = if amalg[i] && d > 1 {
                let power = |k: usize| if k == 1 { "g".to_string() } else { format!("g^{k}") };
                b.edge(&a, &c, FiniteGroup::cyclic(d).unwrap(), &[&power(n / d)], &[&power(m / d)]).unwrap()
            } else {
                b.edge(&a, &c, FiniteGroup::cyclic(1).unwrap(), &[], &[]).unwrap()
            };
        }
        Amalgam::new(&b.finish()).unwrap()
    })
}


pub fn metric_axioms(u: &Vertex, v: &Vertex, w: &Vertex) -> Outcome {
    prop_assert_eq!(u.distance(u), 0);
    prop_assert_eq!(u.distance(v), v.distance(u));
    prop_assert_eq!(u.distance(v) == 0, u == v);
    prop_assert!(u.distance(w) <= u.distance(v) + v.distance(w));
    let path = u.geodesic(v);
    prop_assert_eq!(path.len() as u64, u.distance(v) + 1);
    for pair in path.windows(2) {
        prop_assert_eq!(pair[0].distance(&pair[1]), 1);
    }
    Ok(())
}

pub fn action_is_an_isometry(g: &Pgl2, h: &Pgl2, u: &Vertex, v: &Vertex) -> Outcome {
    let gu = g.act(u).unwrap();
    let gv = g.act(v).unwrap();
    prop_assert_eq!(gu.distance(&gv), u.distance(v));
    // an action: (gh)u = g(hu)
    prop_assert_eq!(g.mul(h).act(u).unwrap(), g.act(&h.act(u).unwrap()).unwrap());
    prop_assert_eq!(&g.inverse().act(&gu).unwrap(), u);
    Ok(())
}

pub fn ends_are_equivariant(g: &Pgl2, v: &Vertex, z: &ProjPoint, w: &ProjPoint) -> Outcome {
    if z.same(w) {
        return Ok(());
    }
    let (gv, gz, gw) = (g.act(v).unwrap(), g.apply(z).unwrap(), g.apply(w).unwrap());
    prop_assert!(!gz.same(&gw));
    prop_assert_eq!(gromov_product(&gv, &gz, &gw).unwrap(), gromov_product(v, z, w).unwrap());
    prop_assert_eq!(on_apartment(&gv, &gz, &gw).unwrap(), on_apartment(v, z, w).unwrap());
    let step = z.walk(v, 3).unwrap();
    prop_assert_eq!(g.act(&step).unwrap(), gz.walk(&gv, 3).unwrap());
    Ok(())
}

pub fn valuation_is_ultrametric(a: &PAdic, b: &PAdic) -> Outcome {
    let va = a.valuation().unwrap().unwrap();
    let vb = b.valuation().unwrap().unwrap();
    prop_assert_eq!((a * b).valuation().unwrap(), Some(va + vb));
    match (a + b).valuation().unwrap() {
        Some(vs) => {
            prop_assert!(vs >= va.min(vb));
            if va != vb {
                prop_assert_eq!(vs, va.min(vb));
            }
        }
        None => prop_assert_eq!(va, vb),
    }
    prop_assert_eq!(a.try_div(b).unwrap().valuation().unwrap(), Some(va - vb));
    Ok(())
}

pub fn square_roots_round_trip(a: &PAdic) -> Outcome {
    let sq = a * a;
    let r = match sq.sqrt().unwrap() {
        SquareRoot::Root(r) => r,
        SquareRoot::NonSquare(w) => return Err(TestCaseError::fail(format!("{w:?} for a square"))),
    };
    prop_assert!((&r * &r).eq_at_precision(&sq));
    prop_assert!(r.eq_at_precision(a) || r.eq_at_precision(&-a));
    Ok(())
}

pub fn enumeration_is_closed_under_inversion(a: &Amalgam) -> Outcome {
    let f = a.enumerate(4, DEFAULT_WORD_CAP).unwrap();
    let words: BTreeSet<_> = f.all().cloned().collect();
    prop_assert_eq!(words.len(), f.total());
    for w in &words {
        // reversing a canonical word need not give a canonical word once edge
        // groups are nontrivial
        let inv = a.inverse(w);
        prop_assert!(words.contains(&a.canonical(&inv.letters)), "{} has no inverse in the enumeration", a.format(w));
        prop_assert_eq!(a.length(&inv.letters), w.len());
        prop_assert!(a.multiply(w, &inv).is_empty());
    }
    Ok(())
}
