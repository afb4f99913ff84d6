//! Randomized laws of the field, the tree, the action and the amalgam.

mod support;

use proptest::prelude::*;
use support::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn metric_axioms_hold((_, (u, v, w)) in with_field(|k| (vertex(k), vertex(k), vertex(k)))) {
        metric_axioms(&u, &v, &w)?;
    }

    #[test]
    fn action_preserves_distance((_, (g, h, u, v)) in with_field(|k| (matrix(k), matrix(k), vertex(k), vertex(k)))) {
        action_is_an_isometry(&g, &h, &u, &v)?;
    }

    #[test]
    fn ends_transform_with_the_action((_, (g, v, z, w)) in with_field(|k| (matrix(k), vertex(k), point(k), point(k)))) {
        ends_are_equivariant(&g, &v, &z, &w)?;
    }

    #[test]
    fn valuation_laws((_, (a, b)) in with_field(|k| (nonzero(k), nonzero(k)))) {
        valuation_is_ultrametric(&a, &b)?;
    }

    #[test]
    fn sqrt_of_square((_, a) in with_field(nonzero)) {
        square_roots_round_trip(&a)?;
    }

    #[test]
    fn inverses_are_enumerated(a in amalgams()) {
        enumeration_is_closed_under_inversion(&a)?;
    }
}
