mod common;

use common::*;
use dirackit::diracfield::DiracSpan;
use dirackit::lindirac::{b_transform, graph_of_2form, graph_of_bivector, grassmann_gap, pullback, pushforward, subspace_equal};
use dirackit::polycalc::{exterior_d, Bivector};
use dirackit::{Domain, QMatrix};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_graphs_are_lagrangian(w in antisymmetric(4), p in antisymmetric(3)) {
        prop_assert!(graph_of_2form(&w).unwrap().is_maximal_isotropic());
        prop_assert!(graph_of_bivector(&p).unwrap().is_maximal_isotropic());
    }

    #[test]
    fn b_transforms_compose(w in antisymmetric(3), b1 in antisymmetric(3), b2 in antisymmetric(3)) {
        let l = graph_of_bivector(&w).unwrap();
        let stepwise = b_transform(&b_transform(&l, &b1).unwrap(), &b2).unwrap();
        let once = b_transform(&l, &b1.add(&b2)).unwrap();
        prop_assert!(subspace_equal(&stepwise, &once));
        prop_assert!(stepwise.is_maximal_isotropic());
    }

    #[test]
    fn images_stay_lagrangian(w in antisymmetric(3), t in small_matrix(2, 3), s in small_matrix(3, 2)) {
        let l = graph_of_2form(&w).unwrap();
        prop_assert!(pushforward(&l, &t).unwrap().is_maximal_isotropic());
        prop_assert!(pullback(&l, &s).unwrap().is_maximal_isotropic());
    }

    #[test]
    fn push_after_pull_along_surjection(w in antisymmetric(2), t in small_matrix(2, 3)) {
        prop_assume!(t.rank() == 2);
        let l = graph_of_2form(&w).unwrap();
        let back = pushforward(&pullback(&l, &t).unwrap(), &t).unwrap();
        prop_assert!(subspace_equal(&back, &l));
    }

    #[test]
    fn gap_is_a_metric_on_samples(a in antisymmetric(3), b in antisymmetric(3)) {
        let (la, lb) = (graph_of_2form(&a).unwrap(), graph_of_bivector(&b).unwrap());
        let g = grassmann_gap(&la, &lb).unwrap();
        prop_assert!((0.0..=1.0).contains(&g));
        prop_assert!((g - grassmann_gap(&lb, &la).unwrap()).abs() < 1e-12);
        prop_assert!(grassmann_gap(&la, &la).unwrap() < 1e-12);
    }

    #[test]
    fn closed_iff_involutive(w in form(3, 2, 2)) {
        let span = DiracSpan::from_2form(&w, Domain::cube(3, -1, 1)).unwrap();
        prop_assert!(span.isotropy_witness().is_none());
        prop_assert_eq!(span.is_involutive().unwrap(), exterior_d(&w).is_zero());
    }

    #[test]
    fn exact_forms_are_involutive(eta in form(4, 1, 3)) {
        let w = exterior_d(&eta);
        let span = DiracSpan::from_2form(&w, Domain::cube(4, -1, 1)).unwrap();
        prop_assert!(span.is_involutive().unwrap());
    }

    #[test]
    fn planar_bivectors_are_poisson(f in poly(2, 4)) {
        let pi = Bivector::from_terms(2, [((0, 1), f)]).unwrap();
        let span = DiracSpan::from_bivector(&pi, Domain::cube(2, -1, 1)).unwrap();
        prop_assert!(span.integrability_tensor().unwrap().is_zero());
    }

    #[test]
    fn gauge_by_closed_form_preserves_involutivity(w in form(3, 2, 1), eta in form(3, 1, 2)) {
        let span = DiracSpan::from_2form(&w, Domain::cube(3, -1, 1)).unwrap();
        let moved = span.b_transform(&exterior_d(&eta)).unwrap();
        prop_assert_eq!(moved.is_involutive().unwrap(), span.is_involutive().unwrap());
    }
}

#[test]
fn zero_form_graph_is_tangent_block() {
    let l = graph_of_2form(&QMatrix::zeros(2, 2)).unwrap();
    assert!(subspace_equal(&l, &dirackit::LinearDirac::tangent_block(2)));
}
