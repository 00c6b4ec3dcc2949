mod common;

use common::*;
use dirackit::polycalc::{
    exterior_d, interior_product, lie_derivative, lie_derivative_vf, pullback, vf_bracket, wedge, KForm, PolyMap,
};
use proptest::prelude::*;

fn cartan_rhs(x: &dirackit::VectorField, w: &KForm) -> KForm {
    let d_i = if w.degree() == 0 {
        KForm::zero(w.dim(), 0)
    } else {
        exterior_d(&interior_product(x, w).unwrap())
    };
    let i_d = interior_product(x, &exterior_d(w)).unwrap();
    d_i.add(&i_d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes(w in any_form(4)) {
        prop_assert!(exterior_d(&exterior_d(&w)).is_zero());
    }

    #[test]
    fn cartan_formula(x in vector_field(3, 2), w in form(3, 1, 3), f in form(3, 0, 3), b in form(3, 2, 2)) {
        prop_assert_eq!(lie_derivative(&x, &w).unwrap(), cartan_rhs(&x, &w));
        prop_assert_eq!(lie_derivative(&x, &f).unwrap(), cartan_rhs(&x, &f));
        prop_assert_eq!(lie_derivative(&x, &b).unwrap(), cartan_rhs(&x, &b));
    }

    #[test]
    fn lie_derivatives_form_a_representation(x in vector_field(2, 2), y in vector_field(2, 2), w in form(2, 1, 2)) {
        let lhs = lie_derivative(&x, &lie_derivative(&y, &w).unwrap()).unwrap()
            .sub(&lie_derivative(&y, &lie_derivative(&x, &w).unwrap()).unwrap()).unwrap();
        let rhs = lie_derivative(&vf_bracket(&x, &y).unwrap(), &w).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(lie_derivative_vf(&x, &y).unwrap(), vf_bracket(&x, &y).unwrap());
    }

    #[test]
    fn jacobi_identity(x in vector_field(3, 2), y in vector_field(3, 2), z in vector_field(3, 2)) {
        let br = |a: &dirackit::VectorField, b: &dirackit::VectorField| vf_bracket(a, b).unwrap();
        let s = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).add(&br(&z, &br(&x, &y)));
        prop_assert!(s.is_zero());
        prop_assert_eq!(br(&x, &y), br(&y, &x).scale(&dirackit::Poly::int(3, -1)));
    }

    #[test]
    fn interior_product_squares_to_zero(x in vector_field(4, 2), w in form(4, 2, 2)) {
        let once = interior_product(&x, &w).unwrap();
        prop_assert!(interior_product(&x, &once).unwrap().is_zero());
    }

    #[test]
    fn leibniz_and_graded_commutativity(a in form(3, 1, 2), b in form(3, 1, 2), f in form(3, 0, 2)) {
        let ab = wedge(&a, &b).unwrap();
        prop_assert_eq!(wedge(&b, &a).unwrap(), ab.neg());
        let lhs = exterior_d(&wedge(&f, &a).unwrap());
        let rhs = wedge(&exterior_d(&f), &a).unwrap().add(&wedge(&f, &exterior_d(&a)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = exterior_d(&ab);
        let rhs = wedge(&exterior_d(&a), &b).unwrap().sub(&wedge(&a, &exterior_d(&b)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_is_functorial(phi in poly_map(2, 3, 2), psi in poly_map(3, 2, 2), w in form(2, 1, 2)) {
        let composed = psi.compose(&phi).unwrap();
        let direct = pullback(&composed, &w).unwrap();
        let staged = pullback(&phi, &pullback(&psi, &w).unwrap()).unwrap();
        prop_assert_eq!(direct, staged);
        prop_assert_eq!(pullback(&PolyMap::identity(2), &w).unwrap(), w);
    }

    #[test]
    fn pullback_commutes_with_d_and_wedge(phi in poly_map(2, 3, 2), a in form(3, 1, 2), b in form(3, 1, 1)) {
        prop_assert_eq!(pullback(&phi, &exterior_d(&a)).unwrap(), exterior_d(&pullback(&phi, &a).unwrap()));
        prop_assert_eq!(
            pullback(&phi, &wedge(&a, &b).unwrap()).unwrap(),
            wedge(&pullback(&phi, &a).unwrap(), &pullback(&phi, &b).unwrap()).unwrap()
        );
    }
}
