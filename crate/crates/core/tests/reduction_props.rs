use dirackit::lindirac::subspace_equal;
use dirackit::presets;
use dirackit::rational::qf;
use dirackit::reduction::reduce_pointwise;
use proptest::prelude::*;

fn planar_scenes() -> Vec<dirackit::Scene> {
    vec![
        presets::hamiltonian_singular(),
        presets::regular_plane(),
        presets::distribution(),
        presets::zero_form(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_invariant_along_orbits(xn in -8i64..=8, y1 in -8i64..=8, y2 in -8i64..=8) {
        for s in planar_scenes() {
            let l = s.build_dirac().unwrap();
            let quot = s.parts().unwrap().quotient().unwrap();
            let a = reduce_pointwise(&l, &quot, &[qf(xn, 8), qf(y1, 8)]).unwrap();
            let b = reduce_pointwise(&l, &quot, &[qf(xn, 8), qf(y2, 8)]).unwrap();
            prop_assert!(a.is_maximal_isotropic());
            prop_assert!(subspace_equal(&a, &b));
        }
    }
}

#[test]
fn reduced_fibers_are_lagrangian_on_grids() {
    for s in planar_scenes() {
        let l = s.build_dirac().unwrap();
        let parts = s.parts().unwrap();
        let quot = parts.quotient().unwrap();
        for node in parts.sample_grid(Some(16)).unwrap().nodes(0) {
            assert!(reduce_pointwise(&l, &quot, &node.point).unwrap().is_maximal_isotropic());
        }
    }
}
