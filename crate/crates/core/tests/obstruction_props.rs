use std::f64::consts::PI;

use dirackit::obstruction::{
    area_variation_analytic, area_variation_numeric, monodromy_verdict, DiskFamily, SphereAtlas,
};
use dirackit::polycalc::parse_poly;
use dirackit::rational::{q, qf};
use dirackit::Poly;
use proptest::prelude::*;

fn profile(coeffs: &[i64]) -> Poly {
    let s: Vec<String> = coeffs.iter().enumerate().map(|(i, c)| format!("({c})*r^{i}")).collect();
    parse_poly(&s.join(" + "), &["r".to_string()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verdict_ignores_curvature_scale(coeffs in prop::collection::vec(-4i64..=4, 1..5), lam in 1u32..=6) {
        let f = profile(&coeffs);
        let base = monodromy_verdict(&f, [q(-1), q(1)], &SphereAtlas::new(1.0, 16).unwrap()).unwrap();
        let scaled = monodromy_verdict(&f, [q(-1), q(1)], &SphereAtlas::new(lam as f64 / 2.0, 16).unwrap()).unwrap();
        prop_assert_eq!(base.verdict, scaled.verdict);
        prop_assert_eq!(&base.critical_points, &scaled.critical_points);
    }

    #[test]
    fn integrable_verdict_is_monotone(coeffs in prop::collection::vec(-4i64..=4, 1..5), a in 0i64..4, b in 0i64..4) {
        let f = profile(&coeffs);
        let atlas = SphereAtlas::new(1.0, 16).unwrap();
        let outer = monodromy_verdict(&f, [q(-1), q(1)], &atlas).unwrap();
        let inner = monodromy_verdict(&f, [qf(-4 + a, 4), qf(4 - b, 4)], &atlas).unwrap();
        if outer.verdict == dirackit::Verdict::Integrable {
            prop_assert_eq!(inner.verdict, dirackit::Verdict::Integrable);
        }
    }

    #[test]
    fn numeric_variation_matches_closed_form(coeffs in prop::collection::vec(-4i64..=4, 1..5), th in 1u32..30, r0 in -10i32..=10) {
        let f = profile(&coeffs);
        let atlas = SphereAtlas::hopf(16).unwrap();
        let fam = DiskFamily { theta0: th as f64 * PI / 30.0, r0: r0 as f64 / 10.0, velocity: 1.0 };
        let n = area_variation_numeric(&atlas, &f, &fam, 0.01).unwrap();
        let a = area_variation_analytic(&atlas, &f, &fam).unwrap();
        prop_assert!((n - a).abs() < 1e-6 * (1.0 + a.abs()), "{} vs {}", n, a);
    }
}
