//! Canonical scenes.
//!
//! All planar scenes live on `[-1, 1]^2` with the action generated by `d_y`
//! and the quotient `(x, y) -> x`. Under the contraction convention of
//! [`crate::polycalc::interior_product`], a moment map of `w = g(x) dx ^ dy`
//! for `d_y` is `mu = -G(x)` with `G' = g`.

use crate::hamaction::GroupKind;
use crate::polycalc::parse_poly;
use crate::rational;
use crate::scene::{
    ActionDto, DiracSpec, DomainSpec, GridSpec, LevelSetSpec, ObstructionSpec, PairTerm, PolySpec, RatSpec, Scene,
    SectionSpec,
};

pub const NAMES: [&str; 6] = [
    "hamiltonian-singular",
    "regular-plane",
    "distribution",
    "zero-form",
    "yang-mills",
    "hopf-obstruction",
];

pub fn by_name(name: &str) -> Option<Scene> {
    match name {
        "hamiltonian-singular" => Some(hamiltonian_singular()),
        "regular-plane" => Some(regular_plane()),
        "distribution" => Some(distribution()),
        "zero-form" => Some(zero_form()),
        "yang-mills" => yang_mills("r^2 + 1", "1"),
        "hopf-obstruction" => Some(hopf_obstruction("r^2 + 1")),
        _ => None,
    }
}

fn specs(v: &[&str]) -> Vec<PolySpec> {
    v.iter().map(|&s| s.into()).collect()
}

fn plane_2form(coeff: &str) -> DiracSpec {
    DiracSpec::TwoForm {
        domain: DomainSpec::cube(2, -1, 1),
        terms: vec![PairTerm {
            i: 0,
            j: 1,
            coeff: coeff.into(),
        }],
    }
}

fn y_translation() -> ActionDto {
    ActionDto {
        group: GroupKind::R,
        generators: vec![specs(&["0", "1"])],
        period: None,
    }
}

/// The `y`-axis as the level set `x = 0`, collapsed to a point.
fn y_axis() -> LevelSetSpec {
    LevelSetSpec {
        c: vec![0.into()],
        params: None,
        map: specs(&["0", "t"]),
        domain: DomainSpec::cube(1, -1, 1),
        quotient: Some(Vec::new()),
    }
}

fn planar(name: &str, dirac: DiracSpec, moment: Option<&str>) -> Scene {
    Scene {
        name: Some(name.into()),
        dirac: Some(dirac),
        action: Some(y_translation()),
        moment: moment.map(|m| vec![m.into()]),
        quotient: Some(specs(&["x"])),
        level_set: moment.map(|_| y_axis()),
        grid: Some(GridSpec {
            resolution: 8,
            refinements: 1,
        }),
        ..Scene::default()
    }
}

/// `w = x dx ^ dy`, `mu = -x^2/2`: not regular at `0`, reduced fibers jump at `x = 0`.
pub fn hamiltonian_singular() -> Scene {
    planar("hamiltonian-singular", plane_2form("x"), Some("-x^2/2"))
}

/// `w = dx ^ dy`, `mu = -x`: regular everywhere.
pub fn regular_plane() -> Scene {
    planar("regular-plane", plane_2form("1"), Some("-x"))
}

/// `D = <x d_x + d_y>` with annihilator `dx - x dy`.
pub fn distribution() -> Scene {
    let dirac = DiracSpec::Distribution {
        domain: DomainSpec::cube(2, -1, 1),
        vectors: vec![specs(&["x", "1"])],
        annihilator: Some(vec![specs(&["1", "-x"])]),
        max_degree: 2,
    };
    planar("distribution", dirac, None)
}

/// The tangent bundle (graph of the zero form) with the zero moment map.
pub fn zero_form() -> Scene {
    planar("zero-form", plane_2form("0"), Some("0"))
}

/// Local model of a circle bundle with connection `theta = dp + (c/2)(u dv - v du)`
/// over the `(u, v)` plane, coupled to a fiber coordinate `r`.
///
/// Coordinates `(u, v, p, s, r)`; the Dirac structure is the graph of
/// `d(s theta)` on `(u, v, p, s)` plus `T*` of the `r` line. The generator
/// `d_p` has moment map `f(r) - s`, and the reduced leaves `r = const`
/// carry `f(r) c du ^ dv`. Returns `None` if `f` or `c` does not parse.
pub fn yang_mills(f: &str, c: &str) -> Option<Scene> {
    let fr = parse_poly(f, &["r".to_string()]).ok()?;
    let cq = rational::parse_q(c).ok()?;
    let cs = rational::fmt_q(&cq);
    let half = rational::fmt_q(&(cq * rational::half()));
    // f(r) must fit inside the s-range of the box
    let (lo, hi) = fr.range_bound(&[rational::q(-1)], &[rational::q(1)]);
    let s_lo = rational::fmt_q(&lo.floor());
    let s_hi = rational::fmt_q(&hi.ceil());
    let names = ["u", "v", "p", "s", "r"].map(String::from);
    let fm = parse_poly(f, &["r".to_string()]).ok()?.embed(5, &[4]);
    let f_amb = fm.display_with(&names);
    let sec = |x: [&str; 5], a: [String; 5]| SectionSpec {
        x: specs(&x),
        alpha: a.iter().map(|s| s.as_str().into()).collect(),
    };
    let z = || "0".to_string();
    let sections = vec![
        sec(["1", "0", "0", "0", "0"], [z(), format!("{cs}*s"), z(), format!("{half}*v"), z()]),
        sec(["0", "1", "0", "0", "0"], [format!("-{cs}*s"), z(), z(), format!("-{half}*u"), z()]),
        sec(["0", "0", "1", "0", "0"], [z(), z(), z(), "-1".into(), z()]),
        sec(["0", "0", "0", "1", "0"], [format!("-{half}*v"), format!("{half}*u"), "1".into(), z(), z()]),
        sec(["0", "0", "0", "0", "0"], [z(), z(), z(), z(), "1".into()]),
    ];
    let one = RatSpec::Int(1);
    let neg = RatSpec::Int(-1);
    Some(Scene {
        name: Some("yang-mills".into()),
        vars: Some(names.to_vec()),
        dirac: Some(DiracSpec::Span {
            domain: DomainSpec {
                min: vec![neg.clone(), neg.clone(), neg.clone(), RatSpec::Text(s_lo), neg.clone()],
                max: vec![one.clone(), one.clone(), one.clone(), RatSpec::Text(s_hi), one.clone()],
            },
            sections,
        }),
        action: Some(ActionDto {
            group: GroupKind::R,
            generators: vec![specs(&["0", "0", "1", "0", "0"])],
            period: None,
        }),
        moment: Some(vec![PolySpec::Expr(format!("{f_amb} - s"))]),
        quotient: Some(specs(&["u", "v", "s", "r"])),
        level_set: Some(LevelSetSpec {
            c: vec![0.into()],
            params: Some(["u", "v", "p", "r"].map(String::from).to_vec()),
            map: vec!["u".into(), "v".into(), "p".into(), PolySpec::Expr(f.to_string()), "r".into()],
            domain: DomainSpec::cube(4, -1, 1),
            quotient: Some(specs(&["u", "v", "r"])),
        }),
        grid: Some(GridSpec {
            resolution: 2,
            refinements: 1,
        }),
        obstruction: Some(profile_obstruction(f)),
    })
}

fn profile_obstruction(f: &str) -> ObstructionSpec {
    ObstructionSpec {
        f: f.into(),
        interval: [RatSpec::Int(-1), RatSpec::Int(1)],
        curvature_scale: 1.0,
        quadrature_order: crate::obstruction::DEFAULT_ORDER,
        disk: None,
        step: 0.01,
    }
}

/// Obstruction-only scene for the leaves `S^2 x {r}` with form `f(r) w_theta`.
pub fn hopf_obstruction(f: &str) -> Scene {
    Scene {
        name: Some("hopf-obstruction".into()),
        obstruction: Some(profile_obstruction(f)),
        ..Scene::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamaction::{check_moment, is_dirac_action, is_regular_at};
    use crate::lindirac::{subspace_equal, GenVector, LinearDirac};
    use crate::rational::{q, qf};
    use crate::reduction::{hamiltonian_quotient_fiber, verify_diamond};

    #[test]
    fn all_presets_build() {
        for name in NAMES {
            let s = by_name(name).unwrap();
            if s.dirac.is_some() {
                let l = s.build_dirac().unwrap();
                assert!(l.is_involutive().unwrap(), "{name}");
                s.parts().unwrap();
            }
        }
    }

    #[test]
    fn yang_mills_reduced_leaf() {
        let s = yang_mills("r^2 + 1", "2").unwrap();
        let l = s.build_dirac().unwrap();
        let parts = s.parts().unwrap();
        let a = parts.require_action().unwrap();
        let mu = parts.require_moment().unwrap();
        let level = parts.require_level().unwrap();
        let qc = parts.require_level_quotient().unwrap();
        assert!(is_dirac_action(&l, a).unwrap().holds);
        assert!(check_moment(&l, a, mu).unwrap().holds());
        assert!(is_regular_at(&l, a, mu, &level.c, Some(level), 2).unwrap().is_regular());
        // at (u, v, p, r) = (1/2, -1/3, 0, 1/2): f = 5/4, c f = 5/2
        let t = [qf(1, 2), qf(-1, 3), q(0), qf(1, 2)];
        let fiber = hamiltonian_quotient_fiber(&l, a, mu, level, qc, &t).unwrap();
        let cf = qf(5, 2);
        let z = q(0);
        let want = LinearDirac::new(
            3,
            vec![
                GenVector::new(vec![q(1), z.clone(), z.clone()], vec![z.clone(), cf.clone(), z.clone()]).unwrap(),
                GenVector::new(vec![z.clone(), q(1), z.clone()], vec![-cf, z.clone(), z.clone()]).unwrap(),
                GenVector::from_i64(&[0, 0, 0], &[0, 0, 1]),
            ],
        )
        .unwrap();
        assert!(subspace_equal(&fiber, &want));
        let d = verify_diamond(&l, a, mu, level, &parts.quotient().unwrap(), qc, 2).unwrap();
        assert!(d.passed(), "{d:?}");
    }
}
