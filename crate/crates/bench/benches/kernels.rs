use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use dirackit::obstruction::{monodromy_verdict, Region, SphereAtlas, DEFAULT_ORDER};
use dirackit::polycalc::{exterior_d, lie_derivative, parse_poly, KForm, VectorField};
use dirackit::rational::q;
use dirackit::reduction::smoothness_probe;
use dirackit::{presets, Domain, SampleGrid};

fn names() -> Vec<String> {
    ["x", "y", "z"].map(String::from).to_vec()
}

fn calculus(c: &mut Criterion) {
    let n = names();
    let p = |s: &str| parse_poly(s, &n).unwrap();
    let w = KForm::from_terms(
        3,
        2,
        [(vec![0, 1], p("x^2*z - y")), (vec![0, 2], p("x*y*z + 3")), (vec![1, 2], p("y^3 - z^2*x"))],
    )
    .unwrap();
    let x = VectorField::new(vec![p("y*z"), p("x^2 - z"), p("x*y + 1")]).unwrap();
    c.bench_function("exterior_d 2-form R^3", |b| b.iter(|| exterior_d(black_box(&w))));
    c.bench_function("lie_derivative 2-form R^3", |b| b.iter(|| lie_derivative(black_box(&x), black_box(&w)).unwrap()));
}

fn dirac(c: &mut Criterion) {
    let l = presets::hamiltonian_singular().build_dirac().unwrap();
    c.bench_function("integrability tensor x dx^dy", |b| b.iter(|| l.integrability_tensor().unwrap()));
    let scene = presets::hamiltonian_singular();
    let pr = scene.parts().unwrap().quotient().unwrap();
    let grid = SampleGrid::new(Domain::cube(2, -1, 1), 8, 1).unwrap();
    c.bench_function("smoothness probe res 8", |b| b.iter(|| smoothness_probe(&l, &pr, &grid).unwrap()));
}

fn obstruction(c: &mut Criterion) {
    let atlas = SphereAtlas::hopf(DEFAULT_ORDER).unwrap();
    c.bench_function("full sphere curvature integral", |b| {
        b.iter(|| atlas.curvature_integral(black_box(Region::Full)).unwrap())
    });
    let f = parse_poly("r^5 - 3*r^3 + r", &["r".to_string()]).unwrap();
    c.bench_function("monodromy verdict quintic", |b| {
        b.iter(|| monodromy_verdict(black_box(&f), [q(-2), q(2)], &atlas).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = calculus, dirac, obstruction
}
criterion_main!(benches);
