#![allow(dead_code)]

use dirackit::polycalc::{KForm, Poly, PolyMap, VectorField};
use dirackit::rational::qf;
use dirackit::QMatrix;
use proptest::prelude::*;

/// Polynomial in `n` variables of total degree at most `deg`, few terms.
pub fn poly(n: usize, deg: u32) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0..=deg, n), -5i64..=5, 1i64..=3);
    prop::collection::vec(term, 0..4).prop_map(move |terms| {
        let terms = terms.into_iter().filter_map(|(mut e, a, b)| {
            // clamp to total degree
            while e.iter().sum::<u32>() > deg {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            (a != 0).then(|| (e, qf(a, b)))
        });
        Poly::from_terms(n, terms).unwrap()
    })
}

pub fn vector_field(n: usize, deg: u32) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly(n, deg), n).prop_map(|c| VectorField::new(c).unwrap())
}

/// All increasing `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn form(n: usize, k: usize, deg: u32) -> impl Strategy<Value = KForm> {
    let idx = subsets(n, k);
    prop::collection::vec(poly(n, deg), idx.len())
        .prop_map(move |cs| KForm::from_terms(n, k, idx.clone().into_iter().zip(cs)).unwrap())
}

pub fn poly_map(m: usize, n: usize, deg: u32) -> impl Strategy<Value = PolyMap> {
    prop::collection::vec(poly(m, deg), n).prop_map(move |c| PolyMap::new(m, c).unwrap())
}

/// A `k`-form on `R^n` with `1 <= n <= 4`, `0 <= k <= n`.
pub fn any_form(deg: u32) -> impl Strategy<Value = KForm> {
    (1usize..=4).prop_flat_map(|n| (Just(n), 0..=n)).prop_flat_map(move |(n, k)| form(n, k, deg))
}

pub fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, cols), rows)
        .prop_map(|r| QMatrix::from_rows(r.into_iter().map(|row| row.into_iter().map(dirackit::rational::q).collect()).collect()))
}

pub fn antisymmetric(n: usize) -> impl Strategy<Value = QMatrix> {
    small_matrix(n, n).prop_map(move |m| m.add(&m.transpose().scale(&dirackit::rational::q(-1))))
}
