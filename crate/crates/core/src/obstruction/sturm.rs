//! Exact real-root isolation for univariate rational polynomials.

use num_traits::{Signed, Zero};

use crate::rational::{self, Q};

/// Dense coefficients, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Q>);

impl UniPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rational::q(i as i64))
                .collect(),
        )
    }

    fn lead(&self) -> &Q {
        self.0.last().expect("nonzero polynomial")
    }

    fn rem(&self, d: &UniPoly) -> UniPoly {
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    fn div_exact(&self, d: &UniPoly) -> UniPoly {
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        let mut quo = vec![Q::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &f * c;
            }
            quo[shift] = f;
            r.pop();
        }
        UniPoly::new(quo)
    }

    fn monic(&self) -> UniPoly {
        let l = self.lead().clone();
        UniPoly(self.0.iter().map(|c| c / &l).collect())
    }

    fn neg(&self) -> UniPoly {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }
}

pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    if a.is_zero() {
        a
    } else {
        a.monic()
    }
}

/// Product of the distinct irreducible factors (same real roots, all simple).
pub fn square_free(p: &UniPoly) -> UniPoly {
    let g = gcd(p, &p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        p.clone()
    } else {
        p.div_exact(&g)
    }
}

fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(chain: &[UniPoly], x: &Q) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Root of a square-free polynomial isolated in `(lo, hi]`, or exactly when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Q,
    pub hi: Q,
}

impl IsolatedRoot {
    pub fn approx(&self) -> f64 {
        (rational::to_f64(&self.lo) + rational::to_f64(&self.hi)) / 2.0
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// Distinct real roots in the open interval `(a, b)`, each isolated and then
/// bisected to width at most `width`.
pub fn roots_in_open(p: &UniPoly, a: &Q, b: &Q, width: &Q) -> Vec<IsolatedRoot> {
    if p.degree().unwrap_or(0) == 0 || a >= b {
        return Vec::new();
    }
    let sf = square_free(p);
    let chain = sturm_chain(&sf);
    // roots in (lo, hi]
    let count = |lo: &Q, hi: &Q| sign_changes(&chain, lo) - sign_changes(&chain, hi);
    let mut top = b.clone();
    if sf.eval(b).is_zero() {
        let mut step = (b - a) * rational::half();
        while count(&(b - &step), b) > 1 || sf.eval(&(b - &step)).is_zero() {
            step *= rational::half();
        }
        top = b - step;
    }
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), top)];
    while let Some((lo, hi)) = stack.pop() {
        match count(&lo, &hi) {
            0 => {}
            1 => out.push(refine(&sf, lo, hi, width)),
            _ => {
                let mid = (&lo + &hi) * rational::half();
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Bisects `(lo, hi]` holding exactly one simple root.
fn refine(sf: &UniPoly, mut lo: Q, mut hi: Q, width: &Q) -> IsolatedRoot {
    if sf.eval(&hi).is_zero() {
        return IsolatedRoot { lo: hi.clone(), hi };
    }
    let s_hi = sf.eval(&hi).is_positive();
    while &hi - &lo > *width {
        let mid = (&lo + &hi) * rational::half();
        let v = sf.eval(&mid);
        if v.is_zero() {
            return IsolatedRoot { lo: mid.clone(), hi: mid };
        }
        if v.is_positive() == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    IsolatedRoot { lo, hi }
}

/// `x^k` coefficients of a one-variable [`crate::Poly`].
pub fn from_poly(p: &crate::Poly) -> UniPoly {
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut c = vec![Q::zero(); deg + 1];
    for (e, v) in p.terms() {
        c[e[0] as usize] = v.clone();
    }
    UniPoly::new(c)
}
