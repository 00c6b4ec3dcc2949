use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{DiracError, Result};
use crate::rational::{self, Q};

/// Exponent multi-index of a monomial.
pub type Exponent = Vec<u32>;

/// Multivariate polynomial over the rationals in canonical sparse form.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rational::q(c))
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Q::one())
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: Q) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Q)>,
    {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(DiracError::dim(nvars, e.len(), "exponent length"));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the value if the polynomial is constant (including zero).
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in variable `i`, `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * Q::from_integer(e[i].into()));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong dimension");
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                rational::to_f64(c)
                    * e.iter()
                        .zip(point)
                        .map(|(&k, x)| x.powi(k as i32))
                        .product::<f64>()
            })
            .sum()
    }

    /// Substitutes `x_i := subs[i]`. All substitutes must share one variable count.
    pub fn compose(&self, subs: &[Poly]) -> Result<Poly> {
        if subs.len() != self.nvars {
            return Err(DiracError::dim(self.nvars, subs.len(), "substitution arity"));
        }
        let m = match subs.first() {
            Some(s) => s.nvars,
            // A polynomial in zero variables is a constant.
            None => return Ok(self.clone()),
        };
        if let Some(bad) = subs.iter().find(|s| s.nvars != m) {
            return Err(DiracError::dim(m, bad.nvars, "substitution variables"));
        }
        let mut powers: Vec<Vec<Poly>> = subs.iter().map(|s| vec![Poly::one(m), s.clone()]).collect();
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap() * &subs[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Rigorous enclosure of the range over the box `lo <= x <= hi`,
    /// by term-wise interval bounds (even powers are kept nonnegative).
    pub fn range_bound(&self, lo: &[Q], hi: &[Q]) -> (Q, Q) {
        let mut min = Q::zero();
        let mut max = Q::zero();
        for (e, c) in &self.terms {
            let (mut a, mut b) = (Q::one(), Q::one());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let (pa, pb) = pow_interval(&lo[i], &hi[i], k);
                let cands = [&a * &pa, &a * &pb, &b * &pa, &b * &pb];
                a = cands.iter().min().unwrap().clone();
                b = cands.iter().max().unwrap().clone();
            }
            let (ta, tb) = if c.is_negative() { (&b * c, &a * c) } else { (&a * c, &b * c) };
            min += ta;
            max += tb;
        }
        (min, max)
    }

    /// Terms in graded-lexicographic order, highest first.
    pub fn grlex_terms(&self) -> Vec<(&Exponent, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    /// Renders with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.grlex_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                s.push_str(&rational::fmt_q(&mag));
            } else {
                if !mag.is_one() {
                    s.push_str(&rational::fmt_q(&mag));
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }

    /// Re-embeds into a larger variable set; `slots[i]` is the new index of old variable `i`.
    pub fn embed(&self, nvars: usize, slots: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                e2[slots[i]] += k;
            }
            out.add_term(e2, c.clone());
        }
        out
    }
}

fn pow_interval(lo: &Q, hi: &Q, k: u32) -> (Q, Q) {
    let pl = num_traits::pow(lo.clone(), k as usize);
    let ph = num_traits::pow(hi.clone(), k as usize);
    if k % 2 == 1 {
        (pl, ph)
    } else if !lo.is_positive() && !hi.is_negative() {
        (Q::zero(), pl.max(ph))
    } else {
        (pl.clone().min(ph.clone()), pl.max(ph))
    }
}

/// Default coordinate names: `x, y, z, w` up to four variables, else `x0, x1, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_names(self.nvars)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

fn add_polys(a: &Poly, b: &Poly, sign: bool) -> Poly {
    assert_eq!(a.nvars, b.nvars, "adding polynomials in different variable counts");
    let mut out = a.clone();
    for (e, c) in &b.terms {
        out.add_term(e.clone(), if sign { c.clone() } else { -c });
    }
    out
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        add_polys(self, rhs, true)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        add_polys(self, rhs, false)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials in different variable counts");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

// JSON term-list form: {"vars": n, "terms": [{"exp": [...], "num": "p", "den": "q"}]}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub(crate) struct TermJson {
    exp: Vec<u32>,
    num: String,
    den: String,
}

/// Serialized polynomial: variable count and an exact term list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct PolyJson {
    vars: usize,
    terms: Vec<TermJson>,
}

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        PolyJson {
            vars: p.nvars,
            terms: p
                .grlex_terms()
                .into_iter()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for Poly {
    type Error = DiracError;
    fn try_from(j: PolyJson) -> Result<Poly> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            let num: num_bigint::BigInt = t
                .num
                .trim()
                .parse()
                .map_err(|e| DiracError::Invalid(format!("bad numerator {:?}: {e}", t.num)))?;
            let den: num_bigint::BigInt = t
                .den
                .trim()
                .parse()
                .map_err(|e| DiracError::Invalid(format!("bad denominator {:?}: {e}", t.den)))?;
            if den.is_zero() {
                return Err(DiracError::Invalid("zero denominator".into()));
            }
            terms.push((t.exp, Q::new(num, den)));
        }
        Poly::from_terms(j.vars, terms)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        Poly::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn x() -> Poly {
        Poly::var(2, 0)
    }
    fn y() -> Poly {
        Poly::var(2, 1)
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let p = &x() - &x();
        assert!(p.is_zero());
        assert_eq!(p, Poly::zero(2));
        let p = Poly::from_terms(2, [(vec![1, 0], q(2)), (vec![1, 0], q(-2))]).unwrap();
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn arithmetic_and_eval() {
        let p = (&x() + &y()).pow(2);
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.eval(&[q(1), q(2)]), q(9));
        assert_eq!(p.derivative(0), (&x() + &y()).scale(&q(2)));
        assert_eq!(p.eval_f64(&[0.5, 0.5]), 1.0);
    }

    #[test]
    fn composition_substitutes() {
        // x*y with x = t^2, y = t
        let t = Poly::var(1, 0);
        let p = &x() * &y();
        assert_eq!(p.compose(&[t.pow(2), t.clone()]).unwrap(), t.pow(3));
    }

    #[test]
    fn range_bound_encloses() {
        let p = &(-&x().pow(2)).scale(&qf(1, 2)) - &Poly::int(2, 1);
        let (lo, hi) = p.range_bound(&[q(-1), q(-1)], &[q(1), q(1)]);
        assert_eq!(lo, qf(-3, 2));
        assert_eq!(hi, q(-1));
    }

    #[test]
    fn json_round_trip_is_grlex() {
        let p = &x().pow(2).scale(&qf(1, 2)) - &y();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"vars":2,"terms":[{"exp":[2,0],"num":"1","den":"2"},{"exp":[0,1],"num":"-1","den":"1"}]}"#
        );
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.to_string(), "1/2*x^2 - y");
    }
}
