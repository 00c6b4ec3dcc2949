use std::collections::BTreeMap;

use num_traits::Zero;

use super::Poly;
use crate::error::{DiracError, Result};
use crate::linalg::QMatrix;
use crate::rational::Q;

/// Polynomial vector field `sum_i X^i d/dx_i` on R^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    comps: Vec<Poly>,
}

impl VectorField {
    pub fn new(comps: Vec<Poly>) -> Result<Self> {
        let n = comps.len();
        if let Some(c) = comps.iter().find(|c| c.nvars() != n) {
            return Err(DiracError::dim(n, c.nvars(), "vector field component variables"));
        }
        Ok(VectorField { comps })
    }

    pub fn zero(dim: usize) -> Self {
        VectorField {
            comps: vec![Poly::zero(dim); dim],
        }
    }

    /// Coordinate field `d/dx_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.comps[i] = Poly::one(dim);
        v
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Poly {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero(self.dim());
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(c * &f.derivative(i));
            }
        }
        acc
    }

    pub fn scale(&self, f: &Poly) -> VectorField {
        VectorField {
            comps: self.comps.iter().map(|c| c * f).collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn eval(&self, p: &[Q]) -> Vec<Q> {
        self.comps.iter().map(|c| c.eval(p)).collect()
    }
}

/// Lie bracket `[X, Y]^i = X(Y^i) - Y(X^i)`.
pub fn vf_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    if x.dim() != y.dim() {
        return Err(DiracError::dim(x.dim(), y.dim(), "vector field bracket"));
    }
    Ok(VectorField {
        comps: (0..x.dim())
            .map(|i| &x.apply(&y.comps[i]) - &y.apply(&x.comps[i]))
            .collect(),
    })
}

/// Differential k-form with polynomial coefficients, keyed by strictly
/// increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KForm {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Poly>,
}

/// Sorts `idx` in place, returning the permutation sign, or `None` on a repeated index.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut positive = true;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            positive = !positive;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(positive)
    }
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Degree-0 form.
    pub fn function(f: Poly) -> Self {
        let mut w = Self::zero(f.nvars(), 0);
        w.add_term(Vec::new(), f);
        w
    }

    /// `dx_i`.
    pub fn dx(dim: usize, i: usize) -> Self {
        let mut w = Self::zero(dim, 1);
        w.add_term(vec![i], Poly::one(dim));
        w
    }

    /// Builds a form from `(indices, coefficient)` pairs; indices need not be sorted.
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Poly)>,
    {
        let mut w = Self::zero(dim, degree);
        for (mut idx, c) in terms {
            if idx.len() != degree {
                return Err(DiracError::dim(degree, idx.len(), "form index tuple length"));
            }
            if c.nvars() != dim {
                return Err(DiracError::dim(dim, c.nvars(), "form coefficient variables"));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(DiracError::Invalid(format!("form index {bad} out of range for dimension {dim}")));
            }
            match sort_with_sign(&mut idx) {
                Some(true) => w.add_term(idx, c),
                Some(false) => w.add_term(idx, -c),
                None => {}
            }
        }
        Ok(w)
    }

    /// 1-form `sum_i a_i dx_i` from its components.
    pub fn one_form(comps: &[Poly]) -> Result<Self> {
        let n = comps.len();
        Self::from_terms(n, 1, comps.iter().enumerate().map(|(i, c)| (vec![i], c.clone())))
    }

    fn add_term(&mut self, idx: Vec<usize>, c: Poly) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(idx).or_insert_with(|| Poly::zero(self.dim));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.coeffs.iter()
    }

    /// Coefficient at a strictly increasing index tuple.
    pub fn coeff(&self, idx: &[usize]) -> Poly {
        self.coeffs.get(idx).cloned().unwrap_or_else(|| Poly::zero(self.dim))
    }

    /// Components `a_i` of a 1-form.
    pub fn components(&self) -> Vec<Poly> {
        assert_eq!(self.degree, 1, "components() is defined for 1-forms");
        (0..self.dim).map(|i| self.coeff(&[i])).collect()
    }

    /// The function of a 0-form.
    pub fn as_function(&self) -> Poly {
        assert_eq!(self.degree, 0);
        self.coeff(&[])
    }

    fn check_same(&self, other: &KForm, ctx: &'static str) -> Result<()> {
        if self.dim != other.dim {
            return Err(DiracError::dim(self.dim, other.dim, ctx));
        }
        if self.degree != other.degree {
            return Err(DiracError::dim(self.degree, other.degree, ctx));
        }
        Ok(())
    }

    pub fn add(&self, other: &KForm) -> Result<KForm> {
        self.check_same(other, "form addition")?;
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KForm) -> Result<KForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        self.mul_poly(&Poly::int(self.dim, -1))
    }

    pub fn mul_poly(&self, f: &Poly) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree);
        for (i, c) in &self.coeffs {
            out.add_term(i.clone(), c * f);
        }
        out
    }

    /// Evaluates the coefficients at a point; returns `(indices, value)` pairs.
    pub fn eval(&self, p: &[Q]) -> Vec<(Vec<usize>, Q)> {
        self.coeffs
            .iter()
            .map(|(i, c)| (i.clone(), c.eval(p)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// Components of a 1-form at a point.
    pub fn eval_covector(&self, p: &[Q]) -> Vec<Q> {
        self.components().iter().map(|c| c.eval(p)).collect()
    }

    /// Antisymmetric matrix `W_ij = w(d_i, d_j)` of a 2-form at a point.
    pub fn eval_matrix(&self, p: &[Q]) -> QMatrix {
        assert_eq!(self.degree, 2, "eval_matrix is defined for 2-forms");
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for (idx, c) in &self.coeffs {
            let v = c.eval(p);
            m.set(idx[0], idx[1], v.clone());
            m.set(idx[1], idx[0], -v);
        }
        m
    }
}

/// Wedge product.
pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    if a.dim != b.dim {
        return Err(DiracError::dim(a.dim, b.dim, "wedge product"));
    }
    let mut out = KForm::zero(a.dim, a.degree + b.degree);
    for (ia, ca) in &a.coeffs {
        for (ib, cb) in &b.coeffs {
            let mut idx: Vec<usize> = ia.iter().chain(ib).copied().collect();
            match sort_with_sign(&mut idx) {
                Some(true) => out.add_term(idx, ca * cb),
                Some(false) => out.add_term(idx, -(ca * cb)),
                None => {}
            }
        }
    }
    Ok(out)
}

/// Exterior derivative. A top-degree input yields the zero (n+1)-form.
pub fn exterior_d(w: &KForm) -> KForm {
    let mut out = KForm::zero(w.dim, w.degree + 1);
    for (idx, c) in &w.coeffs {
        for i in 0..w.dim {
            let dc = c.derivative(i);
            if dc.is_zero() || idx.contains(&i) {
                continue;
            }
            // dx_i ^ dx_I: moving dx_i past the smaller indices.
            let pos = idx.iter().filter(|&&j| j < i).count();
            let mut new = idx.clone();
            new.insert(pos, i);
            out.add_term(new, if pos % 2 == 0 { dc } else { -dc });
        }
    }
    out
}

/// Interior product `i_X w`, with `i_X(a ^ b) = a(X) b - b(X) a` on 1-forms.
pub fn interior_product(x: &VectorField, w: &KForm) -> Result<KForm> {
    if x.dim() != w.dim {
        return Err(DiracError::dim(w.dim, x.dim(), "interior product"));
    }
    if w.degree == 0 {
        return Err(DiracError::Invalid("interior product of a 0-form".into()));
    }
    let mut out = KForm::zero(w.dim, w.degree - 1);
    for (idx, c) in &w.coeffs {
        for (p, &i) in idx.iter().enumerate() {
            let xi = x.comp(i);
            if xi.is_zero() {
                continue;
            }
            let mut rest = idx.clone();
            rest.remove(p);
            let t = xi * c;
            out.add_term(rest, if p % 2 == 0 { t } else { -t });
        }
    }
    Ok(out)
}

/// Lie derivative computed from its coordinate expression
/// `L_X(f dx_I) = X(f) dx_I + f sum_p dx_i1 ^ .. ^ d(X^ip) ^ .. ^ dx_ik`.
pub fn lie_derivative(x: &VectorField, w: &KForm) -> Result<KForm> {
    if x.dim() != w.dim {
        return Err(DiracError::dim(w.dim, x.dim(), "Lie derivative"));
    }
    let n = w.dim;
    let mut out = KForm::zero(n, w.degree);
    for (idx, c) in &w.coeffs {
        out.add_term(idx.clone(), x.apply(c));
        for p in 0..idx.len() {
            let mut acc = KForm::function(c.clone());
            for (q, &i) in idx.iter().enumerate() {
                let factor = if q == p {
                    exterior_d(&KForm::function(x.comp(i).clone()))
                } else {
                    KForm::dx(n, i)
                };
                acc = wedge(&acc, &factor)?;
            }
            out = out.add(&acc)?;
        }
    }
    Ok(out)
}

/// Lie derivative of a vector field, `L_X Y = [X, Y]`.
pub fn lie_derivative_vf(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    vf_bracket(x, y)
}

/// Bivector `sum_{i<j} pi^{ij} d_i ^ d_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bivector {
    dim: usize,
    coeffs: BTreeMap<(usize, usize), Poly>,
}

impl Bivector {
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Poly)>,
    {
        let mut b = Bivector {
            dim,
            coeffs: BTreeMap::new(),
        };
        for ((i, j), c) in terms {
            if i >= dim || j >= dim {
                return Err(DiracError::Invalid(format!("bivector index ({i},{j}) out of range")));
            }
            if c.nvars() != dim {
                return Err(DiracError::dim(dim, c.nvars(), "bivector coefficient variables"));
            }
            if i == j {
                continue;
            }
            let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
            let slot = b.coeffs.entry(key).or_insert_with(|| Poly::zero(dim));
            *slot = &*slot + &c;
        }
        b.coeffs.retain(|_, v| !v.is_zero());
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `pi^{ij}` for any ordered pair.
    pub fn entry(&self, i: usize, j: usize) -> Poly {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Poly::zero(self.dim),
            Less => self.coeffs.get(&(i, j)).cloned().unwrap_or_else(|| Poly::zero(self.dim)),
            Greater => -self.entry(j, i),
        }
    }

    /// `pi(a, .)`, i.e. `X^j = sum_i a_i pi^{ij}`.
    pub fn sharp(&self, a: &KForm) -> Result<VectorField> {
        if a.degree() != 1 || a.dim() != self.dim {
            return Err(DiracError::dim(self.dim, a.dim(), "bivector sharp"));
        }
        let comps = a.components();
        let v = (0..self.dim)
            .map(|j| {
                (0..self.dim).fold(Poly::zero(self.dim), |acc, i| &acc + &(&comps[i] * &self.entry(i, j)))
            })
            .collect();
        VectorField::new(v)
    }

    pub fn eval_matrix(&self, p: &[Q]) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for ((i, j), c) in &self.coeffs {
            let v = c.eval(p);
            m.set(*i, *j, v.clone());
            m.set(*j, *i, -v);
        }
        m
    }
}

/// Polynomial map R^m -> R^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMap {
    source: usize,
    comps: Vec<Poly>,
}

impl PolyMap {
    pub fn new(source: usize, comps: Vec<Poly>) -> Result<Self> {
        if let Some(c) = comps.iter().find(|c| c.nvars() != source) {
            return Err(DiracError::dim(source, c.nvars(), "map component variables"));
        }
        Ok(PolyMap { source, comps })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap {
            source: n,
            comps: (0..n).map(|i| Poly::var(n, i)).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source
    }

    pub fn target_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if inner.target_dim() != self.source {
            return Err(DiracError::dim(self.source, inner.target_dim(), "map composition"));
        }
        let comps = if self.source == 0 {
            self.comps
                .iter()
                .map(|c| Poly::constant(inner.source, c.as_constant().unwrap_or_default()))
                .collect()
        } else {
            self.comps
                .iter()
                .map(|c| c.compose(&inner.comps))
                .collect::<Result<Vec<_>>>()?
        };
        PolyMap::new(inner.source, comps)
    }

    pub fn eval(&self, p: &[Q]) -> Vec<Q> {
        self.comps.iter().map(|c| c.eval(p)).collect()
    }

    /// Symbolic Jacobian, `n x m`.
    pub fn jacobian(&self) -> Vec<Vec<Poly>> {
        self.comps
            .iter()
            .map(|c| (0..self.source).map(|j| c.derivative(j)).collect())
            .collect()
    }

    pub fn jacobian_at(&self, p: &[Q]) -> QMatrix {
        let mut m = QMatrix::zeros(self.target_dim(), self.source);
        for (i, c) in self.comps.iter().enumerate() {
            for j in 0..self.source {
                m.set(i, j, c.derivative(j).eval(p));
            }
        }
        m
    }
}

/// Pullback of a form on the target of `phi` to its source.
pub fn pullback(phi: &PolyMap, w: &KForm) -> Result<KForm> {
    if w.dim != phi.target_dim() {
        return Err(DiracError::dim(phi.target_dim(), w.dim, "pullback form dimension"));
    }
    let m = phi.source;
    let dphi: Vec<KForm> = phi
        .comps
        .iter()
        .map(|c| exterior_d(&KForm::function(c.clone())))
        .collect();
    let mut out = KForm::zero(m, w.degree);
    for (idx, c) in &w.coeffs {
        let coeff = if phi.target_dim() == 0 {
            Poly::constant(m, c.as_constant().unwrap_or_default())
        } else {
            c.compose(&phi.comps)?
        };
        let mut acc = KForm::function(coeff);
        for &i in idx {
            acc = wedge(&acc, &dphi[i])?;
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}
