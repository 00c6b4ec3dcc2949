//! Pointwise Dirac linear algebra on `Q^n (+) (Q^n)*`.
//!
//! A [`LinearDirac`] is a subspace given by a full-rank list of generalized
//! tangent vectors. Everything is exact except [`grassmann_gap`], which is a
//! floating-point metric used only by the smoothness heuristic.

use nalgebra::DMatrix;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{DiracError, Result};
use crate::linalg::QMatrix;
use crate::rational::{self, Q};

/// An element `(X, a)` of `T_p (+) T*_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenVector {
    pub vec: Vec<Q>,
    pub covec: Vec<Q>,
}

impl GenVector {
    pub fn new(vec: Vec<Q>, covec: Vec<Q>) -> Result<Self> {
        if vec.len() != covec.len() {
            return Err(DiracError::dim(vec.len(), covec.len(), "covector block"));
        }
        Ok(GenVector { vec, covec })
    }

    pub fn zero(n: usize) -> Self {
        GenVector {
            vec: vec![Q::zero(); n],
            covec: vec![Q::zero(); n],
        }
    }

    /// `(d_i, 0)`.
    pub fn tangent(n: usize, i: usize) -> Self {
        let mut g = Self::zero(n);
        g.vec[i] = rational::one();
        g
    }

    /// `(0, dx_i)`.
    pub fn cotangent(n: usize, i: usize) -> Self {
        let mut g = Self::zero(n);
        g.covec[i] = rational::one();
        g
    }

    pub fn from_i64(vec: &[i64], covec: &[i64]) -> Self {
        GenVector::new(
            vec.iter().map(|&v| rational::q(v)).collect(),
            covec.iter().map(|&v| rational::q(v)).collect(),
        )
        .expect("block lengths must agree")
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    /// Stacked column `(X; a)` of length `2n`.
    pub fn column(&self) -> Vec<Q> {
        self.vec.iter().chain(&self.covec).cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.vec.iter().chain(&self.covec).all(Zero::is_zero)
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn check_pair(u: &GenVector, v: &GenVector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(DiracError::dim(u.dim(), v.dim(), "pairing"));
    }
    Ok(())
}

/// `<(X,a),(Y,b)>_+ = (a(Y) + b(X)) / 2`.
pub fn pairing_plus(u: &GenVector, v: &GenVector) -> Result<Q> {
    check_pair(u, v)?;
    Ok((dot(&u.covec, &v.vec) + dot(&v.covec, &u.vec)) * rational::half())
}

/// `<(X,a),(Y,b)>_- = (a(Y) - b(X)) / 2`.
pub fn pairing_minus(u: &GenVector, v: &GenVector) -> Result<Q> {
    check_pair(u, v)?;
    Ok((dot(&u.covec, &v.vec) - dot(&v.covec, &u.vec)) * rational::half())
}

/// Subspace of `Q^n (+) (Q^n)*` with a full-rank basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearDirac {
    dim: usize,
    basis: Vec<GenVector>,
}

fn stacked(dim: usize, basis: &[GenVector]) -> QMatrix {
    QMatrix::from_cols(2 * dim, &basis.iter().map(GenVector::column).collect::<Vec<_>>())
}

impl LinearDirac {
    /// Wraps a basis; rank-deficient families are rejected.
    pub fn new(dim: usize, basis: Vec<GenVector>) -> Result<Self> {
        if let Some(b) = basis.iter().find(|b| b.dim() != dim) {
            return Err(DiracError::dim(dim, b.dim(), "basis vector"));
        }
        let rank = stacked(dim, &basis).rank();
        if rank != basis.len() {
            return Err(DiracError::RankDeficient {
                found: basis.len(),
                rank,
            });
        }
        Ok(LinearDirac { dim, basis })
    }

    /// Span of an arbitrary family, keeping an independent subset.
    pub fn span_of(dim: usize, family: Vec<GenVector>) -> Self {
        let keep = stacked(dim, &family).independent_columns();
        LinearDirac {
            dim,
            basis: keep.into_iter().map(|i| family[i].clone()).collect(),
        }
    }

    /// `T_p` as `span{(d_i, 0)}`.
    pub fn tangent_block(n: usize) -> Self {
        LinearDirac {
            dim: n,
            basis: (0..n).map(|i| GenVector::tangent(n, i)).collect(),
        }
    }

    /// `T*_p` as `span{(0, dx_i)}`.
    pub fn cotangent_block(n: usize) -> Self {
        LinearDirac {
            dim: n,
            basis: (0..n).map(|i| GenVector::cotangent(n, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GenVector] {
        &self.basis
    }

    /// `2n x r` matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> QMatrix {
        stacked(self.dim, &self.basis)
    }

    /// Gram matrix of `<,>_+` on the basis.
    pub fn gram_plus(&self) -> QMatrix {
        let r = self.rank();
        let mut g = QMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                g.set(i, j, pairing_plus(&self.basis[i], &self.basis[j]).unwrap());
            }
        }
        g
    }

    pub fn is_maximal_isotropic(&self) -> bool {
        self.rank() == self.dim && self.gram_plus().is_zero()
    }

    pub fn contains(&self, v: &GenVector) -> bool {
        v.dim() == self.dim && self.matrix().solve(&v.column()).is_some()
    }

    /// The anchor image `{X : (X, a) in L}`, as a matrix of tangent parts.
    pub fn anchor_matrix(&self) -> QMatrix {
        QMatrix::from_cols(self.dim, &self.basis.iter().map(|b| b.vec.clone()).collect::<Vec<_>>())
    }

    pub fn to_strings(&self) -> Vec<[Vec<String>; 2]> {
        self.basis
            .iter()
            .map(|b| {
                [
                    b.vec.iter().map(rational::fmt_q).collect(),
                    b.covec.iter().map(rational::fmt_q).collect(),
                ]
            })
            .collect()
    }
}

impl Serialize for GenVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GenVector", 2)?;
        st.serialize_field("vec", &self.vec.iter().map(rational::fmt_q).collect::<Vec<_>>())?;
        st.serialize_field("covec", &self.covec.iter().map(rational::fmt_q).collect::<Vec<_>>())?;
        st.end()
    }
}

impl Serialize for LinearDirac {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LinearDirac", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("basis", &self.basis)?;
        st.end()
    }
}

/// Maximal-isotropy test on a raw family; a rank-deficient family is an error, not `false`.
pub fn is_maximal_isotropic(dim: usize, basis: &[GenVector]) -> Result<bool> {
    Ok(LinearDirac::new(dim, basis.to_vec())?.is_maximal_isotropic())
}

fn check_square_antisymmetric(m: &QMatrix, what: &str) -> Result<()> {
    if m.rows() != m.cols() {
        return Err(DiracError::Invalid(format!("{what} must be square")));
    }
    if !m.add(&m.transpose()).is_zero() {
        return Err(DiracError::Invalid(format!("{what} must be antisymmetric")));
    }
    Ok(())
}

/// Graph `{(X, i_X w)}` of a 2-form given by `W_ij = w(d_i, d_j)`.
pub fn graph_of_2form(w: &QMatrix) -> Result<LinearDirac> {
    check_square_antisymmetric(w, "2-form matrix")?;
    let n = w.rows();
    let basis = (0..n)
        .map(|i| {
            let mut g = GenVector::tangent(n, i);
            g.covec = w.row(i);
            g
        })
        .collect();
    LinearDirac::new(n, basis)
}

/// Graph `{(pi(a, .), a)}` of a bivector given by `P_ij = pi(dx_i, dx_j)`.
pub fn graph_of_bivector(p: &QMatrix) -> Result<LinearDirac> {
    check_square_antisymmetric(p, "bivector matrix")?;
    let n = p.rows();
    let basis = (0..n)
        .map(|i| {
            let mut g = GenVector::cotangent(n, i);
            g.vec = p.row(i);
            g
        })
        .collect();
    LinearDirac::new(n, basis)
}

/// `D (+) D^0` for a distribution basis; the annihilator is solved for when absent.
pub fn graph_of_distribution(dim: usize, d_basis: &[Vec<Q>], annihilator: Option<&[Vec<Q>]>) -> Result<LinearDirac> {
    let k = d_basis.len();
    let dmat = QMatrix::from_cols(dim, d_basis);
    let rank = dmat.rank();
    if rank != k {
        return Err(DiracError::RankDeficient { found: k, rank });
    }
    let ann: Vec<Vec<Q>> = match annihilator {
        Some(a) => {
            for c in a {
                if c.len() != dim {
                    return Err(DiracError::dim(dim, c.len(), "annihilator covector"));
                }
                if d_basis.iter().any(|x| !dot(c, x).is_zero()) {
                    return Err(DiracError::Invalid("supplied covector does not annihilate D".into()));
                }
            }
            a.to_vec()
        }
        None => dmat.transpose().nullspace(),
    };
    let mut basis: Vec<GenVector> = d_basis
        .iter()
        .map(|x| GenVector::new(x.clone(), vec![Q::zero(); dim]))
        .collect::<Result<_>>()?;
    basis.extend(ann.into_iter().map(|a| GenVector {
        vec: vec![Q::zero(); dim],
        covec: a,
    }));
    let l = LinearDirac::new(dim, basis)?;
    if l.rank() != dim {
        return Err(DiracError::NotMaximal { dim, got: l.rank() });
    }
    Ok(l)
}

/// Forward image along `T: Q^n -> Q^m` (an `m x n` matrix):
/// `{(T X, b) : (X, T^t b) in L}`.
///
/// Unknowns are the basis coefficients `c` of an element of `L` and the
/// target covector `b`; the constraint `sum_k c_k a_k = T^t b` is an
/// `n x (r + m)` homogeneous system whose kernel is mapped to `(T X(c), b)`.
pub fn pushforward(l: &LinearDirac, t: &QMatrix) -> Result<LinearDirac> {
    let n = l.dim;
    if t.cols() != n {
        return Err(DiracError::dim(n, t.cols(), "pushforward map source"));
    }
    let m = t.rows();
    let r = l.rank();
    let alphas = QMatrix::from_cols(n, &l.basis.iter().map(|b| b.covec.clone()).collect::<Vec<_>>());
    let system = alphas.hstack(&t.transpose().scale(&rational::q(-1)));
    let xs = l.anchor_matrix();
    let family = system
        .nullspace()
        .into_iter()
        .map(|sol| {
            let (c, beta) = sol.split_at(r);
            GenVector {
                vec: t.mul_vec(&xs.mul_vec(c)),
                covec: beta.to_vec(),
            }
        })
        .collect();
    let out = LinearDirac::span_of(m, family);
    if l.is_maximal_isotropic() && !out.is_maximal_isotropic() {
        return Err(DiracError::NotMaximal { dim: m, got: out.rank() });
    }
    Ok(out)
}

/// Backward image along `T: Q^m -> Q^n` (an `n x m` matrix):
/// `{(X, T^t b) : (T X, b) in L}`.
pub fn pullback(l: &LinearDirac, t: &QMatrix) -> Result<LinearDirac> {
    let n = l.dim;
    if t.rows() != n {
        return Err(DiracError::dim(n, t.rows(), "pullback map target"));
    }
    let m = t.cols();
    let xs = l.anchor_matrix();
    // T X - sum_k c_k X_k = 0 in unknowns (X, c).
    let system = t.hstack(&xs.scale(&rational::q(-1)));
    let alphas = QMatrix::from_cols(n, &l.basis.iter().map(|b| b.covec.clone()).collect::<Vec<_>>());
    let tt = t.transpose();
    let family = system
        .nullspace()
        .into_iter()
        .map(|sol| {
            let (x, c) = sol.split_at(m);
            GenVector {
                vec: x.to_vec(),
                covec: tt.mul_vec(&alphas.mul_vec(c)),
            }
        })
        .collect();
    let out = LinearDirac::span_of(m, family);
    if l.is_maximal_isotropic() && !out.is_maximal_isotropic() {
        return Err(DiracError::NotMaximal { dim: m, got: out.rank() });
    }
    Ok(out)
}

/// Gauge transform `{(X, a + i_X B)}`.
pub fn b_transform(l: &LinearDirac, b: &QMatrix) -> Result<LinearDirac> {
    check_square_antisymmetric(b, "B-field matrix")?;
    if b.rows() != l.dim {
        return Err(DiracError::dim(l.dim, b.rows(), "B-field"));
    }
    let bt = b.transpose();
    let basis = l
        .basis
        .iter()
        .map(|g| {
            let shift = bt.mul_vec(&g.vec);
            GenVector {
                vec: g.vec.clone(),
                covec: g.covec.iter().zip(&shift).map(|(a, s)| a + s).collect(),
            }
        })
        .collect();
    LinearDirac::new(l.dim, basis)
}

/// Exact equality of subspaces.
pub fn subspace_equal(a: &LinearDirac, b: &LinearDirac) -> bool {
    if a.dim != b.dim || a.rank() != b.rank() {
        return false;
    }
    a.matrix().hstack(&b.matrix()).rank() == a.rank()
}

fn projector(m: DMatrix<f64>) -> DMatrix<f64> {
    let rows = m.nrows();
    if m.ncols() == 0 {
        return DMatrix::zeros(rows, rows);
    }
    let r = m.ncols();
    let q = m.qr().q();
    let q = q.columns(0, r);
    q * q.transpose()
}

/// Operator-norm distance between the orthogonal projectors onto the two
/// subspaces of `R^{2n}`; `0` iff equal, always in `[0, 1]`.
pub fn grassmann_gap(a: &LinearDirac, b: &LinearDirac) -> Result<f64> {
    if a.dim != b.dim {
        return Err(DiracError::dim(a.dim, b.dim, "grassmann gap"));
    }
    if a.dim == 0 {
        return Ok(0.0);
    }
    let d = projector(a.matrix().to_f64()) - projector(b.matrix().to_f64());
    let eig = d.symmetric_eigen();
    let gap = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(gap.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn gv(v: &[i64], c: &[i64]) -> GenVector {
        GenVector::from_i64(v, c)
    }

    fn span(n: usize, gens: Vec<GenVector>) -> LinearDirac {
        LinearDirac::new(n, gens).unwrap()
    }

    #[test]
    fn pairing_plus_examples() {
        assert_eq!(pairing_plus(&gv(&[1, 0], &[0, 1]), &gv(&[0, 1], &[1, 0])).unwrap(), q(1));
        assert_eq!(pairing_plus(&gv(&[1, 0], &[0, 0]), &gv(&[0, 1], &[0, 0])).unwrap(), q(0));
        assert_eq!(pairing_plus(&gv(&[1, 0], &[1, 0]), &gv(&[1, 0], &[1, 0])).unwrap(), q(1));
        assert!(pairing_plus(&gv(&[1], &[0]), &gv(&[1, 0], &[0, 0])).is_err());
    }

    #[test]
    fn pairing_minus_examples() {
        let u = gv(&[1, 0], &[0, 1]);
        assert_eq!(pairing_minus(&u, &gv(&[0, 1], &[-1, 0])).unwrap(), q(1));
        assert_eq!(pairing_minus(&u, &u).unwrap(), q(0));
        assert_eq!(pairing_minus(&gv(&[1], &[0]), &gv(&[0], &[1])).unwrap(), qf(-1, 2));
    }

    #[test]
    fn maximal_isotropy_examples() {
        let g = [gv(&[1, 0], &[0, 1]), gv(&[0, 1], &[-1, 0])];
        assert!(is_maximal_isotropic(2, &g).unwrap());
        assert!(!is_maximal_isotropic(1, &[gv(&[1], &[1])]).unwrap());
        assert!(LinearDirac::tangent_block(2).is_maximal_isotropic());
        let deficient = [gv(&[1, 0], &[0, 0]), gv(&[2, 0], &[0, 0])];
        assert!(matches!(
            is_maximal_isotropic(2, &deficient),
            Err(DiracError::RankDeficient { found: 2, rank: 1 })
        ));
    }

    #[test]
    fn graph_of_2form_examples() {
        let w = QMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let l = graph_of_2form(&w).unwrap();
        assert!(l.is_maximal_isotropic());
        assert!(subspace_equal(&l, &span(2, vec![gv(&[1, 0], &[0, 1]), gv(&[0, 1], &[-1, 0])])));
        assert!(subspace_equal(&graph_of_2form(&QMatrix::zeros(2, 2)).unwrap(), &LinearDirac::tangent_block(2)));
        assert!(graph_of_2form(&QMatrix::from_i64(&[&[0, 1], &[1, 0]])).is_err());
    }

    #[test]
    fn graph_of_bivector_and_distribution_examples() {
        let p = QMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let l = graph_of_bivector(&p).unwrap();
        assert!(l.is_maximal_isotropic());
        // (pi(dx, .), dx) = (d_y, dx), (pi(dy, .), dy) = (-d_x, dy)
        assert!(subspace_equal(&l, &span(2, vec![gv(&[0, 1], &[1, 0]), gv(&[-1, 0], &[0, 1])])));

        let d = graph_of_distribution(2, &[vec![q(1), q(0)]], None).unwrap();
        assert!(subspace_equal(&d, &span(2, vec![gv(&[1, 0], &[0, 0]), gv(&[0, 0], &[0, 1])])));
        // x d_x + d_y at x = 1
        let d = graph_of_distribution(2, &[vec![q(1), q(1)]], None).unwrap();
        assert!(d.is_maximal_isotropic());
        assert!(subspace_equal(&d, &span(2, vec![gv(&[1, 1], &[0, 0]), gv(&[0, 0], &[1, -1])])));
        assert!(graph_of_distribution(2, &[vec![q(1), q(1)]], Some(&[vec![q(1), q(1)]])).is_err());
    }

    #[test]
    fn pushforward_examples() {
        let proj = QMatrix::from_i64(&[&[1, 0]]);
        // graph of x dx^dy at x = 1 and at x = 0
        let at1 = graph_of_2form(&QMatrix::from_i64(&[&[0, 1], &[-1, 0]])).unwrap();
        let at0 = graph_of_2form(&QMatrix::zeros(2, 2)).unwrap();
        assert!(subspace_equal(&pushforward(&at1, &proj).unwrap(), &span(1, vec![gv(&[0], &[1])])));
        assert!(subspace_equal(&pushforward(&at0, &proj).unwrap(), &span(1, vec![gv(&[1], &[0])])));
        assert!(subspace_equal(&pushforward(&at1, &QMatrix::identity(2)).unwrap(), &at1));
        assert!(pushforward(&at1, &QMatrix::identity(3)).is_err());
    }

    #[test]
    fn pullback_examples() {
        let incl = QMatrix::from_i64(&[&[0], &[1]]);
        let l = graph_of_2form(&QMatrix::from_i64(&[&[0, 1], &[-1, 0]])).unwrap();
        assert!(subspace_equal(&pullback(&l, &incl).unwrap(), &span(1, vec![gv(&[1], &[0])])));
        assert!(subspace_equal(&pullback(&l, &QMatrix::identity(2)).unwrap(), &l));
        let t = QMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 1]]);
        assert!(subspace_equal(
            &pullback(&LinearDirac::tangent_block(2), &t).unwrap(),
            &LinearDirac::tangent_block(3)
        ));
    }

    #[test]
    fn b_transform_examples() {
        let b = QMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let tb = LinearDirac::tangent_block(2);
        assert!(subspace_equal(&b_transform(&tb, &b).unwrap(), &graph_of_2form(&b).unwrap()));
        assert!(subspace_equal(&b_transform(&tb, &QMatrix::zeros(2, 2)).unwrap(), &tb));
        let w = QMatrix::from_i64(&[&[0, 3], &[-3, 0]]);
        assert!(subspace_equal(
            &b_transform(&graph_of_2form(&w).unwrap(), &b).unwrap(),
            &graph_of_2form(&w.add(&b)).unwrap()
        ));
    }

    #[test]
    fn gap_examples() {
        let l = graph_of_2form(&QMatrix::from_i64(&[&[0, 1], &[-1, 0]])).unwrap();
        assert!(grassmann_gap(&l, &l).unwrap() < 1e-12);
        let a = span(1, vec![gv(&[1], &[0])]);
        let b = span(1, vec![gv(&[0], &[1])]);
        assert!(!subspace_equal(&a, &b));
        assert!((grassmann_gap(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        assert!(subspace_equal(&l, &b_transform(&l, &QMatrix::zeros(2, 2)).unwrap()));
    }
}
