//! Global Dirac structures on a coordinate box, presented by `n` polynomial
//! Courant sections.
//!
//! Closure under the Courant bracket is decided through the scalar tensor
//! `T_ijk = <[[e_i, e_j]], e_k>_+`: on a maximal isotropic span an element
//! `v` lies in `L` iff it pairs to zero with all of `L`, so closure becomes a
//! family of exact polynomial identities.

use num_traits::{Signed, Zero};

use crate::error::{DiracError, Result};
use crate::grid::Domain;
use crate::linalg::QMatrix;
use crate::lindirac::{self, GenVector, LinearDirac};
use crate::polycalc::{exterior_d, interior_product, lie_derivative, vf_bracket, Bivector, KForm, Poly, VectorField};
use crate::rational::{self, Q};

/// A section `(X, a)` of `TM (+) T*M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CourantSection {
    pub x: VectorField,
    pub alpha: KForm,
}

impl CourantSection {
    pub fn new(x: VectorField, alpha: KForm) -> Result<Self> {
        if alpha.degree() != 1 {
            return Err(DiracError::dim(1, alpha.degree(), "section covector degree"));
        }
        if x.dim() != alpha.dim() {
            return Err(DiracError::dim(x.dim(), alpha.dim(), "section blocks"));
        }
        Ok(CourantSection { x, alpha })
    }

    pub fn zero(n: usize) -> Self {
        CourantSection {
            x: VectorField::zero(n),
            alpha: KForm::zero(n, 1),
        }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.alpha.is_zero()
    }

    pub fn eval(&self, p: &[Q]) -> GenVector {
        GenVector {
            vec: self.x.eval(p),
            covec: self.alpha.eval_covector(p),
        }
    }
}

/// `a(Y)` for a 1-form and a vector field.
fn contract(alpha: &KForm, y: &VectorField) -> Poly {
    alpha
        .components()
        .iter()
        .zip(y.comps())
        .fold(Poly::zero(y.dim()), |acc, (a, v)| &acc + &(a * v))
}

fn half(p: Poly) -> Poly {
    p.scale(&rational::half())
}

/// Symbolic `<e1, e2>_+`.
pub fn pairing_plus(e1: &CourantSection, e2: &CourantSection) -> Poly {
    half(&contract(&e1.alpha, &e2.x) + &contract(&e2.alpha, &e1.x))
}

/// Symbolic `<e1, e2>_-`.
pub fn pairing_minus(e1: &CourantSection, e2: &CourantSection) -> Poly {
    half(&contract(&e1.alpha, &e2.x) - &contract(&e2.alpha, &e1.x))
}

/// `[[(X,a),(Y,b)]] = ([X,Y], L_X b - L_Y a + d<(X,a),(Y,b)>_-)`.
pub fn courant_bracket(e1: &CourantSection, e2: &CourantSection) -> Result<CourantSection> {
    if e1.dim() != e2.dim() {
        return Err(DiracError::dim(e1.dim(), e2.dim(), "Courant bracket"));
    }
    let x = vf_bracket(&e1.x, &e2.x)?;
    let alpha = lie_derivative(&e1.x, &e2.alpha)?
        .sub(&lie_derivative(&e2.x, &e1.alpha)?)?
        .add(&exterior_d(&KForm::function(pairing_minus(e1, e2))))?;
    CourantSection::new(x, alpha)
}

/// How a span was constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpanKind {
    #[serde(rename = "2form")]
    TwoForm,
    Bivector,
    Distribution,
    Span,
}

/// First pair `i <= j` of a raw family whose `<e_i, e_j>_+` is not identically zero.
pub fn isotropy_witness_of(sections: &[CourantSection]) -> Option<(usize, usize, Poly)> {
    for i in 0..sections.len() {
        for j in i..sections.len() {
            let g = pairing_plus(&sections[i], &sections[j]);
            if !g.is_zero() {
                return Some((i, j, g));
            }
        }
    }
    None
}

/// Almost Dirac structure presented by exactly `n` spanning sections.
/// Construction enforces symbolic isotropy; the pointwise rank may drop on a
/// degeneracy locus, which [`DiracSpan::evaluate`] reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracSpan {
    dim: usize,
    kind: SpanKind,
    sections: Vec<CourantSection>,
    domain: Domain,
}

/// `T_ijk = <[[e_i, e_j]], e_k>_+`, stored densely.
#[derive(Clone, Debug)]
pub struct IntegrabilityTensor {
    n: usize,
    entries: Vec<Poly>,
}

impl IntegrabilityTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.entries[(i * self.n + j) * self.n + k]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// First nonvanishing component, as `(i, j, k, T_ijk)`.
    pub fn first_nonzero(&self) -> Option<(usize, usize, usize, &Poly)> {
        let n = self.n;
        self.entries
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_zero())
            .map(|(f, p)| (f / (n * n), (f / n) % n, f % n, p))
    }
}

impl DiracSpan {
    /// Generic constructor: checks the section count and symbolic isotropy.
    pub fn new(kind: SpanKind, sections: Vec<CourantSection>, domain: Domain) -> Result<Self> {
        let dim = domain.dim();
        if sections.len() != dim {
            return Err(DiracError::dim(dim, sections.len(), "number of spanning sections"));
        }
        if let Some(s) = sections.iter().find(|s| s.dim() != dim) {
            return Err(DiracError::dim(dim, s.dim(), "section dimension"));
        }
        let span = DiracSpan {
            dim,
            kind,
            sections,
            domain,
        };
        if let Some((i, j, w)) = span.isotropy_witness() {
            return Err(DiracError::NotIsotropic {
                i,
                j,
                witness: w.to_string(),
            });
        }
        Ok(span)
    }

    /// Graph of a 2-form: sections `(d_i, i_{d_i} w)`.
    pub fn from_2form(w: &KForm, domain: Domain) -> Result<Self> {
        let n = domain.dim();
        if w.degree() != 2 || w.dim() != n {
            return Err(DiracError::Invalid(format!(
                "expected a 2-form on R^{n}, got degree {} on R^{}",
                w.degree(),
                w.dim()
            )));
        }
        let sections = (0..n)
            .map(|i| {
                let x = VectorField::coordinate(n, i);
                let a = interior_product(&x, w)?;
                CourantSection::new(x, a)
            })
            .collect::<Result<_>>()?;
        Self::new(SpanKind::TwoForm, sections, domain)
    }

    /// Graph of a bivector: sections `(pi(dx_i, .), dx_i)`.
    pub fn from_bivector(pi: &Bivector, domain: Domain) -> Result<Self> {
        let n = domain.dim();
        if pi.dim() != n {
            return Err(DiracError::dim(n, pi.dim(), "bivector dimension"));
        }
        let sections = (0..n)
            .map(|i| {
                let a = KForm::dx(n, i);
                CourantSection::new(pi.sharp(&a)?, a)
            })
            .collect::<Result<_>>()?;
        Self::new(SpanKind::Bivector, sections, domain)
    }

    /// `D (+) D^0`. Without a supplied annihilator, one is searched for with
    /// polynomial coefficients of degree `0, 1, ..., max_degree`.
    pub fn from_distribution(
        d: &[VectorField],
        annihilator: Option<&[KForm]>,
        domain: Domain,
        max_degree: u32,
    ) -> Result<Self> {
        let n = domain.dim();
        if let Some(v) = d.iter().find(|v| v.dim() != n) {
            return Err(DiracError::dim(n, v.dim(), "distribution generator"));
        }
        let k = d.len();
        let probes = generic_points(n);
        let d_rank = probes
            .iter()
            .map(|p| QMatrix::from_cols(n, &d.iter().map(|v| v.eval(p)).collect::<Vec<_>>()).rank())
            .max()
            .unwrap_or(0);
        if d_rank != k {
            return Err(DiracError::DistributionRank {
                expected: k,
                found: d_rank,
            });
        }
        let ann: Vec<KForm> = match annihilator {
            Some(a) => {
                for form in a {
                    if form.degree() != 1 || form.dim() != n {
                        return Err(DiracError::Invalid("annihilator entries must be 1-forms on R^n".into()));
                    }
                    if let Some(x) = d.iter().find(|x| !contract(form, x).is_zero()) {
                        return Err(DiracError::Invalid(format!(
                            "supplied annihilator does not kill a generator: a(X) = {}",
                            contract(form, x)
                        )));
                    }
                }
                a.to_vec()
            }
            None => find_annihilator(d, n, max_degree, &probes)?,
        };
        let mut sections: Vec<CourantSection> = d
            .iter()
            .map(|x| CourantSection::new(x.clone(), KForm::zero(n, 1)))
            .collect::<Result<_>>()?;
        sections.extend(
            ann.into_iter()
                .map(|a| CourantSection::new(VectorField::zero(n), a))
                .collect::<Result<Vec<_>>>()?,
        );
        let span = Self::new(SpanKind::Distribution, sections, domain)?;
        let generic_rank = probes.iter().map(|p| span.family_rank(p)).max().unwrap_or(0);
        if generic_rank != n {
            return Err(DiracError::NotMaximal { dim: n, got: generic_rank });
        }
        Ok(span)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> SpanKind {
        self.kind
    }

    pub fn sections(&self) -> &[CourantSection] {
        &self.sections
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// First pair `i <= j` whose `<e_i, e_j>_+` does not vanish identically.
    pub fn isotropy_witness(&self) -> Option<(usize, usize, Poly)> {
        isotropy_witness_of(&self.sections)
    }

    pub fn integrability_tensor(&self) -> Result<IntegrabilityTensor> {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let b = courant_bracket(&self.sections[i], &self.sections[j])?;
                for k in 0..n {
                    entries.push(pairing_plus(&b, &self.sections[k]));
                }
            }
        }
        Ok(IntegrabilityTensor { n, entries })
    }

    /// Convenience: all `T_ijk` vanish identically.
    pub fn is_involutive(&self) -> Result<bool> {
        Ok(self.integrability_tensor()?.is_zero())
    }

    pub fn evaluate_family(&self, p: &[Q]) -> Vec<GenVector> {
        self.sections.iter().map(|s| s.eval(p)).collect()
    }

    fn family_rank(&self, p: &[Q]) -> usize {
        let cols: Vec<Vec<Q>> = self.evaluate_family(p).iter().map(GenVector::column).collect();
        QMatrix::from_cols(2 * self.dim, &cols).rank()
    }

    fn check_point(&self, p: &[Q]) -> Result<()> {
        if p.len() != self.dim {
            return Err(DiracError::dim(self.dim, p.len(), "evaluation point"));
        }
        if !self.domain.contains(p) {
            return Err(DiracError::OutsideDomain { point: p.to_vec() });
        }
        Ok(())
    }

    /// The fiber `L_p`; fails with the rank-deficient family on the degeneracy locus.
    pub fn evaluate(&self, p: &[Q]) -> Result<LinearDirac> {
        self.check_point(p)?;
        self.evaluate_unchecked(p)
    }

    /// As [`evaluate`](Self::evaluate) without the domain-box check (for
    /// points produced by verified maps into the domain's coordinate space).
    pub fn evaluate_unchecked(&self, p: &[Q]) -> Result<LinearDirac> {
        let family = self.evaluate_family(p);
        let cols: Vec<Vec<Q>> = family.iter().map(GenVector::column).collect();
        let rank = QMatrix::from_cols(2 * self.dim, &cols).rank();
        if rank < self.dim {
            return Err(DiracError::degenerate(p, rank, self.dim, &family));
        }
        LinearDirac::new(self.dim, family)
    }

    /// `n x n` minors of the `2n x n` section matrix; their common zero set is
    /// the degeneracy locus.
    pub fn degeneracy_minors(&self) -> Vec<Poly> {
        let n = self.dim;
        let rows: Vec<Vec<Poly>> = (0..2 * n)
            .map(|r| {
                self.sections
                    .iter()
                    .map(|s| {
                        if r < n {
                            s.x.comp(r).clone()
                        } else {
                            s.alpha.coeff(&[r - n])
                        }
                    })
                    .collect()
            })
            .collect();
        let mut out: Vec<Poly> = Vec::new();
        for subset in combinations(2 * n, n) {
            let m: Vec<Vec<Poly>> = subset.iter().map(|&r| rows[r].clone()).collect();
            let d = poly_det(&m, n);
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
        out
    }

    /// Leafwise presymplectic form `w(X, Y) = <(X,a),(Y,b)>_-` at `p`.
    pub fn leaf_form(&self, p: &[Q], x: &[Q], y: &[Q]) -> Result<Q> {
        let fiber = self.evaluate(p)?;
        let n = self.dim;
        if x.len() != n || y.len() != n {
            return Err(DiracError::dim(n, x.len().min(y.len()), "leaf form arguments"));
        }
        let anchor = fiber.anchor_matrix();
        let covs = QMatrix::from_cols(n, &fiber.basis().iter().map(|b| b.covec.clone()).collect::<Vec<_>>());
        let lift = |v: &[Q], which: &'static str| -> Result<GenVector> {
            let c = anchor.solve(v).ok_or(DiracError::NotInAnchorImage {
                which,
                point: p.to_vec(),
            })?;
            Ok(GenVector {
                vec: v.to_vec(),
                covec: covs.mul_vec(&c),
            })
        };
        let lx = lift(x, "X")?;
        let ly = lift(y, "Y")?;
        let value = lindirac::pairing_minus(&lx, &ly)?;
        // Shift the first lift by every kernel element (0, g) of the anchor.
        for c0 in anchor.nullspace() {
            let g = covs.mul_vec(&c0);
            let shifted = GenVector {
                vec: lx.vec.clone(),
                covec: lx.covec.iter().zip(&g).map(|(a, b)| a + b).collect(),
            };
            if lindirac::pairing_minus(&shifted, &ly)? != value {
                return Err(DiracError::Invalid("leaf form depends on the chosen lift".into()));
            }
        }
        Ok(value)
    }

    /// Gauge transform by a closed 2-form: `(X_i, a_i + i_{X_i} B)`.
    pub fn b_transform(&self, b: &KForm) -> Result<DiracSpan> {
        if b.degree() != 2 || b.dim() != self.dim {
            return Err(DiracError::Invalid("B-field must be a 2-form on the same space".into()));
        }
        let db = exterior_d(b);
        if let Some((_, c)) = db.terms().next() {
            return Err(DiracError::NotClosed { witness: c.to_string() });
        }
        let sections = self
            .sections
            .iter()
            .map(|s| CourantSection::new(s.x.clone(), s.alpha.add(&interior_product(&s.x, b)?)?))
            .collect::<Result<_>>()?;
        Self::new(self.kind, sections, self.domain.clone())
    }
}

/// A few fixed rational points with distinct odd-prime denominators, used
/// to decide generic ranks.
fn generic_points(n: usize) -> Vec<Vec<Q>> {
    const PRIMES: [i64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];
    (0..3)
        .map(|s| {
            (0..n)
                .map(|i| rational::qf((2 * i + 3 * s + 1) as i64, PRIMES[(i + 2 * s) % PRIMES.len()]))
                .collect()
        })
        .collect()
}

fn monomials_up_to(n: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, deg, &mut Vec::new(), &mut out);
    out.sort_by_key(|e| e.iter().sum::<u32>());
    out
}

fn find_annihilator(d: &[VectorField], n: usize, max_degree: u32, probes: &[Vec<Q>]) -> Result<Vec<KForm>> {
    let need = n - d.len();
    if need == 0 {
        return Ok(Vec::new());
    }
    for deg in 0..=max_degree {
        let monos = monomials_up_to(n, deg);
        // Unknown u = (component j, monomial m); column j * |monos| + m.
        let unknowns: Vec<(usize, &Vec<u32>)> = (0..n).flat_map(|j| monos.iter().map(move |m| (j, m))).collect();
        let mut rows: std::collections::BTreeMap<(usize, Vec<u32>), Vec<Q>> = Default::default();
        for (col, (j, m)) in unknowns.iter().enumerate() {
            let basis = Poly::monomial(n, (*m).clone(), rational::one());
            for (vi, x) in d.iter().enumerate() {
                for (e, c) in (&basis * x.comp(*j)).terms() {
                    let row = rows
                        .entry((vi, e.clone()))
                        .or_insert_with(|| vec![Q::zero(); unknowns.len()]);
                    row[col] += c;
                }
            }
        }
        let system = QMatrix::from_rows(rows.into_values().collect());
        let candidates: Vec<KForm> = if system.rows() == 0 {
            Vec::new()
        } else {
            system
                .nullspace()
                .into_iter()
                .map(|v| {
                    let sign = v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
                    let comps: Vec<Poly> = (0..n)
                        .map(|j| {
                            let p = Poly::from_terms(
                                n,
                                monos.iter().enumerate().map(|(mi, m)| (m.clone(), v[j * monos.len() + mi].clone())),
                            )
                            .expect("monomials have the ambient arity");
                            if sign {
                                -p
                            } else {
                                p
                            }
                        })
                        .collect();
                    KForm::one_form(&comps).expect("components have the ambient arity")
                })
                .collect()
        };
        let mut chosen: Vec<KForm> = Vec::new();
        let rank_of = |forms: &[KForm]| {
            probes
                .iter()
                .map(|p| QMatrix::from_cols(n, &forms.iter().map(|f| f.eval_covector(p)).collect::<Vec<_>>()).rank())
                .max()
                .unwrap_or(0)
        };
        for c in candidates {
            let mut trial = chosen.clone();
            trial.push(c);
            if rank_of(&trial) == trial.len() {
                chosen = trial;
                if chosen.len() == need {
                    return Ok(chosen);
                }
            }
        }
    }
    Err(DiracError::NoAnnihilator { max_degree })
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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

/// Determinant of a square polynomial matrix by cofactor expansion.
pub(crate) fn poly_det(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let k = m.len();
    match k {
        0 => Poly::one(nvars),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly::zero(nvars);
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let t = &m[0][c] * &poly_det(&minor, nvars);
                acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycalc::{default_names, parse_poly};
    use crate::rational::q;

    fn p(n: usize, s: &str) -> Poly {
        parse_poly(s, &default_names(n)).unwrap()
    }
    fn two_form(n: usize, terms: &[(usize, usize, &str)]) -> KForm {
        KForm::from_terms(n, 2, terms.iter().map(|&(i, j, s)| (vec![i, j], p(n, s)))).unwrap()
    }
    fn one_form(n: usize, comps: &[&str]) -> KForm {
        KForm::one_form(&comps.iter().map(|s| p(n, s)).collect::<Vec<_>>()).unwrap()
    }
    fn vf(n: usize, comps: &[&str]) -> VectorField {
        VectorField::new(comps.iter().map(|s| p(n, s)).collect()).unwrap()
    }
    fn sec(n: usize, x: &[&str], a: &[&str]) -> CourantSection {
        CourantSection::new(vf(n, x), one_form(n, a)).unwrap()
    }
    fn dom(n: usize) -> Domain {
        Domain::cube(n, -1, 1)
    }
    fn fiber(n: usize, gens: &[(&[i64], &[i64])]) -> LinearDirac {
        LinearDirac::new(n, gens.iter().map(|(v, c)| GenVector::from_i64(v, c)).collect()).unwrap()
    }

    #[test]
    fn from_2form_sections() {
        let l = DiracSpan::from_2form(&two_form(2, &[(0, 1, "x")]), dom(2)).unwrap();
        assert_eq!(l.sections()[0], sec(2, &["1", "0"], &["0", "x"]));
        assert_eq!(l.sections()[1], sec(2, &["0", "1"], &["-x", "0"]));
    }

    #[test]
    fn from_bivector_full_rank() {
        let pi = Bivector::from_terms(2, [((0, 1), p(2, "1"))]).unwrap();
        let l = DiracSpan::from_bivector(&pi, dom(2)).unwrap();
        assert!(l.degeneracy_minors().iter().any(|m| m.as_constant().is_some_and(|c| !c.is_zero())));
        assert!(l.evaluate(&[q(0), q(0)]).unwrap().is_maximal_isotropic());
    }

    #[test]
    fn from_distribution_finds_annihilator() {
        let l = DiracSpan::from_distribution(&[vf(2, &["x", "1"])], None, dom(2), 3).unwrap();
        assert_eq!(l.sections()[0], sec(2, &["x", "1"], &["0", "0"]));
        assert_eq!(l.sections()[1], sec(2, &["0", "0"], &["1", "-x"]));
        let bad = DiracSpan::from_distribution(&[vf(2, &["x", "1"])], Some(&[one_form(2, &["1", "0"])]), dom(2), 3);
        assert!(bad.is_err());
        // x^2 d_x + d_y needs a degree-2 annihilator
        assert!(DiracSpan::from_distribution(&[vf(2, &["x^2", "1"])], None, dom(2), 1).is_err());
        assert!(DiracSpan::from_distribution(&[vf(2, &["x^2", "1"])], None, dom(2), 2).is_ok());
    }

    #[test]
    fn rejects_non_isotropic_span() {
        let s = vec![sec(2, &["1", "0"], &["1", "0"]), sec(2, &["0", "1"], &["0", "0"])];
        assert!(matches!(
            DiracSpan::new(SpanKind::Span, s, dom(2)),
            Err(DiracError::NotIsotropic { i: 0, j: 0, .. })
        ));
    }

    #[test]
    fn courant_bracket_examples() {
        let e1 = sec(3, &["1", "0", "0"], &["0", "z", "0"]);
        let e2 = sec(3, &["0", "1", "0"], &["-z", "0", "0"]);
        assert_eq!(courant_bracket(&e1, &e2).unwrap(), sec(3, &["0", "0", "0"], &["0", "0", "1"]));
        let c1 = sec(2, &["1", "0"], &["0", "1"]);
        let c2 = sec(2, &["0", "1"], &["-1", "0"]);
        assert!(courant_bracket(&c1, &c2).unwrap().is_zero());
        assert!(courant_bracket(&e1, &e1).unwrap().is_zero());
        // antisymmetry
        let a = sec(2, &["x*y", "1"], &["y", "x^2"]);
        let b = sec(2, &["1", "x"], &["x", "0"]);
        let ab = courant_bracket(&a, &b).unwrap();
        let ba = courant_bracket(&b, &a).unwrap();
        assert_eq!(ab.x, ba.x.scale(&Poly::int(2, -1)));
        assert_eq!(ab.alpha, ba.alpha.neg());
    }

    #[test]
    fn integrability_examples() {
        let l = DiracSpan::from_2form(&two_form(2, &[(0, 1, "x")]), dom(2)).unwrap();
        assert!(l.integrability_tensor().unwrap().is_zero());
        let l = DiracSpan::from_2form(&two_form(3, &[(0, 1, "z")]), dom(3)).unwrap();
        let t = l.integrability_tensor().unwrap();
        assert_eq!(t.get(0, 1, 2), &Poly::constant(3, rational::half()));
        assert!(t.first_nonzero().unwrap().3.as_constant().unwrap().abs() == rational::half());
        let l = DiracSpan::from_distribution(&[vf(2, &["1", "0"])], None, dom(2), 2).unwrap();
        assert!(l.is_involutive().unwrap());
        // non-integrable plane field d_x, d_y + x d_z in R^3
        let l = DiracSpan::from_distribution(&[vf(3, &["1", "0", "0"]), vf(3, &["0", "1", "x"])], None, dom(3), 2).unwrap();
        assert!(!l.is_involutive().unwrap());
    }

    #[test]
    fn evaluate_examples() {
        let l = DiracSpan::from_2form(&two_form(2, &[(0, 1, "x")]), dom(2)).unwrap();
        let f = l.evaluate(&[q(1), q(0)]).unwrap();
        assert!(lindirac::subspace_equal(&f, &fiber(2, &[(&[1, 0], &[0, 1]), (&[0, 1], &[-1, 0])])));
        let f = l.evaluate(&[q(0), q(0)]).unwrap();
        assert!(lindirac::subspace_equal(&f, &LinearDirac::tangent_block(2)));
        assert!(matches!(l.evaluate(&[q(5), q(0)]), Err(DiracError::OutsideDomain { .. })));

        let d = DiracSpan::from_distribution(&[vf(2, &["x", "1"])], None, dom(2), 2).unwrap();
        let f = d.evaluate(&[q(0), q(0)]).unwrap();
        assert!(lindirac::subspace_equal(&f, &fiber(2, &[(&[0, 1], &[0, 0]), (&[0, 0], &[1, 0])])));
    }

    #[test]
    fn degenerate_fiber_reported() {
        // sections (d_x, 0), (x d_y, 0)... made isotropic: (d_x,0), (x d_y, 0)
        let s = vec![sec(2, &["1", "0"], &["0", "0"]), sec(2, &["0", "x"], &["0", "0"])];
        let l = DiracSpan::new(SpanKind::Span, s, dom(2)).unwrap();
        match l.evaluate(&[q(0), q(1)]) {
            Err(DiracError::DegenerateFiber { rank: 1, basis, .. }) => assert_eq!(basis.len(), 2),
            other => panic!("expected degenerate fiber, got {other:?}"),
        }
        assert_eq!(l.degeneracy_minors(), vec![p(2, "x")]);
        assert!(l.evaluate(&[q(1), q(1)]).is_ok());
    }

    #[test]
    fn leaf_form_examples() {
        let l = DiracSpan::from_2form(&two_form(2, &[(0, 1, "1")]), dom(2)).unwrap();
        let (ex, ey) = (vec![q(1), q(0)], vec![q(0), q(1)]);
        assert_eq!(l.leaf_form(&[q(0), q(0)], &ex, &ey).unwrap(), q(1));
        assert_eq!(l.leaf_form(&[q(1), q(0)], &ex, &ex).unwrap(), q(0));
        let d = DiracSpan::from_distribution(&[vf(2, &["1", "0"])], None, dom(2), 2).unwrap();
        assert_eq!(d.leaf_form(&[q(0), q(0)], &ex, &ex).unwrap(), q(0));
        assert!(matches!(
            d.leaf_form(&[q(0), q(0)], &ex, &ey),
            Err(DiracError::NotInAnchorImage { which: "Y", .. })
        ));
    }

    #[test]
    fn b_transform_examples() {
        let d = DiracSpan::from_distribution(&[vf(2, &["1", "0"])], None, dom(2), 2).unwrap();
        let b = two_form(2, &[(0, 1, "1")]);
        let t = d.b_transform(&b).unwrap();
        assert_eq!(t.sections()[0], sec(2, &["1", "0"], &["0", "1"]));
        assert!(t.is_involutive().unwrap());
        assert_eq!(d.b_transform(&KForm::zero(2, 2)).unwrap(), d);

        // leaves of d_x, d_y in R^3 acquire B restricted to them
        let d3 = DiracSpan::from_distribution(&[vf(3, &["1", "0", "0"]), vf(3, &["0", "1", "0"])], None, dom(3), 1).unwrap();
        let t3 = d3.b_transform(&two_form(3, &[(0, 1, "1")])).unwrap();
        let o = vec![q(0); 3];
        assert_eq!(t3.leaf_form(&o, &[q(1), q(0), q(0)], &[q(0), q(1), q(0)]).unwrap(), q(1));

        let w = two_form(2, &[(0, 1, "x")]);
        let lw = DiracSpan::from_2form(&w, dom(2)).unwrap().b_transform(&b).unwrap();
        let direct = DiracSpan::from_2form(&w.add(&b).unwrap(), dom(2)).unwrap();
        for pt in [[q(0), q(0)], [q(1), q(-1)], [rational::qf(-1, 2), q(1)]] {
            assert!(lindirac::subspace_equal(&lw.evaluate(&pt).unwrap(), &direct.evaluate(&pt).unwrap()));
        }
        let not_closed = two_form(3, &[(0, 1, "z")]);
        assert!(matches!(d3.b_transform(&not_closed), Err(DiracError::NotClosed { .. })));
    }
}
