//! Abelian group actions by polynomial generators: the `j`-map, the
//! Dirac-action and moment-map conditions, and regularity.
//!
//! Conventions: `i_X (a ^ b) = a(X) b - b(X) a`, so for `w = dx ^ dy` and
//! `xi = d_y` the moment map is `mu = -x`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::diracfield::{self, combinations, poly_det, CourantSection, DiracSpan};
use crate::error::{DiracError, Result};
use crate::grid::{Domain, SampleGrid};
use crate::linalg::QMatrix;
use crate::polycalc::{exterior_d, lie_derivative, vf_bracket, KForm, Poly, PolyMap, VectorField};
use crate::rational::{self, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize, schemars::JsonSchema)]
pub enum GroupKind {
    /// `R^k`
    R,
    /// `T^k`, flows 2pi-periodic
    T,
}

/// Connected abelian group acting through `k` commuting polynomial generators.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionSpec {
    kind: GroupKind,
    generators: Vec<VectorField>,
    /// Declared period of every generator flow (torus actions only).
    period: Option<f64>,
}

impl ActionSpec {
    pub fn new(kind: GroupKind, generators: Vec<VectorField>, period: Option<f64>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(DiracError::Invalid("an action needs at least one generator".into()));
        };
        let n = first.dim();
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(DiracError::dim(n, g.dim(), "generator dimension"));
        }
        for a in 0..generators.len() {
            for b in a + 1..generators.len() {
                let br = vf_bracket(&generators[a], &generators[b])?;
                if !br.is_zero() {
                    return Err(DiracError::NonAbelian {
                        a,
                        b,
                        witness: format!("{:?}", br.comps()),
                    });
                }
            }
        }
        let period = match (kind, period) {
            (GroupKind::T, None) => {
                return Err(DiracError::Invalid("torus actions need a declared period".into()));
            }
            (GroupKind::T, Some(p)) if p.is_nan() || p <= 0.0 => {
                return Err(DiracError::Invalid("period must be positive".into()));
            }
            (GroupKind::R, _) => None,
            (_, p) => p,
        };
        Ok(ActionSpec {
            kind,
            generators,
            period,
        })
    }

    /// `R^k` action.
    pub fn real(generators: Vec<VectorField>) -> Result<Self> {
        Self::new(GroupKind::R, generators, None)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.generators
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    /// `n x k` matrix of generator values at `p`.
    pub fn generator_matrix(&self, p: &[Q]) -> QMatrix {
        QMatrix::from_cols(self.dim(), &self.generators.iter().map(|g| g.eval(p)).collect::<Vec<_>>())
    }

    /// Locally free at `p`: the generators are independent there.
    pub fn is_locally_free_at(&self, p: &[Q]) -> bool {
        self.generator_matrix(p).rank() == self.k()
    }
}

/// Components `mu_1, ..., mu_k` of an abelian moment map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMap {
    components: Vec<Poly>,
}

impl MomentMap {
    pub fn new(components: Vec<Poly>) -> Self {
        MomentMap { components }
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn negate(&self) -> MomentMap {
        MomentMap {
            components: self.components.iter().map(|c| -c).collect(),
        }
    }
}

fn check_dims(l: &DiracSpan, a: &ActionSpec) -> Result<()> {
    if l.dim() != a.dim() {
        return Err(DiracError::dim(l.dim(), a.dim(), "action vs Dirac structure"));
    }
    Ok(())
}

fn contract(alpha: &KForm, x: &VectorField) -> Poly {
    alpha
        .components()
        .iter()
        .zip(x.comps())
        .fold(Poly::zero(x.dim()), |acc, (c, v)| &acc + &(c * v))
}

/// Symbolic `k x n` matrix `j_ai = i_{xi_a} a_i` over the spanning sections.
pub fn j_symbolic(l: &DiracSpan, a: &ActionSpec) -> Result<Vec<Vec<Poly>>> {
    check_dims(l, a)?;
    Ok(a.generators
        .iter()
        .map(|xi| l.sections().iter().map(|s| contract(&s.alpha, xi)).collect())
        .collect())
}

/// `j` at a point: rows are generators, columns the spanning sections.
pub fn j_map(l: &DiracSpan, a: &ActionSpec, p: &[Q]) -> Result<QMatrix> {
    check_dims(l, a)?;
    let fiber = l.evaluate(p)?;
    let rows = a
        .generators
        .iter()
        .map(|xi| {
            let x = xi.eval(p);
            fiber
                .basis()
                .iter()
                .map(|b| b.covec.iter().zip(&x).fold(Q::zero(), |acc, (u, v)| acc + u * v))
                .collect()
        })
        .collect();
    Ok(QMatrix::from_rows(rows))
}

/// A polynomial that should vanish identically but does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub generator: usize,
    pub section: usize,
    pub against: usize,
    pub value: String,
}

/// Verdict of an exact symbolic check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicCheck {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl SymbolicCheck {
    fn from_witness(w: Option<Witness>) -> Self {
        SymbolicCheck {
            holds: w.is_none(),
            witness: w,
        }
    }
}

/// Infinitesimal Dirac-action condition through the `j`-morphism criterion:
/// `<(L_xi X_i, L_xi a_i), e_j>_+ = 0` for all generators and sections.
pub fn is_dirac_action(l: &DiracSpan, a: &ActionSpec) -> Result<SymbolicCheck> {
    check_dims(l, a)?;
    for (g, xi) in a.generators.iter().enumerate() {
        for (i, e) in l.sections().iter().enumerate() {
            let moved = CourantSection::new(vf_bracket(xi, &e.x)?, lie_derivative(xi, &e.alpha)?)?;
            for (j, f) in l.sections().iter().enumerate() {
                let v = diracfield::pairing_plus(&moved, f);
                if !v.is_zero() {
                    return Ok(SymbolicCheck::from_witness(Some(Witness {
                        generator: g,
                        section: i,
                        against: j,
                        value: v.to_string(),
                    })));
                }
            }
        }
    }
    Ok(SymbolicCheck::from_witness(None))
}

/// Outcome of [`check_moment`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentCheck {
    /// `(xi_a, d mu_a)` pairs to zero with every section.
    pub condition: SymbolicCheck,
    /// `xi_b(mu_a) = 0` for all `a, b` (equivariance for abelian `g*`).
    pub invariant: SymbolicCheck,
}

impl MomentCheck {
    pub fn holds(&self) -> bool {
        self.condition.holds && self.invariant.holds
    }
}

/// Moment-map condition `(xi_a, d mu_a) in Gamma(L)`, tested as
/// `<(xi_a, d mu_a), e_j>_+ = 0`, together with invariance of `mu`.
pub fn check_moment(l: &DiracSpan, a: &ActionSpec, mu: &MomentMap) -> Result<MomentCheck> {
    check_dims(l, a)?;
    if mu.k() != a.k() {
        return Err(DiracError::dim(a.k(), mu.k(), "moment map components"));
    }
    if let Some(c) = mu.components.iter().find(|c| c.nvars() != l.dim()) {
        return Err(DiracError::dim(l.dim(), c.nvars(), "moment map variables"));
    }
    let mut condition = None;
    'outer: for (g, (xi, m)) in a.generators.iter().zip(&mu.components).enumerate() {
        let s = CourantSection::new(xi.clone(), exterior_d(&KForm::function(m.clone())))?;
        for (j, e) in l.sections().iter().enumerate() {
            let v = diracfield::pairing_plus(&s, e);
            if !v.is_zero() {
                condition = Some(Witness {
                    generator: g,
                    section: g,
                    against: j,
                    value: v.to_string(),
                });
                break 'outer;
            }
        }
    }
    let mut invariant = None;
    'inv: for (b, xi) in a.generators.iter().enumerate() {
        for (c, m) in mu.components.iter().enumerate() {
            let v = xi.apply(m);
            if !v.is_zero() {
                invariant = Some(Witness {
                    generator: b,
                    section: c,
                    against: c,
                    value: v.to_string(),
                });
                break 'inv;
            }
        }
    }
    Ok(MomentCheck {
        condition: SymbolicCheck::from_witness(condition),
        invariant: SymbolicCheck::from_witness(invariant),
    })
}

/// The identity `d mu_a (X_i) = -i_{xi_a} a_i` for every spanning section
/// (the sign follows from `<(xi_a, d mu_a), (X_i, a_i)>_+ = 0`).
pub fn moment_identity_holds(l: &DiracSpan, a: &ActionSpec, mu: &MomentMap) -> Result<bool> {
    let j = j_symbolic(l, a)?;
    for (g, m) in mu.components.iter().enumerate() {
        for (i, e) in l.sections().iter().enumerate() {
            if e.x.apply(m) != -&j[g][i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityVerdict {
    /// Some `k x k` minor of `j` has no zero on the domain (exact).
    RegularEverywhere,
    /// All minors vanish identically (exact).
    NowhereRegular,
    /// Rank drops at the listed sample nodes.
    RankDrops,
    /// Full rank at every sample node, not proven on the whole domain.
    RegularOnSamples,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub verdict: RegularityVerdict,
    #[serde(serialize_with = "ser_polys")]
    pub minors: Vec<Poly>,
    #[serde(serialize_with = "ser_points")]
    pub rank_drop_locus: Vec<Vec<Q>>,
    #[serde(serialize_with = "ser_points")]
    pub skipped_degenerate: Vec<Vec<Q>>,
    /// Generators independent at every regular sample node.
    pub locally_free_on_samples: bool,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        matches!(
            self.verdict,
            RegularityVerdict::RegularEverywhere | RegularityVerdict::RegularOnSamples
        )
    }
}

pub(crate) fn ser_points<S: serde::Serializer>(pts: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(pts.iter().map(|p| p.iter().map(rational::fmt_q).collect::<Vec<_>>()))
}

fn ser_polys<S: serde::Serializer>(ps: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(|p| p.to_string()))
}

fn strictly_signed_on(p: &Poly, d: &Domain) -> bool {
    let (lo, hi) = p.range_bound(&d.min, &d.max);
    lo.is_positive() || hi.is_negative()
}

/// Regular Dirac action: `j` surjective at every point of the domain.
pub fn is_regular_action(l: &DiracSpan, a: &ActionSpec, grid: &SampleGrid) -> Result<RegularityReport> {
    let j = j_symbolic(l, a)?;
    let (k, n) = (a.k(), l.dim());
    let mut minors = Vec::new();
    if k <= n {
        for cols in combinations(n, k) {
            let m: Vec<Vec<Poly>> = j.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
            let d = poly_det(&m, n);
            if !d.is_zero() && !minors.contains(&d) {
                minors.push(d);
            }
        }
    }
    let mut report = RegularityReport {
        verdict: RegularityVerdict::RegularOnSamples,
        minors,
        rank_drop_locus: Vec::new(),
        skipped_degenerate: Vec::new(),
        locally_free_on_samples: true,
    };
    if report.minors.is_empty() {
        report.verdict = RegularityVerdict::NowhereRegular;
        return Ok(report);
    }
    let proven = report.minors.iter().any(|m| strictly_signed_on(m, l.domain()));
    for node in grid.nodes(0) {
        match j_map(l, a, &node.point) {
            Ok(jm) => {
                if jm.rank() < k {
                    report.rank_drop_locus.push(node.point);
                } else if !a.is_locally_free_at(&node.point) {
                    report.locally_free_on_samples = false;
                }
            }
            Err(DiracError::DegenerateFiber { .. }) => report.skipped_degenerate.push(node.point),
            Err(e) => return Err(e),
        }
    }
    report.verdict = if proven {
        RegularityVerdict::RegularEverywhere
    } else if !report.rank_drop_locus.is_empty() {
        RegularityVerdict::RankDrops
    } else {
        RegularityVerdict::RegularOnSamples
    };
    Ok(report)
}

/// Polynomial parametrization `phi_c` of a level set `mu^{-1}(c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSet {
    pub c: Vec<Q>,
    pub map: PolyMap,
    pub param_domain: Domain,
}

impl LevelSet {
    /// Checks `mu o phi = c` symbolically.
    pub fn verify(&self, mu: &MomentMap) -> Result<()> {
        if self.c.len() != mu.k() {
            return Err(DiracError::dim(mu.k(), self.c.len(), "level value"));
        }
        if self.param_domain.dim() != self.map.source_dim() {
            return Err(DiracError::dim(self.map.source_dim(), self.param_domain.dim(), "parameter domain"));
        }
        for (i, (m, c)) in mu.components().iter().zip(&self.c).enumerate() {
            if m.nvars() != self.map.target_dim() {
                return Err(DiracError::dim(m.nvars(), self.map.target_dim(), "level set target"));
            }
            let composed = if self.map.target_dim() == 0 {
                m.clone()
            } else {
                m.compose(self.map.comps())?
            };
            let resid = &composed - &Poly::constant(self.map.source_dim(), c.clone());
            if !resid.is_zero() {
                return Err(DiracError::NotLevelSet {
                    component: i,
                    witness: resid.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `d phi` must be injective at `t`.
    pub fn check_immersion(&self, t: &[Q]) -> Result<()> {
        let rank = self.map.jacobian_at(t).rank();
        if rank < self.map.source_dim() {
            return Err(DiracError::DifferentialRank {
                which: "level-set parametrization",
                rank,
                expected: self.map.source_dim(),
                point: t.to_vec(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum LevelRegularity {
    Regular {
        nodes: usize,
    },
    NotRegular {
        nodes: usize,
        #[serde(serialize_with = "ser_points")]
        failing: Vec<Vec<Q>>,
    },
    EmptyLevelSet,
}

impl LevelRegularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, LevelRegularity::Regular { .. })
    }
}

/// True when some `mu_a - c_a` is provably sign-definite on the domain box.
pub fn level_set_empty_on(mu: &MomentMap, c: &[Q], domain: &Domain) -> bool {
    mu.components()
        .iter()
        .zip(c)
        .any(|(m, cv)| strictly_signed_on(&(m - &Poly::constant(m.nvars(), cv.clone())), domain))
}

/// Regularity of `mu` at `c`, decided through `j` surjectivity on the level
/// set (the leafwise differential of `mu` factors through `j`).
///
/// `param_grid` samples the parametrization's domain. Without a
/// parametrization, the level set must be provably empty on the domain.
pub fn is_regular_at(
    l: &DiracSpan,
    a: &ActionSpec,
    mu: &MomentMap,
    c: &[Q],
    level: Option<&LevelSet>,
    param_resolution: usize,
) -> Result<LevelRegularity> {
    let Some(level) = level else {
        return if level_set_empty_on(mu, c, l.domain()) {
            Ok(LevelRegularity::EmptyLevelSet)
        } else {
            Err(DiracError::MissingParametrization)
        };
    };
    if level.c != c {
        return Err(DiracError::Invalid("level set was built for a different value".into()));
    }
    level.verify(mu)?;
    let grid = SampleGrid::new(level.param_domain.clone(), param_resolution, 0)?;
    let mut failing = Vec::new();
    let nodes = grid.nodes(0);
    for node in &nodes {
        level.check_immersion(&node.point)?;
        let p = level.map.eval(&node.point);
        let jm = j_map(l, a, &p)?;
        if jm.rank() < a.k() {
            failing.push(p);
        }
    }
    Ok(if failing.is_empty() {
        LevelRegularity::Regular { nodes: nodes.len() }
    } else {
        LevelRegularity::NotRegular {
            nodes: nodes.len(),
            failing,
        }
    })
}

/// Single-leaf regularity for graphs of 2-forms: `mu` is a submersion at `p`.
pub fn is_submersion_at(mu: &MomentMap, p: &[Q]) -> bool {
    let n = p.len();
    let jac = QMatrix::from_rows(
        mu.components()
            .iter()
            .map(|m| (0..n).map(|i| m.derivative(i).eval(p)).collect())
            .collect(),
    );
    jac.rank() == mu.k()
}
