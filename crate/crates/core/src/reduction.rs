//! Pointwise symmetry reduction.
//!
//! Fibers are computed one point at a time from the forward and backward
//! image formulas. Quotient maps and level-set parametrizations are supplied
//! as polynomial data and verified, never derived.

use rayon::prelude::*;
use serde::Serialize;

use crate::diracfield::DiracSpan;
use crate::error::{DiracError, Result};
use crate::grid::SampleGrid;
use crate::hamaction::{self, ser_points, ActionSpec, LevelSet, MomentMap};
use crate::linalg::QMatrix;
use crate::lindirac::{self, LinearDirac};
use crate::polycalc::PolyMap;
use crate::rational::{self, Q};

/// Gap threshold above which adjacent fibers count as a jump.
pub const TAU_JUMP: f64 = 0.5;
/// Factor by which the max adjacent gap must shrink per refinement to count as smooth.
pub const DECAY_RATIO: f64 = 2.0;

/// Invariant polynomial quotient map `M -> M/G` of an action.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientPresentation {
    map: PolyMap,
}

impl QuotientPresentation {
    /// Checks dimensions and `xi_a(pi_i) = 0` symbolically.
    pub fn new(map: PolyMap, action: &ActionSpec) -> Result<Self> {
        if map.source_dim() != action.dim() {
            return Err(DiracError::dim(action.dim(), map.source_dim(), "quotient source"));
        }
        if map.target_dim() + action.k() != action.dim() {
            return Err(DiracError::dim(
                action.dim() - action.k().min(action.dim()),
                map.target_dim(),
                "quotient target",
            ));
        }
        for (a, xi) in action.generators().iter().enumerate() {
            for (i, c) in map.comps().iter().enumerate() {
                let w = xi.apply(c);
                if !w.is_zero() {
                    return Err(DiracError::NotInvariant {
                        generator: a,
                        component: i,
                        witness: w.to_string(),
                    });
                }
            }
        }
        Ok(QuotientPresentation { map })
    }

    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    /// `d pi_p`, required to be surjective.
    pub fn differential(&self, p: &[Q]) -> Result<QMatrix> {
        full_rank_differential(&self.map, p, "quotient map")
    }

    /// Sample points where `d pi` loses rank.
    pub fn rank_drops(&self, grid: &SampleGrid) -> Vec<Vec<Q>> {
        grid.nodes(0)
            .into_iter()
            .filter(|n| self.differential(&n.point).is_err())
            .map(|n| n.point)
            .collect()
    }
}

fn full_rank_differential(map: &PolyMap, p: &[Q], which: &'static str) -> Result<QMatrix> {
    let jac = map.jacobian_at(p);
    let rank = jac.rank();
    if rank < map.target_dim() {
        return Err(DiracError::DifferentialRank {
            which,
            rank,
            expected: map.target_dim(),
            point: p.to_vec(),
        });
    }
    Ok(jac)
}

/// `L_{M/G}|_[p] = pi_* L|_p`.
pub fn reduce_pointwise(l: &DiracSpan, q: &QuotientPresentation, p: &[Q]) -> Result<LinearDirac> {
    if q.map.source_dim() != l.dim() {
        return Err(DiracError::dim(l.dim(), q.map.source_dim(), "quotient source"));
    }
    let fiber = l.evaluate(p)?;
    lindirac::pushforward(&fiber, &q.differential(p)?)
}

/// `i_c^* L` at the parameter point `t`.
pub fn restrict_to_level(l: &DiracSpan, phi: &PolyMap, t: &[Q]) -> Result<LinearDirac> {
    if phi.target_dim() != l.dim() {
        return Err(DiracError::dim(l.dim(), phi.target_dim(), "level-set map target"));
    }
    if t.len() != phi.source_dim() {
        return Err(DiracError::dim(phi.source_dim(), t.len(), "parameter point"));
    }
    let fiber = l.evaluate(&phi.eval(t))?;
    lindirac::pullback(&fiber, &phi.jacobian_at(t))
}

/// Reduced fiber of `M//G = mu^{-1}(c)/G` at the image of `t`, together with
/// the pieces the diamond check reuses.
struct QuotientFiber {
    point: Vec<Q>,
    restricted: LinearDirac,
    dqc: QMatrix,
    fiber: LinearDirac,
}

fn quotient_fiber_verified(
    l: &DiracSpan,
    a: &ActionSpec,
    level: &LevelSet,
    qc: &PolyMap,
    t: &[Q],
) -> Result<QuotientFiber> {
    level.check_immersion(t)?;
    let p = level.map.eval(t);
    let j = hamaction::j_map(l, a, &p)?;
    let rank = j.rank();
    if rank < a.k() {
        return Err(DiracError::NotRegular {
            point: p,
            rank,
            k: a.k(),
        });
    }
    let dphi = level.map.jacobian_at(t);
    let dqc = full_rank_differential(qc, t, "level-set quotient map")?;
    for xi in a.generators() {
        let lifted = dphi.solve(&xi.eval(&p)).ok_or_else(|| DiracError::NotTangent { point: p.clone() })?;
        if dqc.mul_vec(&lifted).iter().any(|v| !num_traits::Zero::is_zero(v)) {
            return Err(DiracError::IncompatibleQuotient(
                "level-set quotient does not collapse the orbit directions".into(),
            ));
        }
    }
    let restricted = lindirac::pullback(&l.evaluate(&p)?, &dphi)?;
    let fiber = lindirac::pushforward(&restricted, &dqc)?;
    Ok(QuotientFiber {
        point: p,
        restricted,
        dqc,
        fiber,
    })
}

fn check_quotient_shape(level: &LevelSet, qc: &PolyMap, a: &ActionSpec) -> Result<()> {
    if qc.source_dim() != level.map.source_dim() {
        return Err(DiracError::dim(level.map.source_dim(), qc.source_dim(), "level-set quotient source"));
    }
    if qc.target_dim() + a.k() != qc.source_dim() {
        return Err(DiracError::dim(
            qc.source_dim().saturating_sub(a.k()),
            qc.target_dim(),
            "level-set quotient target",
        ));
    }
    Ok(())
}

/// Fiber of the Hamiltonian quotient at the image of the level-set parameter `t`.
///
/// Checks, in order: `mu o phi_c = c`, regularity (`j` onto at `phi_c(t)`),
/// tangency of the generators to the level set, and that `d Q_c` kills the
/// lifted generators.
pub fn hamiltonian_quotient_fiber(
    l: &DiracSpan,
    a: &ActionSpec,
    mu: &MomentMap,
    level: &LevelSet,
    qc: &PolyMap,
    t: &[Q],
) -> Result<LinearDirac> {
    level.verify(mu)?;
    check_quotient_shape(level, qc, a)?;
    Ok(quotient_fiber_verified(l, a, level, qc, t)?.fiber)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothnessVerdict {
    Smooth,
    NonSmooth,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    pub level: usize,
    pub cells_per_axis: usize,
    pub nodes: usize,
    pub max_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeFiber {
    #[serde(serialize_with = "ser_point")]
    pub point: Vec<Q>,
    #[serde(serialize_with = "ser_point")]
    pub image: Vec<Q>,
    pub fiber: LinearDirac,
}

/// Largest gap from a node to any of its neighbors at the finest level.
#[derive(Clone, Debug, Serialize)]
pub struct NodeGap {
    #[serde(serialize_with = "ser_point")]
    pub point: Vec<Q>,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub verdict: SmoothnessVerdict,
    pub tau_jump: f64,
    pub levels: Vec<LevelSummary>,
    #[serde(serialize_with = "ser_points")]
    pub suspect_locus: Vec<Vec<Q>>,
    #[serde(serialize_with = "ser_points")]
    pub skipped: Vec<Vec<Q>>,
    pub fibers: Vec<NodeFiber>,
    #[serde(skip)]
    pub node_gaps: Vec<NodeGap>,
}

impl ReductionReport {
    /// `x0,...,gap` rows for the finest level.
    pub fn gaps_csv(&self) -> String {
        let dim = self.node_gaps.first().map_or(0, |g| g.point.len());
        let mut out: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
        out.push("gap".into());
        let mut s = out.join(",");
        s.push('\n');
        for g in &self.node_gaps {
            for c in &g.point {
                s.push_str(&format!("{},", rational::to_f64(c)));
            }
            s.push_str(&format!("{}\n", g.gap));
        }
        s
    }
}

fn ser_point<S: serde::Serializer>(p: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(rational::fmt_q))
}

struct LevelScan {
    points: Vec<Vec<Q>>,
    fibers: Vec<Option<LinearDirac>>,
    max_gap: f64,
    node_gap: Vec<f64>,
}

fn scan_level(l: &DiracSpan, q: &QuotientPresentation, grid: &SampleGrid, level: usize) -> Result<LevelScan> {
    let nodes = grid.nodes(level);
    let fibers: Vec<Option<LinearDirac>> = nodes
        .par_iter()
        .map(|n| match reduce_pointwise(l, q, &n.point) {
            Ok(f) => Ok(Some(f)),
            Err(DiracError::DegenerateFiber { .. } | DiracError::DifferentialRank { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let pairs = grid.adjacent_pairs(level);
    let gaps: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| match (&fibers[i], &fibers[j]) {
            (Some(a), Some(b)) => lindirac::grassmann_gap(a, b).map(Some),
            _ => Ok(None),
        })
        .collect::<Result<_>>()?;
    let mut node_gap = vec![0.0f64; nodes.len()];
    let mut max_gap = 0.0f64;
    for (&(i, j), g) in pairs.iter().zip(&gaps) {
        if let Some(g) = *g {
            max_gap = max_gap.max(g);
            node_gap[i] = node_gap[i].max(g);
            node_gap[j] = node_gap[j].max(g);
        }
    }
    Ok(LevelScan {
        points: nodes.into_iter().map(|n| n.point).collect(),
        fibers,
        max_gap,
        node_gap,
    })
}

/// Heuristic smoothness test for the reduced family `p -> pi_* L|_p`.
///
/// Fibers are computed on the grid and on at least one refinement. The last
/// two levels decide: both max adjacent gaps above [`TAU_JUMP`] means
/// `non-smooth`; a drop by [`DECAY_RATIO`] or more means `smooth`; anything
/// else is `inconclusive`. Nodes on the degeneracy locus or where `d pi`
/// drops rank are skipped.
pub fn smoothness_probe(l: &DiracSpan, q: &QuotientPresentation, grid: &SampleGrid) -> Result<ReductionReport> {
    if grid.domain.dim() != l.dim() {
        return Err(DiracError::dim(l.dim(), grid.domain.dim(), "grid dimension"));
    }
    let top = grid.refinements.max(1);
    let mut scans = Vec::with_capacity(top + 1);
    for level in 0..=top {
        scans.push(scan_level(l, q, grid, level)?);
    }
    let levels = scans
        .iter()
        .enumerate()
        .map(|(level, s)| LevelSummary {
            level,
            cells_per_axis: grid.cells(level),
            nodes: s.points.len(),
            max_gap: s.max_gap,
        })
        .collect::<Vec<_>>();
    let (g0, g1) = (levels[top - 1].max_gap, levels[top].max_gap);
    let verdict = if g0 > TAU_JUMP && g1 > TAU_JUMP {
        SmoothnessVerdict::NonSmooth
    } else if g1 <= g0 / DECAY_RATIO + 1e-12 {
        SmoothnessVerdict::Smooth
    } else {
        SmoothnessVerdict::Inconclusive
    };
    let fine = &scans[top];
    let suspect_locus = if verdict == SmoothnessVerdict::Smooth || g1 <= 1e-12 {
        Vec::new()
    } else {
        fine.points
            .iter()
            .zip(&fine.node_gap)
            .filter(|(_, g)| **g >= g1 - 1e-9)
            .map(|(p, _)| p.clone())
            .collect()
    };
    let skipped = fine.points
        .iter()
        .zip(&fine.fibers)
        .filter(|(_, f)| f.is_none())
        .map(|(p, _)| p.clone())
        .collect();
    let coarse = &scans[0];
    let fibers = coarse
        .points
        .iter()
        .zip(&coarse.fibers)
        .filter_map(|(p, f)| {
            f.as_ref().map(|f| NodeFiber {
                point: p.clone(),
                image: q.map.eval(p),
                fiber: f.clone(),
            })
        })
        .collect();
    let node_gaps = fine
        .points
        .iter()
        .zip(&fine.node_gap)
        .map(|(p, g)| NodeGap {
            point: p.clone(),
            gap: *g,
        })
        .collect();
    Ok(ReductionReport {
        verdict,
        tau_jump: TAU_JUMP,
        levels,
        suspect_locus,
        skipped,
        fibers,
        node_gaps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiamondFailure {
    #[serde(serialize_with = "ser_point")]
    pub param: Vec<Q>,
    /// `"level"` for `i_c^* L = pi_c^* L_{M//G}`, `"quotient"` for `pi_* L = i_* L_{M//G}`.
    pub identity: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiamondReport {
    pub nodes: usize,
    pub failures: Vec<DiamondFailure>,
}

impl DiamondReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks both routes around the reduction diamond at every node of the
/// level-set parameter grid:
///
/// - `i_c^* L = pi_c^* L_{M//G}`;
/// - `pi_* L = i_* L_{M//G}`, with `i: M//G -> M/G` the map induced by
///   `Q o phi_c`, whose differential is solved from `di . dQ_c = dQ . dphi_c`.
///
/// Regularity at `c` is a precondition and is checked first.
pub fn verify_diamond(
    l: &DiracSpan,
    a: &ActionSpec,
    mu: &MomentMap,
    level: &LevelSet,
    q: &QuotientPresentation,
    qc: &PolyMap,
    param_resolution: usize,
) -> Result<DiamondReport> {
    let regularity = hamaction::is_regular_at(l, a, mu, &level.c, Some(level), param_resolution)?;
    if let hamaction::LevelRegularity::NotRegular { failing, .. } = &regularity {
        let point = failing[0].clone();
        let rank = hamaction::j_map(l, a, &point)?.rank();
        return Err(DiracError::NotRegular { point, rank, k: a.k() });
    }
    check_quotient_shape(level, qc, a)?;
    let grid = SampleGrid::new(level.param_domain.clone(), param_resolution, 0)?;
    let nodes = grid.nodes(0);
    let outcomes: Vec<Vec<DiamondFailure>> = nodes
        .par_iter()
        .map(|n| diamond_at(l, a, level, q, qc, &n.point))
        .collect::<Result<_>>()?;
    Ok(DiamondReport {
        nodes: nodes.len(),
        failures: outcomes.into_iter().flatten().collect(),
    })
}

fn diamond_at(
    l: &DiracSpan,
    a: &ActionSpec,
    level: &LevelSet,
    q: &QuotientPresentation,
    qc: &PolyMap,
    t: &[Q],
) -> Result<Vec<DiamondFailure>> {
    let qf = quotient_fiber_verified(l, a, level, qc, t)?;
    let mut failures = Vec::new();
    let back = lindirac::pullback(&qf.fiber, &qf.dqc)?;
    if !lindirac::subspace_equal(&qf.restricted, &back) {
        failures.push(DiamondFailure {
            param: t.to_vec(),
            identity: "level",
        });
    }
    let dq = q.differential(&qf.point)?;
    let rhs = dq.mul(&level.map.jacobian_at(t));
    let di = solve_right(&qf.dqc, &rhs)?;
    let pushed = lindirac::pushforward(&qf.fiber, &di)?;
    let reduced = reduce_pointwise(l, q, &qf.point)?;
    if !lindirac::subspace_equal(&reduced, &pushed) {
        failures.push(DiamondFailure {
            param: t.to_vec(),
            identity: "quotient",
        });
    }
    Ok(failures)
}

/// Solves `X . A = B` for `X` with `A` surjective.
fn solve_right(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    let at = a.transpose();
    let rows = (0..b.rows())
        .map(|i| {
            at.solve(&b.row(i)).ok_or_else(|| {
                DiracError::IncompatibleQuotient("quotient maps do not induce a map M//G -> M/G".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QMatrix::from_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Domain;
    use crate::lindirac::GenVector;
    use crate::polycalc::{default_names, parse_poly, KForm, Poly, VectorField};
    use crate::rational::q;

    fn p(n: usize, s: &str) -> Poly {
        parse_poly(s, &default_names(n)).unwrap()
    }
    fn omega(coeff: &str) -> DiracSpan {
        let w = KForm::from_terms(2, 2, [(vec![0, 1], p(2, coeff))]).unwrap();
        DiracSpan::from_2form(&w, Domain::cube(2, -1, 1)).unwrap()
    }
    fn dy() -> ActionSpec {
        ActionSpec::real(vec![VectorField::coordinate(2, 1)]).unwrap()
    }
    fn proj_x() -> QuotientPresentation {
        QuotientPresentation::new(PolyMap::new(2, vec![p(2, "x")]).unwrap(), &dy()).unwrap()
    }
    fn t(s: &str) -> Poly {
        parse_poly(s, &["t".to_string()]).unwrap()
    }
    fn axis() -> LevelSet {
        LevelSet {
            c: vec![q(0)],
            map: PolyMap::new(1, vec![t("0"), t("t")]).unwrap(),
            param_domain: Domain::cube(1, -1, 1),
        }
    }
    fn collapse() -> PolyMap {
        PolyMap::new(1, vec![]).unwrap()
    }
    fn span1(v: &[i64], c: &[i64]) -> LinearDirac {
        LinearDirac::new(1, vec![GenVector::from_i64(v, c)]).unwrap()
    }

    #[test]
    fn quotient_invariance_checked() {
        let err = QuotientPresentation::new(PolyMap::new(2, vec![p(2, "y")]).unwrap(), &dy());
        assert!(matches!(err, Err(DiracError::NotInvariant { .. })));
        let err = QuotientPresentation::new(PolyMap::new(2, vec![p(2, "x"), p(2, "x")]).unwrap(), &dy());
        assert!(matches!(err, Err(DiracError::DimensionMismatch { .. })));
    }

    #[test]
    fn singular_hamiltonian_fibers() {
        let l = omega("x");
        let pr = proj_x();
        let off = reduce_pointwise(&l, &pr, &[q(1), q(0)]).unwrap();
        assert!(lindirac::subspace_equal(&off, &span1(&[0], &[1])));
        let on = reduce_pointwise(&l, &pr, &[q(0), q(0)]).unwrap();
        assert!(lindirac::subspace_equal(&on, &span1(&[1], &[0])));
        let flat = reduce_pointwise(&omega("1"), &pr, &[q(0), rational::qf(1, 3)]).unwrap();
        assert!(lindirac::subspace_equal(&flat, &span1(&[0], &[1])));
    }

    #[test]
    fn probe_verdicts() {
        let grid = SampleGrid::new(Domain::cube(2, -1, 1), 8, 1).unwrap();
        let r = smoothness_probe(&omega("x"), &proj_x(), &grid).unwrap();
        assert_eq!(r.verdict, SmoothnessVerdict::NonSmooth);
        assert!(r.suspect_locus.iter().any(|p| p[0] == q(0)));
        let r = smoothness_probe(&omega("1"), &proj_x(), &grid).unwrap();
        assert_eq!(r.verdict, SmoothnessVerdict::Smooth);
        assert!(r.suspect_locus.is_empty());
        assert!(r.levels.iter().all(|l| l.max_gap < 1e-12));
        assert!(r.gaps_csv().starts_with("x0,x1,gap\n"));
    }

    #[test]
    fn restriction_examples() {
        let r = restrict_to_level(&omega("1"), &axis().map, &[rational::qf(1, 2)]).unwrap();
        assert!(lindirac::subspace_equal(&r, &span1(&[1], &[0])));
        let id = PolyMap::identity(2);
        let pt = [q(1), rational::qf(-1, 2)];
        let l = omega("x");
        assert!(lindirac::subspace_equal(&restrict_to_level(&l, &id, &pt).unwrap(), &l.evaluate(&pt).unwrap()));
        let r = restrict_to_level(&omega("0"), &axis().map, &[q(0)]).unwrap();
        assert!(lindirac::subspace_equal(&r, &LinearDirac::tangent_block(1)));
    }

    #[test]
    fn regular_quotient_is_a_point() {
        let mu = MomentMap::new(vec![p(2, "-x")]);
        let f = hamiltonian_quotient_fiber(&omega("1"), &dy(), &mu, &axis(), &collapse(), &[q(0)]).unwrap();
        assert_eq!(f.dim(), 0);
        assert!(f.is_maximal_isotropic());
    }

    #[test]
    fn diamond_regular_and_refused() {
        let mu = MomentMap::new(vec![p(2, "-x")]);
        let r = verify_diamond(&omega("1"), &dy(), &mu, &axis(), &proj_x(), &collapse(), 32).unwrap();
        assert_eq!(r.nodes, 33);
        assert!(r.passed());
        let mu = MomentMap::new(vec![p(2, "-x^2/2")]);
        let err = verify_diamond(&omega("x"), &dy(), &mu, &axis(), &proj_x(), &collapse(), 8);
        assert!(matches!(err, Err(DiracError::NotRegular { .. })));
        let err = verify_diamond(&omega("0"), &dy(), &MomentMap::new(vec![p(2, "0")]), &LevelSet {
            c: vec![q(0)],
            ..axis()
        }, &proj_x(), &collapse(), 8);
        assert!(err.is_err());
    }
}
