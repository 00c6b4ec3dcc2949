//! JSON scene format shared by the command-line tool and the presets.
//!
//! Polynomials are given either as expressions (`"x^2/2 - y"`) in the
//! scene's variable names or as exact term lists. Rationals are integers or
//! strings such as `"-3/4"`.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::diracfield::{CourantSection, DiracSpan, SpanKind};
use crate::error::{DiracError, Result};
use crate::grid::{Domain, SampleGrid};
use crate::hamaction::{ActionSpec, GroupKind, LevelSet, MomentMap};
use crate::obstruction::{DiskFamily, SphereAtlas, DEFAULT_ORDER};
use crate::polycalc::{default_names, parse_poly, Bivector, KForm, Poly, PolyJson, PolyMap, VectorField};
use crate::rational::{self, Q};
use crate::reduction::QuotientPresentation;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(untagged)]
pub enum PolySpec {
    Expr(String),
    Terms(PolyJson),
}

impl PolySpec {
    pub fn to_poly(&self, names: &[String]) -> Result<Poly> {
        let p = match self {
            PolySpec::Expr(s) => parse_poly(s, names)?,
            PolySpec::Terms(t) => Poly::try_from(t.clone())?,
        };
        if p.nvars() != names.len() {
            return Err(DiracError::dim(names.len(), p.nvars(), "polynomial variable count"));
        }
        Ok(p)
    }
}

impl From<&str> for PolySpec {
    fn from(s: &str) -> Self {
        PolySpec::Expr(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(untagged)]
pub enum RatSpec {
    Int(i64),
    Text(String),
}

impl RatSpec {
    pub fn to_q(&self) -> Result<Q> {
        match self {
            RatSpec::Int(i) => Ok(rational::q(*i)),
            RatSpec::Text(s) => rational::parse_q(s),
        }
    }
}

impl From<i64> for RatSpec {
    fn from(i: i64) -> Self {
        RatSpec::Int(i)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub min: Vec<RatSpec>,
    pub max: Vec<RatSpec>,
}

impl DomainSpec {
    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        DomainSpec {
            min: vec![lo.into(); n],
            max: vec![hi.into(); n],
        }
    }

    pub fn to_domain(&self) -> Result<Domain> {
        Domain::new(
            self.min.iter().map(RatSpec::to_q).collect::<Result<_>>()?,
            self.max.iter().map(RatSpec::to_q).collect::<Result<_>>()?,
        )
    }
}

/// Coefficient of `dx_i ^ dx_j` (or `d_i ^ d_j`), `i < j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: PolySpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SectionSpec {
    pub x: Vec<PolySpec>,
    pub alpha: Vec<PolySpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum DiracSpec {
    #[serde(rename = "2form")]
    TwoForm {
        domain: DomainSpec,
        terms: Vec<PairTerm>,
    },
    #[serde(rename = "bivector")]
    Bivector {
        domain: DomainSpec,
        terms: Vec<PairTerm>,
    },
    #[serde(rename = "distribution")]
    Distribution {
        domain: DomainSpec,
        vectors: Vec<Vec<PolySpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        annihilator: Option<Vec<Vec<PolySpec>>>,
        #[serde(default = "default_max_degree")]
        max_degree: u32,
    },
    #[serde(rename = "span")]
    Span {
        domain: DomainSpec,
        sections: Vec<SectionSpec>,
    },
}

fn default_max_degree() -> u32 {
    2
}

impl DiracSpec {
    pub fn domain(&self) -> &DomainSpec {
        match self {
            DiracSpec::TwoForm { domain, .. }
            | DiracSpec::Bivector { domain, .. }
            | DiracSpec::Distribution { domain, .. }
            | DiracSpec::Span { domain, .. } => domain,
        }
    }

    pub fn build(&self, names: &[String]) -> Result<DiracSpan> {
        let domain = self.domain().to_domain()?;
        let n = domain.dim();
        if names.len() != n {
            return Err(DiracError::dim(n, names.len(), "variable names"));
        }
        let polys = |v: &[PolySpec]| v.iter().map(|p| p.to_poly(names)).collect::<Result<Vec<_>>>();
        let pairs = |terms: &[PairTerm]| {
            terms
                .iter()
                .map(|t| Ok(((t.i, t.j), t.coeff.to_poly(names)?)))
                .collect::<Result<Vec<_>>>()
        };
        match self {
            DiracSpec::TwoForm { terms, .. } => {
                let w = KForm::from_terms(n, 2, pairs(terms)?.into_iter().map(|((i, j), c)| (vec![i, j], c)))?;
                DiracSpan::from_2form(&w, domain)
            }
            DiracSpec::Bivector { terms, .. } => {
                let pi = Bivector::from_terms(n, pairs(terms)?)?;
                DiracSpan::from_bivector(&pi, domain)
            }
            DiracSpec::Distribution {
                vectors,
                annihilator,
                max_degree,
                ..
            } => {
                let d = vectors
                    .iter()
                    .map(|v| VectorField::new(polys(v)?))
                    .collect::<Result<Vec<_>>>()?;
                let ann = annihilator
                    .as_ref()
                    .map(|a| a.iter().map(|f| KForm::one_form(&polys(f)?)).collect::<Result<Vec<_>>>())
                    .transpose()?;
                DiracSpan::from_distribution(&d, ann.as_deref(), domain, *max_degree)
            }
            DiracSpec::Span { sections, .. } => {
                let secs = sections
                    .iter()
                    .map(|s| CourantSection::new(VectorField::new(polys(&s.x)?)?, KForm::one_form(&polys(&s.alpha)?)?))
                    .collect::<Result<Vec<_>>>()?;
                DiracSpan::new(SpanKind::Span, secs, domain)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ActionDto {
    pub group: GroupKind,
    pub generators: Vec<Vec<PolySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct LevelSetSpec {
    pub c: Vec<RatSpec>,
    /// Parameter names; defaults to `t` or `t0, t1, ...`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<String>>,
    /// `phi_c`, one polynomial in the parameters per ambient coordinate.
    pub map: Vec<PolySpec>,
    pub domain: DomainSpec,
    /// `Q_c: mu^{-1}(c) -> M//G` in the parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<Vec<PolySpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Cells per axis on the coarse level.
    pub resolution: usize,
    #[serde(default = "default_refinements")]
    pub refinements: usize,
}

fn default_refinements() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub theta0: f64,
    pub r0: f64,
    #[serde(default = "default_velocity")]
    pub velocity: f64,
}

fn default_velocity() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ObstructionSpec {
    /// Leaf-form profile `f(r)`.
    pub f: PolySpec,
    pub interval: [RatSpec; 2],
    #[serde(default = "default_scale")]
    pub curvature_scale: f64,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk: Option<DiskSpec>,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_scale() -> f64 {
    1.0
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

fn default_step() -> f64 {
    0.01
}

pub fn r_names() -> Vec<String> {
    vec!["r".to_string()]
}

impl ObstructionSpec {
    pub fn profile(&self) -> Result<Poly> {
        self.f.to_poly(&r_names())
    }

    pub fn interval(&self) -> Result<[Q; 2]> {
        Ok([self.interval[0].to_q()?, self.interval[1].to_q()?])
    }

    pub fn atlas(&self) -> Result<SphereAtlas> {
        SphereAtlas::new(self.curvature_scale, self.quadrature_order)
    }

    pub fn disk(&self) -> Option<DiskFamily> {
        self.disk.as_ref().map(|d| DiskFamily {
            theta0: d.theta0,
            r0: d.r0,
            velocity: d.velocity,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Ambient coordinate names; defaults to `x, y, z, w` or `x0, x1, ...`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirac: Option<DiracSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment: Option<Vec<PolySpec>>,
    /// Invariant quotient map `M -> M/G`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<Vec<PolySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_set: Option<LevelSetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionSpec>,
}

/// Validated pieces of a scene; the Dirac structure itself is built
/// separately so that failures can be reported rather than propagated.
#[derive(Clone, Debug)]
pub struct SceneParts {
    pub names: Vec<String>,
    pub domain: Domain,
    pub action: Option<ActionSpec>,
    pub moment: Option<MomentMap>,
    pub quotient_map: Option<PolyMap>,
    pub level: Option<LevelSet>,
    pub level_quotient: Option<PolyMap>,
    pub grid: Option<GridSpec>,
}

impl Scene {
    pub fn dirac_spec(&self) -> Result<&DiracSpec> {
        self.dirac
            .as_ref()
            .ok_or_else(|| DiracError::Invalid("scene has no \"dirac\" block".into()))
    }

    pub fn names(&self) -> Result<Vec<String>> {
        let n = self.dirac_spec()?.domain().min.len();
        match &self.vars {
            Some(v) if v.len() != n => Err(DiracError::dim(n, v.len(), "variable names")),
            Some(v) => Ok(v.clone()),
            None => Ok(default_names(n)),
        }
    }

    pub fn build_dirac(&self) -> Result<DiracSpan> {
        self.dirac_spec()?.build(&self.names()?)
    }

    /// Parses every optional block and checks dimensions and the symbolic
    /// level-set identity. Mathematical properties are left to the caller.
    pub fn parts(&self) -> Result<SceneParts> {
        let names = self.names()?;
        let domain = self.dirac_spec()?.domain().to_domain()?;
        let n = names.len();
        let polys = |v: &[PolySpec], names: &[String]| v.iter().map(|p| p.to_poly(names)).collect::<Result<Vec<_>>>();
        let action = self
            .action
            .as_ref()
            .map(|a| {
                let gens = a
                    .generators
                    .iter()
                    .map(|g| VectorField::new(polys(g, &names)?))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(g) = gens.iter().find(|g| g.dim() != n) {
                    return Err(DiracError::dim(n, g.dim(), "generator dimension"));
                }
                ActionSpec::new(a.group, gens, a.period)
            })
            .transpose()?;
        let moment = self
            .moment
            .as_ref()
            .map(|m| polys(m, &names).map(MomentMap::new))
            .transpose()?;
        if let (Some(a), Some(m)) = (&action, &moment) {
            if a.k() != m.k() {
                return Err(DiracError::dim(a.k(), m.k(), "moment map components"));
            }
        }
        let quotient_map = self
            .quotient
            .as_ref()
            .map(|q| PolyMap::new(n, polys(q, &names)?))
            .transpose()?;
        let (level, level_quotient) = match &self.level_set {
            None => (None, None),
            Some(ls) => {
                let param_domain = ls.domain.to_domain()?;
                let m = param_domain.dim();
                let params = match &ls.params {
                    Some(p) if p.len() != m => return Err(DiracError::dim(m, p.len(), "level-set parameter names")),
                    Some(p) => p.clone(),
                    None if m == 1 => vec!["t".to_string()],
                    None => (0..m).map(|i| format!("t{i}")).collect(),
                };
                let map = PolyMap::new(m, polys(&ls.map, &params)?)?;
                if map.target_dim() != n {
                    return Err(DiracError::dim(n, map.target_dim(), "level-set map target"));
                }
                let c = ls.c.iter().map(RatSpec::to_q).collect::<Result<Vec<_>>>()?;
                let qc = ls
                    .quotient
                    .as_ref()
                    .map(|q| PolyMap::new(m, polys(q, &params)?))
                    .transpose()?;
                (Some(LevelSet { c, map, param_domain }), qc)
            }
        };
        Ok(SceneParts {
            names,
            domain,
            action,
            moment,
            quotient_map,
            level,
            level_quotient,
            grid: self.grid.clone(),
        })
    }
}

impl SceneParts {
    pub fn require_action(&self) -> Result<&ActionSpec> {
        self.action
            .as_ref()
            .ok_or_else(|| DiracError::Invalid("scene has no \"action\" block".into()))
    }

    pub fn require_moment(&self) -> Result<&MomentMap> {
        self.moment
            .as_ref()
            .ok_or_else(|| DiracError::Invalid("scene has no \"moment\" block".into()))
    }

    pub fn require_level(&self) -> Result<&LevelSet> {
        self.level
            .as_ref()
            .ok_or_else(|| DiracError::Invalid("scene has no \"level_set\" block".into()))
    }

    pub fn require_level_quotient(&self) -> Result<&PolyMap> {
        self.level_quotient
            .as_ref()
            .ok_or_else(|| DiracError::Invalid("level set has no \"quotient\" map".into()))
    }

    /// Quotient presentation, verified against the action.
    pub fn quotient(&self) -> Result<QuotientPresentation> {
        let map = self
            .quotient_map
            .clone()
            .ok_or_else(|| DiracError::Invalid("scene has no \"quotient\" block".into()))?;
        QuotientPresentation::new(map, self.require_action()?)
    }

    /// Sample grid on the ambient domain with an optional resolution override.
    pub fn sample_grid(&self, resolution: Option<usize>) -> Result<SampleGrid> {
        let spec = self.grid.clone().unwrap_or(GridSpec {
            resolution: 8,
            refinements: 1,
        });
        SampleGrid::new(self.domain.clone(), resolution.unwrap_or(spec.resolution), spec.refinements)
    }
}
