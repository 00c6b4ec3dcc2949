use thiserror::Error;

use crate::lindirac::GenVector;
use crate::rational::Q;

/// Errors raised by the geometric layers of the crate.
#[derive(Debug, Error)]
pub enum DiracError {
    #[error("dimension mismatch: expected {expected}, found {found} ({context})")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        context: &'static str,
    },

    #[error("basis of {found} vectors has rank {rank}; rank-deficient bases are rejected")]
    RankDeficient { found: usize, rank: usize },

    #[error("fiber at {} is degenerate (rank {rank} < {dim})", pt(.point))]
    DegenerateFiber {
        point: Vec<Q>,
        rank: usize,
        dim: usize,
        /// The evaluated, rank-deficient spanning family.
        basis: Vec<GenVector>,
    },

    #[error("point {} lies outside the domain box", pt(.point))]
    OutsideDomain { point: Vec<Q> },

    #[error("spanning sections are not isotropic: <e{i}, e{j}>_+ = {witness}")]
    NotIsotropic { i: usize, j: usize, witness: String },

    #[error("expected a maximal isotropic subspace of dimension {dim}, got {got}")]
    NotMaximal { dim: usize, got: usize },

    #[error("2-form is not closed: d B has a nonzero coefficient {witness}")]
    NotClosed { witness: String },

    #[error("no polynomial annihilator basis found up to degree {max_degree}")]
    NoAnnihilator { max_degree: u32 },

    #[error("distribution does not have constant rank {expected} (rank {found} at a sample point)")]
    DistributionRank { expected: usize, found: usize },

    #[error("vector {which} is not in the image of the anchor at {}", pt(.point))]
    NotInAnchorImage { which: &'static str, point: Vec<Q> },

    #[error("generators do not commute: [xi_{a}, xi_{b}] = {witness}")]
    NonAbelian { a: usize, b: usize, witness: String },

    #[error("map is not invariant under the action: xi_{generator}(component {component}) = {witness}")]
    NotInvariant {
        generator: usize,
        component: usize,
        witness: String,
    },

    #[error("parametrization is not a level set: mu_{component} o phi - c = {witness}")]
    NotLevelSet { component: usize, witness: String },

    #[error("level set is empty on the domain")]
    EmptyLevelSet,

    #[error("level set parametrization required but not supplied")]
    MissingParametrization,

    #[error("differential of {which} has rank {rank} < {expected} at {}", pt(.point))]
    DifferentialRank {
        which: &'static str,
        rank: usize,
        expected: usize,
        point: Vec<Q>,
    },

    #[error("moment map is not regular at the point {} (j has rank {rank} < {k})", pt(.point))]
    NotRegular { point: Vec<Q>, rank: usize, k: usize },

    #[error("action is not tangent to the level set at {}", pt(.point))]
    NotTangent { point: Vec<Q> },

    #[error("quotient maps are incompatible: {0}")]
    IncompatibleQuotient(String),

    #[error("homotopy endpoint condition violated: {0}")]
    HomotopyEndpoints(String),

    #[error("quadrature did not converge: estimates {estimates:?}")]
    NoConvergence { estimates: Vec<f64> },

    #[error("invalid input: {0}")]
    Invalid(String),
}

fn pt(p: &[Q]) -> String {
    let c: Vec<String> = p.iter().map(crate::rational::fmt_q).collect();
    format!("({})", c.join(", "))
}

impl DiracError {
    /// Malformed or inconsistent input, as opposed to a mathematical
    /// property failing on well-formed data.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            DiracError::DimensionMismatch { .. }
                | DiracError::OutsideDomain { .. }
                | DiracError::MissingParametrization
                | DiracError::Invalid(_)
        )
    }

    pub(crate) fn dim(expected: usize, found: usize, context: &'static str) -> Self {
        DiracError::DimensionMismatch {
            expected,
            found,
            context,
        }
    }

    pub(crate) fn degenerate(point: &[Q], rank: usize, dim: usize, family: &[GenVector]) -> Self {
        DiracError::DegenerateFiber {
            point: point.to_vec(),
            rank,
            dim,
            basis: family.to_vec(),
        }
    }
}

pub type Result<T, E = DiracError> = std::result::Result<T, E>;
