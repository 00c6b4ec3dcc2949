//! Dirac geometry on polynomial coordinate domains.
//!
//! The crate is layered bottom-up:
//!
//! - [`polycalc`]: exact polynomial exterior calculus (forms, vector fields, pullbacks);
//! - [`lindirac`]: pointwise maximal isotropic subspaces and their functorial operations;
//! - [`diracfield`]: global Dirac structures presented by polynomial spanning sections;
//! - [`hamaction`]: abelian actions, the `j`-map, moment maps and regularity;
//! - [`reduction`]: pointwise reduction, the smoothness probe and the reduction diamond;
//! - [`obstruction`]: curvature quadrature and the monodromy verdict for `S^2 x R` leaves.
//!
//! [`scene`] holds the JSON input format shared with the command-line tool and
//! [`presets`] the canonical scenes.

pub mod diracfield;
pub mod error;
pub mod grid;
pub mod hamaction;
pub mod linalg;
pub mod lindirac;
pub mod obstruction;
pub mod polycalc;
pub mod presets;
pub mod rational;
pub mod reduction;
pub mod scene;

pub use diracfield::{CourantSection, DiracSpan, SpanKind};
pub use error::{DiracError, Result};
pub use grid::{Domain, SampleGrid};
pub use hamaction::{ActionSpec, GroupKind, LevelSet, MomentMap};
pub use linalg::QMatrix;
pub use lindirac::{GenVector, LinearDirac};
pub use obstruction::{DiskFamily, Homotopy, MonodromyReport, Region, SphereAtlas, Verdict};
pub use polycalc::{Bivector, KForm, Poly, PolyMap, VectorField};
pub use rational::Q;
pub use reduction::{DiamondReport, QuotientPresentation, ReductionReport, SmoothnessVerdict};
pub use scene::Scene;
