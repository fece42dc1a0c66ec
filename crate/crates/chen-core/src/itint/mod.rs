//! Numerical evaluation of iterated integrals on loop families: quadrature
//! over ordered simplices, pairings with domain fundamental classes, degree
//! and Hopf functionals with independent verification oracles, norm-bound
//! checks and sharpness scans.

mod bounds;
mod eval;
mod forms;
mod functionals;
mod oracles;
mod quadrature;
mod sharpness;

pub use bounds::{
    check_length_bound, great_circle_parameter, lipschitz_pullback_check, BoundReport,
    PullbackReport,
};
pub use eval::{eval_iterated_integral, pair, pairing_volume_bound, PairingResult, PairingSummand};
pub use forms::{sphere_volume, FormKind, FormSpec};
pub use functionals::{degree_via_loops, hopf_via_loops};
pub use oracles::{degree_preimage_oracle, hopf_linking_oracle};
pub use quadrature::QuadratureRule;
pub use sharpness::{sharpness_scan, ScanMode, SharpnessRow, SharpnessTable};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ItintError {
    #[error("frame arity mismatch: form degrees require {expected} vectors, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("form target S^{form} does not match family target S^{family}")]
    TargetMismatch { form: usize, family: usize },
    #[error("total form degree {form_degree} does not match domain dimension {domain_dim}")]
    DegreeMismatch { form_degree: usize, domain_dim: usize },
    #[error("norm bound violated: ratio {ratio} at sample {sample}")]
    BoundViolated { ratio: f64, sample: usize },
    #[error("geometry: {0}")]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error("{0}")]
    Unsupported(String),
}

/// Resolution and tolerance knobs for all numeric operations. The defaults
/// are the base mesh used by the acceptance suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericConfig {
    /// Domain mesh resolution (polar intervals; azimuth uses twice this).
    pub domain_res: usize,
    /// Quadrature subdivisions per declared time piece.
    pub time_refine: usize,
    /// Samples per time piece when slices are materialized as loops.
    pub slice_samples: usize,
    /// Lattice resolution for suplength/volume estimators.
    pub lattice_res: usize,
    /// Chart-coordinate step for domain finite differences.
    pub fd_domain: f64,
    /// Time step for velocity finite differences.
    pub fd_time: f64,
    /// Relative slack accepted by inequality checks.
    pub bound_slack: f64,
    /// Absolute tolerance target for pairings at the base mesh.
    pub pairing_tol: f64,
    /// Seed for sampled frames and points.
    pub seed: u64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            domain_res: 48,
            time_refine: 48,
            slice_samples: 16,
            lattice_res: 24,
            fd_domain: 1e-5,
            fd_time: 1e-6,
            bound_slack: 1e-9,
            pairing_tol: 1e-3,
            seed: 7,
        }
    }
}

impl NumericConfig {
    /// A coarser copy used for the refinement-based error estimate.
    pub(crate) fn halved(&self) -> Self {
        Self {
            domain_res: (self.domain_res / 2).max(4),
            time_refine: (self.time_refine / 2).max(4),
            ..self.clone()
        }
    }
}
