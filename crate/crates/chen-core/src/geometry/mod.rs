//! Concrete loops and loop families on round unit spheres: piecewise-geodesic
//! based loops, the sup metric, sweepouts, desuspended maps, concatenation
//! powers, Pontryagin products, and suplength/volume estimators.
//!
//! The basepoint is always the north pole (last coordinate 1). All loop
//! parametrizations are constant-speed; lengths are exact sums of geodesic
//! arcs, so `|gamma'|` is constant and quadrature aligned to breakpoints is
//! exact on the speed factors.

mod domain;
mod family;
mod loops;
mod maps;
mod sphere;

pub use domain::{Domain, DomainPoint, MeshCell};
pub use family::{constant_family, pontryagin_product, sweepout, LoopFamily, SliceRule};
pub use loops::{concat_power, geodesic_loop, loop_space_distance, rebuild, Loop};
pub use maps::{MapRule, MapSpec};
pub use sphere::{geodesic_distance, north_pole, slerp, SpherePoint};

pub(crate) use domain::det as domain_det;
pub(crate) use maps::gram_sigma1;
pub(crate) use sphere::{dot as vec_dot, norm as vec_norm, normalize as vec_normalize};

/// Desuspension of a based map along a sweepout: the family of loops
/// `u -> f o eta(u)`.
pub fn desuspend(map: MapSpec, family: LoopFamily) -> Result<LoopFamily, GeometryError> {
    family.mapped(map)
}

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("coordinates do not lie on the unit sphere (norm {norm})")]
    NotOnSphere { norm: f64 },
    #[error("consecutive control points are antipodal")]
    AntipodalSegment,
    #[error("loop is not based at the north pole")]
    NotBasedAtX0,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("families are based at different basepoints or spheres")]
    BasepointMismatch,
    #[error("map does not fix the basepoint")]
    MapNotBased,
    #[error("unknown map expression `{0}`")]
    UnknownMap(String),
}
