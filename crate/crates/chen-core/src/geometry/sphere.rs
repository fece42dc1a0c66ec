//! Points and geodesics on the round unit sphere S^n in R^{n+1}.

use super::GeometryError;
use serde::{Deserialize, Serialize};

const UNIT_TOL: f64 = 1e-9;

/// A point on S^n, stored as its unit vector in R^{n+1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Normalizes the input; rejects vectors far from the sphere.
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        let norm = norm(&coords);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(GeometryError::NotOnSphere { norm });
        }
        let coords = coords.iter().map(|c| c / norm).collect();
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Basepoint of S^n: the north pole (0, ..., 0, 1).
pub fn north_pole(n: usize) -> SpherePoint {
    let mut coords = vec![0.0; n + 1];
    coords[n] = 1.0;
    SpherePoint { coords }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn normalize(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|c| c / n).collect()
}

/// Geodesic (angular) distance between unit vectors.
pub fn geodesic_distance(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

/// Constant-speed geodesic from `a` to `b` at fraction `s` in [0, 1].
/// The endpoints must not be antipodal.
pub fn slerp(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    let omega = geodesic_distance(a, b);
    if omega < 1e-14 {
        return a.to_vec();
    }
    let sin_omega = omega.sin();
    let ca = ((1.0 - s) * omega).sin() / sin_omega;
    let cb = (s * omega).sin() / sin_omega;
    a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
}
