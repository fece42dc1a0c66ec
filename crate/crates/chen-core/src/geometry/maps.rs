//! Catalog of smooth basepoint-preserving maps between spheres, with sampled
//! Lipschitz estimates and finite-difference tangential differentials.

use super::domain::Domain;
use super::sphere::{geodesic_distance, normalize, north_pole};
use super::GeometryError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MapRule {
    /// Identity on S^n.
    Identity,
    /// Negate the first coordinate; degree -1, fixes the basepoint.
    Reflection,
    /// Rotation by `angle` in the (x1, x2) plane; an isometry fixing the
    /// basepoint.
    Rotation { angle: f64 },
    /// k-fold power of the (x1, x2) circle factor: the (n-1)-fold suspension
    /// of z -> z^k, degree k, Lipschitz constant k.
    CirclePower { k: i32 },
    /// The quaternionic fibration S^3 -> S^2, post-rotated so the basepoint
    /// maps to the basepoint.
    Hopf,
    /// Constant at the basepoint of the target.
    Constant { target_dim: usize },
    /// Composition: apply `second` after `first`.
    Compose(Box<MapSpec>, Box<MapSpec>),
}

/// A smooth map between unit spheres with its sampled Lipschitz upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rule: MapRule,
    /// Largest sampled singular value of the tangential differential.
    pub lipschitz: f64,
}

const FD_STEP: f64 = 1e-6;

impl MapSpec {
    pub fn identity(n: usize) -> Self {
        Self::build(n, n, MapRule::Identity)
    }

    pub fn reflection(n: usize) -> Self {
        Self::build(n, n, MapRule::Reflection)
    }

    pub fn rotation(n: usize, angle: f64) -> Self {
        Self::build(n, n, MapRule::Rotation { angle })
    }

    pub fn circle_power(n: usize, k: i32) -> Self {
        Self::build(n, n, MapRule::CirclePower { k })
    }

    pub fn hopf() -> Self {
        Self::build(3, 2, MapRule::Hopf)
    }

    pub fn constant(source_dim: usize, target_dim: usize) -> Self {
        Self::build(source_dim, target_dim, MapRule::Constant { target_dim })
    }

    pub fn compose(outer: MapSpec, inner: MapSpec) -> Result<Self, GeometryError> {
        if inner.target_dim != outer.source_dim {
            return Err(GeometryError::DimensionMismatch {
                expected: outer.source_dim,
                got: inner.target_dim,
            });
        }
        Ok(Self::build(
            inner.source_dim,
            outer.target_dim,
            MapRule::Compose(Box::new(outer), Box::new(inner)),
        ))
    }

    fn build(source_dim: usize, target_dim: usize, rule: MapRule) -> Self {
        let mut spec = Self {
            source_dim,
            target_dim,
            rule,
            lipschitz: 0.0,
        };
        spec.lipschitz = spec.sample_lipschitz(12);
        spec
    }

    /// Parse a map expression: atoms `identity`, `reflection`, `constant`,
    /// `hopf`, `zpow:<k>`, `rotz:<radians>`, composed left-to-right with `*`
    /// (`a*b` applies `b` first). `n` is the source sphere dimension.
    pub fn parse(expr: &str, n: usize) -> Result<Self, GeometryError> {
        let mut parts = expr.split('*').rev();
        let first = parts
            .next()
            .ok_or_else(|| GeometryError::UnknownMap(expr.to_string()))?;
        let mut spec = Self::parse_atom(first.trim(), n)?;
        for part in parts {
            let outer = Self::parse_atom(part.trim(), spec.target_dim)?;
            spec = Self::compose(outer, spec)?;
        }
        Ok(spec)
    }

    fn parse_atom(atom: &str, n: usize) -> Result<Self, GeometryError> {
        if let Some(k) = atom.strip_prefix("zpow:") {
            let k: i32 = k
                .parse()
                .map_err(|_| GeometryError::UnknownMap(atom.to_string()))?;
            return Ok(Self::circle_power(n, k));
        }
        if let Some(a) = atom.strip_prefix("rotz:") {
            let angle: f64 = a
                .parse()
                .map_err(|_| GeometryError::UnknownMap(atom.to_string()))?;
            return Ok(Self::rotation(n, angle));
        }
        match atom {
            "identity" => Ok(Self::identity(n)),
            "reflection" => Ok(Self::reflection(n)),
            "hopf" => {
                if n != 3 {
                    return Err(GeometryError::DimensionMismatch { expected: 3, got: n });
                }
                Ok(Self::hopf())
            }
            "constant" => Ok(Self::constant(n, n)),
            other => Err(GeometryError::UnknownMap(other.to_string())),
        }
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        debug_assert_eq!(p.len(), self.source_dim + 1);
        match &self.rule {
            MapRule::Identity => p.to_vec(),
            MapRule::Reflection => {
                let mut q = p.to_vec();
                q[0] = -q[0];
                q
            }
            MapRule::Rotation { angle } => {
                let (s, c) = angle.sin_cos();
                let mut q = p.to_vec();
                q[0] = c * p[0] - s * p[1];
                q[1] = s * p[0] + c * p[1];
                q
            }
            MapRule::CirclePower { k } => circle_power_apply(p, *k),
            MapRule::Hopf => hopf_apply(p),
            MapRule::Constant { target_dim } => north_pole(*target_dim).coords().to_vec(),
            MapRule::Compose(outer, inner) => outer.apply(&inner.apply(p)),
        }
    }

    /// Tangential differential by central differences along the great circle
    /// through `p` in direction `v` (v tangent at p, |v| arbitrary).
    pub fn differential(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        let scale = super::sphere::norm(v);
        if scale == 0.0 {
            return vec![0.0; self.target_dim + 1];
        }
        let h = FD_STEP;
        let step = |sgn: f64| -> Vec<f64> {
            let moved: Vec<f64> = p.iter().zip(v).map(|(x, d)| x + sgn * h * d).collect();
            self.apply(&normalize(&moved))
        };
        let plus = step(1.0);
        let minus = step(-1.0);
        plus.iter()
            .zip(&minus)
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect()
    }

    pub fn is_based(&self) -> bool {
        let image = self.apply(north_pole(self.source_dim).coords());
        geodesic_distance(&image, north_pole(self.target_dim).coords()) < 1e-9
    }

    /// Largest singular value of the tangential differential over a sample
    /// grid; an observed lower bound used as the Lipschitz estimate, to be
    /// extended by the max over any further points a check visits.
    pub fn sample_lipschitz(&self, res: usize) -> f64 {
        let domain = Domain::Sphere {
            dim: self.source_dim,
        };
        let mut best: f64 = 0.0;
        for cell in domain.mesh(res) {
            let p = Domain::embed_sphere(&cell.center.0);
            best = best.max(self.local_dilation(&p, &cell_frame_embedded(&cell, &p)));
        }
        best
    }

    /// sigma_1 of the differential at p, computed from an orthonormal tangent
    /// frame via the Gram matrix.
    pub fn local_dilation(&self, p: &[f64], frame: &[Vec<f64>]) -> f64 {
        let images: Vec<Vec<f64>> = frame.iter().map(|v| self.differential(p, v)).collect();
        gram_sigma1(&images)
    }
}

/// Orthonormal tangent frame at the embedded point of a mesh cell.
fn cell_frame_embedded(cell: &super::domain::MeshCell, p: &[f64]) -> Vec<Vec<f64>> {
    let h = 1e-5;
    cell.frame
        .iter()
        .map(|v| {
            let plus: Vec<f64> = cell.center.0.iter().zip(v).map(|(c, d)| c + h * d).collect();
            let minus: Vec<f64> = cell.center.0.iter().zip(v).map(|(c, d)| c - h * d).collect();
            let pp = normalize(&Domain::embed_sphere(&plus));
            let pm = normalize(&Domain::embed_sphere(&minus));
            let raw: Vec<f64> = pp.iter().zip(&pm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
            // project out the radial component and renormalize
            let r = super::sphere::dot(&raw, p);
            let t: Vec<f64> = raw.iter().zip(p).map(|(x, q)| x - r * q).collect();
            normalize(&t)
        })
        .collect()
}

/// Largest singular value of the column set via power iteration on the Gram
/// matrix. Deterministic.
pub(crate) fn gram_sigma1(columns: &[Vec<f64>]) -> f64 {
    let k = columns.len();
    if k == 0 {
        return 0.0;
    }
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = super::sphere::dot(&columns[i], &columns[j]);
        }
    }
    let mut x = vec![1.0 / (k as f64).sqrt(); k];
    let mut lambda = 0.0;
    for _ in 0..200 {
        let y: Vec<f64> = (0..k)
            .map(|i| (0..k).map(|j| gram[i][j] * x[j]).sum())
            .collect();
        let n = super::sphere::norm(&y);
        if n < 1e-300 {
            return 0.0;
        }
        lambda = n;
        x = y.iter().map(|v| v / n).collect();
    }
    lambda.sqrt()
}

fn circle_power_apply(p: &[f64], k: i32) -> Vec<f64> {
    let (x, y) = (p[0], p[1]);
    let rho = (x * x + y * y).sqrt();
    let mut q = p.to_vec();
    if rho < 1e-300 {
        q[0] = 0.0;
        q[1] = 0.0;
        return q;
    }
    // (x + iy)^k / rho^{k-1}
    let theta = y.atan2(x);
    let kk = k as f64;
    q[0] = rho * (kk * theta).cos();
    q[1] = rho * (kk * theta).sin();
    q
}

fn hopf_apply(p: &[f64]) -> Vec<f64> {
    let (x1, x2, x3, x4) = (p[0], p[1], p[2], p[3]);
    let raw = [
        2.0 * (x1 * x3 + x2 * x4),
        2.0 * (x2 * x3 - x1 * x4),
        x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4,
    ];
    // rotate by pi about the x-axis so the basepoint is fixed
    vec![raw[0], -raw[1], -raw[2]]
}
