//! Parameter domains for loop families: spheres (hyperspherical chart),
//! products, and the one-point domain. Meshes provide cell centers with
//! oriented orthonormal frames and Riemannian cell volumes.

use super::sphere::normalize;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A closed parameter domain from the fixed catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// One point, dimension 0.
    Point,
    /// The round sphere S^dim, charted by hyperspherical angles
    /// (polar angles in [0, pi], azimuth in [0, 2pi)).
    Sphere { dim: usize },
    /// Product domain; chart coordinates are concatenated.
    Product(Box<Domain>, Box<Domain>),
}

/// Chart coordinates of a domain point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainPoint(pub Vec<f64>);

/// A mesh cell: center, oriented orthonormal frame (as chart velocities) and
/// Riemannian volume.
#[derive(Debug, Clone)]
pub struct MeshCell {
    pub center: DomainPoint,
    /// Chart-coordinate velocities of unit round length, mutually orthogonal,
    /// ordered so the frame is positively oriented.
    pub frame: Vec<Vec<f64>>,
    pub volume: f64,
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Point => 0,
            Domain::Sphere { dim } => *dim,
            Domain::Product(a, b) => a.dim() + b.dim(),
        }
    }

    pub fn chart_len(&self) -> usize {
        self.dim()
    }

    /// Embed a chart point of a sphere domain into R^{dim+1}. For products
    /// this is not defined; use [`Domain::split`] first.
    pub fn embed_sphere(coords: &[f64]) -> Vec<f64> {
        // recursive: (sin a1 * embed(a2..), cos a1); S^1 -> (cos a, sin a)
        match coords.len() {
            0 => vec![1.0],
            1 => vec![coords[0].cos(), coords[0].sin()],
            _ => {
                let inner = Self::embed_sphere(&coords[1..]);
                let (s, c) = coords[0].sin_cos();
                let mut out: Vec<f64> = inner.iter().map(|x| s * x).collect();
                out.push(c);
                out
            }
        }
    }

    pub fn split<'a>(&self, coords: &'a [f64]) -> (&'a [f64], &'a [f64], &Domain, &Domain) {
        match self {
            Domain::Product(a, b) => {
                let k = a.chart_len();
                (&coords[..k], &coords[k..], a, b)
            }
            _ => panic!("split on a non-product domain"),
        }
    }

    /// Mesh cells covering the domain. `res` controls the subdivision: a
    /// sphere uses `res` polar intervals per polar angle and `2 res` azimuth
    /// intervals; products take the product mesh.
    pub fn mesh(&self, res: usize) -> Vec<MeshCell> {
        match self {
            Domain::Point => vec![MeshCell {
                center: DomainPoint(Vec::new()),
                frame: Vec::new(),
                volume: 1.0,
            }],
            Domain::Sphere { dim } => sphere_mesh(*dim, res),
            Domain::Product(a, b) => {
                let ma = a.mesh(res);
                let mb = b.mesh(res);
                let mut out = Vec::with_capacity(ma.len() * mb.len());
                for ca in &ma {
                    for cb in &mb {
                        let mut coords = ca.center.0.clone();
                        coords.extend_from_slice(&cb.center.0);
                        let mut frame = Vec::new();
                        for f in &ca.frame {
                            let mut v = f.clone();
                            v.extend(std::iter::repeat_n(0.0, cb.center.0.len()));
                            frame.push(v);
                        }
                        for f in &cb.frame {
                            let mut v = vec![0.0; ca.center.0.len()];
                            v.extend_from_slice(f);
                            frame.push(v);
                        }
                        out.push(MeshCell {
                            center: DomainPoint(coords),
                            frame,
                            volume: ca.volume * cb.volume,
                        });
                    }
                }
                out
            }
        }
    }

    /// Axis grids of the chart rectangle (corner lattice used by the
    /// suplength and volume estimators). Boolean marks wrapping axes.
    pub fn lattice_axes(&self, res: usize) -> Vec<(Vec<f64>, bool)> {
        match self {
            Domain::Point => Vec::new(),
            Domain::Sphere { dim } => {
                let mut axes = Vec::new();
                for _ in 0..dim.saturating_sub(1) {
                    let coords: Vec<f64> = (0..=res).map(|i| PI * i as f64 / res as f64).collect();
                    axes.push((coords, false));
                }
                let m = 2 * res;
                let coords: Vec<f64> = (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect();
                axes.push((coords, true));
                axes
            }
            Domain::Product(a, b) => {
                let mut axes = a.lattice_axes(res);
                axes.extend(b.lattice_axes(res));
                axes
            }
        }
    }

    /// Oriented orthonormal frame (chart velocities) at an arbitrary chart
    /// point; coordinates must be away from the polar degeneracies.
    pub fn frame_at(&self, coords: &[f64]) -> Vec<Vec<f64>> {
        match self {
            Domain::Point => Vec::new(),
            Domain::Sphere { .. } => sphere_frame(coords),
            Domain::Product(a, b) => {
                let k = a.chart_len();
                let mut frame = Vec::new();
                for f in a.frame_at(&coords[..k]) {
                    let mut v = f;
                    v.extend(std::iter::repeat_n(0.0, coords.len() - k));
                    frame.push(v);
                }
                for f in b.frame_at(&coords[k..]) {
                    let mut v = vec![0.0; k];
                    v.extend(f);
                    frame.push(v);
                }
                frame
            }
        }
    }

    /// Reflect the first sphere factor (azimuth negation); reverses the
    /// orientation of the domain.
    pub fn reflect_chart(&self, coords: &[f64]) -> Vec<f64> {
        let mut out = coords.to_vec();
        match self {
            Domain::Point => {}
            Domain::Sphere { dim } => {
                out[dim - 1] = -out[dim - 1];
            }
            Domain::Product(a, _) => {
                let k = a.chart_len();
                let head = a.reflect_chart(&coords[..k]);
                out[..k].copy_from_slice(&head);
            }
        }
        out
    }
}

fn sphere_mesh(dim: usize, res: usize) -> Vec<MeshCell> {
    assert!(dim >= 1);
    // angle grids: polar angles get `res` cells over [0, pi], azimuth 2*res
    let mut grids: Vec<Vec<f64>> = Vec::new();
    for _ in 0..dim - 1 {
        grids.push((0..res).map(|i| PI * (i as f64 + 0.5) / res as f64).collect());
    }
    let m = 2 * res;
    grids.push((0..m).map(|i| 2.0 * PI * (i as f64 + 0.5) / m as f64).collect());
    let steps: Vec<f64> = (0..dim - 1)
        .map(|_| PI / res as f64)
        .chain([2.0 * PI / m as f64])
        .collect();

    let mut out = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        let coords: Vec<f64> = idx.iter().zip(&grids).map(|(i, g)| g[*i]).collect();
        out.push(make_cell(&coords, &steps));
        // advance multi-index
        let mut axis = dim;
        while axis > 0 {
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < grids[axis].len() {
                break;
            }
            idx[axis] = 0;
            if axis == 0 {
                return out;
            }
        }
    }
}

fn make_cell(coords: &[f64], steps: &[f64]) -> MeshCell {
    let dim = coords.len();
    // |d/d a_j| = prod_{i<j} sin(a_i); volume element = prod of those * steps
    let mut scale = vec![1.0; dim];
    for j in 1..dim {
        scale[j] = scale[j - 1] * coords[j - 1].sin();
    }
    let volume: f64 = steps
        .iter()
        .zip(&scale)
        .map(|(h, s)| h * s)
        .product();
    MeshCell {
        center: DomainPoint(coords.to_vec()),
        frame: sphere_frame(coords),
        volume,
    }
}

fn sphere_frame(coords: &[f64]) -> Vec<Vec<f64>> {
    let dim = coords.len();
    let mut scale = vec![1.0; dim];
    for j in 1..dim {
        scale[j] = scale[j - 1] * coords[j - 1].sin();
    }
    let mut frame: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut v = vec![0.0; dim];
            v[j] = 1.0 / scale[j];
            v
        })
        .collect();
    // orient: det[p, f_1, .., f_dim] > 0 in the embedding
    if dim >= 2 && frame_det(coords, &frame) < 0.0 {
        frame.swap(0, 1);
    }
    frame
}

/// Determinant of [p, pushforward(f_1), .., pushforward(f_dim)] where the
/// pushforward is a central finite difference of the embedding.
fn frame_det(coords: &[f64], frame: &[Vec<f64>]) -> f64 {
    let h = 1e-5;
    let p = Domain::embed_sphere(coords);
    let mut rows = vec![p.clone()];
    for v in frame {
        let plus: Vec<f64> = coords.iter().zip(v).map(|(c, d)| c + h * d).collect();
        let minus: Vec<f64> = coords.iter().zip(v).map(|(c, d)| c - h * d).collect();
        let pp = normalize(&Domain::embed_sphere(&plus));
        let pm = normalize(&Domain::embed_sphere(&minus));
        rows.push(pp.iter().zip(&pm).map(|(a, b)| (a - b) / (2.0 * h)).collect());
    }
    det(&rows)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut sign = 1.0;
    let mut out = 1.0;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|a, b| m[*a][k].abs().partial_cmp(&m[*b][k].abs()).unwrap())
            .unwrap();
        if m[pivot][k].abs() < 1e-300 {
            return 0.0;
        }
        if pivot != k {
            m.swap(pivot, k);
            sign = -sign;
        }
        out *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let delta = f * m[k][j];
                m[i][j] -= delta;
            }
        }
    }
    sign * out
}
