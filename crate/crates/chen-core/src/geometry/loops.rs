//! Basepointed piecewise-geodesic loops with constant-speed parametrization.

use super::sphere::{geodesic_distance, north_pole, slerp, SpherePoint};
use super::GeometryError;
use serde::{Deserialize, Serialize};

const BASE_TOL: f64 = 1e-9;
const ANTIPODAL_TOL: f64 = 1e-9;

/// A based loop on S^n given by control points joined by geodesic arcs,
/// parametrized proportionally to arclength. Zero-length segments are dropped
/// from the parametrization; the constant loop at the basepoint is allowed
/// and has length 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Loop {
    n: usize,
    points: Vec<SpherePoint>,
    #[serde(skip)]
    segments: Vec<Segment>,
    #[serde(skip)]
    length: f64,
}

#[derive(Debug, Clone, Default)]
struct Segment {
    from: usize,
    to: usize,
    arc: f64,
    t_start: f64,
    t_end: f64,
}

/// Build a loop from control points. The first and last point must be the
/// north pole; consecutive points must not be antipodal.
pub fn geodesic_loop(points: Vec<SpherePoint>) -> Result<Loop, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::NotBasedAtX0);
    }
    let n = points[0].dim();
    let x0 = north_pole(n);
    for p in &points {
        if p.dim() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n + 1,
                got: p.dim() + 1,
            });
        }
    }
    let based = |p: &SpherePoint| geodesic_distance(p.coords(), x0.coords()) < BASE_TOL;
    if !based(&points[0]) || !based(points.last().unwrap()) {
        return Err(GeometryError::NotBasedAtX0);
    }
    let mut arcs = Vec::with_capacity(points.len().saturating_sub(1));
    for w in points.windows(2) {
        let d = geodesic_distance(w[0].coords(), w[1].coords());
        if d > std::f64::consts::PI - ANTIPODAL_TOL {
            return Err(GeometryError::AntipodalSegment);
        }
        arcs.push(d);
    }
    let length: f64 = arcs.iter().sum();
    let mut segments = Vec::new();
    if length > 0.0 {
        let mut acc = 0.0;
        for (i, arc) in arcs.iter().enumerate() {
            if *arc == 0.0 {
                continue;
            }
            let t_start = acc / length;
            acc += arc;
            let t_end = acc / length;
            segments.push(Segment {
                from: i,
                to: i + 1,
                arc: *arc,
                t_start,
                t_end,
            });
        }
        if let Some(last) = segments.last_mut() {
            last.t_end = 1.0;
        }
    }
    Ok(Loop {
        n,
        points,
        segments,
        length,
    })
}

impl Loop {
    pub fn sphere_dim(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn control_points(&self) -> &[SpherePoint] {
        &self.points
    }

    /// Parameter values of the control points (breakpoints of the loop).
    pub fn control_times(&self) -> Vec<f64> {
        let mut times = vec![0.0];
        times.extend(self.segments.iter().map(|s| s.t_end));
        times
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let t = t.rem_euclid(1.0);
        if self.segments.is_empty() {
            return self.points[0].coords().to_vec();
        }
        let seg = self.segment_at(t);
        let s = (t - seg.t_start) / (seg.t_end - seg.t_start);
        slerp(
            self.points[seg.from].coords(),
            self.points[seg.to].coords(),
            s,
        )
    }

    /// Velocity at time t (constant magnitude = length away from breakpoints).
    pub fn velocity(&self, t: f64) -> Vec<f64> {
        let t = t.rem_euclid(1.0);
        if self.segments.is_empty() {
            return vec![0.0; self.n + 1];
        }
        let seg = self.segment_at(t);
        let s = (t - seg.t_start) / (seg.t_end - seg.t_start);
        let a = self.points[seg.from].coords();
        let b = self.points[seg.to].coords();
        let omega = seg.arc;
        if omega < 1e-14 {
            return vec![0.0; self.n + 1];
        }
        let sin_omega = omega.sin();
        // d/ds slerp, scaled by ds/dt = 1/(t_end - t_start)
        let scale = 1.0 / (seg.t_end - seg.t_start);
        let ca = -omega * ((1.0 - s) * omega).cos() / sin_omega * scale;
        let cb = omega * (s * omega).cos() / sin_omega * scale;
        a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
    }

    fn segment_at(&self, t: f64) -> &Segment {
        let idx = self
            .segments
            .partition_point(|s| s.t_end < t)
            .min(self.segments.len() - 1);
        &self.segments[idx]
    }
}

/// The loop traversed L times: control polygon repeated, junction basepoints
/// deduplicated. Length is exactly L times the input length.
pub fn concat_power(gamma: &Loop, l: u32) -> Loop {
    assert!(l >= 1, "concatenation power must be at least 1");
    let mut points = Vec::new();
    for rep in 0..l {
        let skip = if rep == 0 { 0 } else { 1 };
        points.extend(gamma.points.iter().skip(skip).cloned());
    }
    geodesic_loop(points).expect("power of a valid loop is valid")
}

/// Sup-metric distance: the largest pointwise geodesic distance, sampled at
/// the union of both loops' control times. Exact for loops sharing control
/// times.
pub fn loop_space_distance(a: &Loop, b: &Loop) -> f64 {
    let mut times = a.control_times();
    times.extend(b.control_times());
    times.sort_by(|x, y| x.partial_cmp(y).unwrap());
    times.dedup();
    times
        .iter()
        .map(|t| geodesic_distance(&a.eval(*t), &b.eval(*t)))
        .fold(0.0, f64::max)
}

/// Re-derive segment data after deserialization.
pub fn rebuild(loop_: Loop) -> Result<Loop, GeometryError> {
    geodesic_loop(loop_.points)
}
