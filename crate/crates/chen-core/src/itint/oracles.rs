//! Independent verification oracles for the degree and Hopf functionals.
//!
//! The degree oracle counts signed preimages of a regular value, found by
//! Newton refinement from a coarse mesh of seeds. The Hopf oracle traces the
//! two fiber circles over regular values, orients them as preimages,
//! projects stereographically from a far point (orientation-preserving
//! convention) and evaluates the Gauss linking double sum on the polygons.
//! Both follow entirely different code paths from the quadrature pairings.

use super::{ItintError, NumericConfig};
use crate::geometry::{domain_det, vec_dot, vec_norm, vec_normalize, Domain, MapSpec};

/// Deterministic generic point on S^n, away from poles and catalog fixtures.
fn regular_value(n: usize, salt: usize) -> Vec<f64> {
    let pattern = [0.31, -0.47, 0.83, 0.11, -0.29, 0.57];
    let v: Vec<f64> = (0..=n)
        .map(|i| pattern[(i + salt) % pattern.len()] + 0.013 * (i as f64 + 1.0) * salt as f64)
        .collect();
    vec_normalize(&v)
}

/// Orthonormal tangent frame at p with det[p, a_1, .., a_n] > 0.
fn positive_frame(p: &[f64]) -> Vec<Vec<f64>> {
    let n = p.len() - 1;
    let mut frame: Vec<Vec<f64>> = Vec::new();
    let mut order: Vec<usize> = (0..=n).collect();
    order.sort_by(|a, b| p[*a].abs().partial_cmp(&p[*b].abs()).unwrap());
    for k in order {
        if frame.len() == n {
            break;
        }
        let mut v = vec![0.0; n + 1];
        v[k] = 1.0;
        let d = vec_dot(&v, p);
        for (x, q) in v.iter_mut().zip(p) {
            *x -= d * q;
        }
        for f in &frame {
            let d = vec_dot(&v, f);
            for (x, y) in v.iter_mut().zip(f) {
                *x -= d * y;
            }
        }
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            frame.push(v.iter().map(|x| x / norm).collect());
        }
    }
    let mut rows = vec![p.to_vec()];
    rows.extend(frame.iter().cloned());
    if domain_det(&rows) < 0.0 {
        frame.swap(0, 1);
    }
    frame
}

/// Signed preimage count of a regular value: the classical degree.
pub fn degree_preimage_oracle(map: &MapSpec, _cfg: &NumericConfig) -> Result<f64, ItintError> {
    if map.source_dim != map.target_dim || map.source_dim < 2 {
        return Err(ItintError::Unsupported("degree oracle needs a self-map".into()));
    }
    let n = map.source_dim;
    let value = regular_value(n, 1);
    let frame_v = positive_frame(&value);
    let mut solutions: Vec<Vec<f64>> = Vec::new();
    for cell in (Domain::Sphere { dim: n }).mesh(12) {
        let mut x = Domain::embed_sphere(&cell.center.0);
        let mut converged = false;
        for _ in 0..60 {
            let frame_x = positive_frame(&x);
            let residual: Vec<f64> = {
                let fx = map.apply(&x);
                frame_v
                    .iter()
                    .map(|a| vec_dot(a, &fx) - vec_dot(a, &value))
                    .collect()
            };
            if vec_norm(&residual) < 1e-12 {
                converged = true;
                break;
            }
            // Newton step in the tangent chart at x
            let jac: Vec<Vec<f64>> = frame_x
                .iter()
                .map(|v| {
                    let dv = map.differential(&x, v);
                    frame_v.iter().map(|a| vec_dot(a, &dv)).collect()
                })
                .collect();
            let Some(step) = solve_small(&jac, &residual) else {
                break;
            };
            let cap = 0.5 / vec_norm(&step).max(1.0);
            let scale = cap.min(1.0);
            let mut moved = x.clone();
            for (j, s) in step.iter().enumerate() {
                for (m, f) in moved.iter_mut().zip(&frame_x[j]) {
                    *m -= scale * s * f;
                }
            }
            x = vec_normalize(&moved);
        }
        if !converged {
            continue;
        }
        // tangential residuals also vanish when f(x) - v is radial (e.g. at
        // the antipode); require genuine closeness in the ambient norm
        let fx = map.apply(&x);
        let miss = vec_norm(&fx.iter().zip(&value).map(|(a, b)| a - b).collect::<Vec<_>>());
        if miss > 1e-9 {
            continue;
        }
        if solutions
            .iter()
            .any(|s| vec_norm(&s.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>()) < 1e-6)
        {
            continue;
        }
        solutions.push(x);
    }
    let mut total = 0i64;
    for x in &solutions {
        let frame_x = positive_frame(x);
        let rows: Vec<Vec<f64>> = frame_x
            .iter()
            .map(|v| {
                let dv = map.differential(x, v);
                frame_v.iter().map(|a| vec_dot(a, &dv)).collect()
            })
            .collect();
        let det = small_det(&rows);
        total += if det > 0.0 { 1 } else { -1 };
    }
    Ok(total as f64)
}

/// Linking number of the fibers over two regular values of a map
/// S^3 -> S^2; equals the Hopf invariant.
pub fn hopf_linking_oracle(map: &MapSpec, cfg: &NumericConfig) -> Result<f64, ItintError> {
    if map.source_dim != 3 || map.target_dim != 2 {
        return Err(ItintError::Unsupported(
            "linking oracle needs a map S^3 -> S^2".into(),
        ));
    }
    let p = regular_value(2, 1);
    let q = regular_value(2, 3);
    let fiber_p = trace_fiber(map, &p, cfg)?;
    let fiber_q = trace_fiber(map, &q, cfg)?;
    // projection point far from both fibers
    let mut best = (f64::MIN, vec![0.0; 4]);
    for salt in 0..40 {
        let z = regular_value(3, salt);
        let d = fiber_p
            .iter()
            .chain(fiber_q.iter())
            .map(|x| {
                vec_norm(&x.iter().zip(&z).map(|(a, b)| a - b).collect::<Vec<_>>())
            })
            .fold(f64::MAX, f64::min);
        if d > best.0 {
            best = (d, z);
        }
    }
    let zstar = best.1;
    let pa = stereographic(&fiber_p, &zstar);
    let pb = stereographic(&fiber_q, &zstar);
    Ok(gauss_linking(&pa, &pb))
}

/// March along the fiber f^{-1}(p), oriented as a preimage: the tangent tau
/// satisfies det[x, tau, w_1, w_2] > 0 where Df w_i hits a positive frame at
/// p. Returns a closed polygon.
fn trace_fiber(
    map: &MapSpec,
    p: &[f64],
    _cfg: &NumericConfig,
) -> Result<Vec<Vec<f64>>, ItintError> {
    let frame_p = positive_frame(p);
    // coarse seed search
    let mut x = {
        let mut best = (f64::MAX, vec![0.0; 4]);
        for cell in (Domain::Sphere { dim: 3 }).mesh(10) {
            let cand = Domain::embed_sphere(&cell.center.0);
            let fx = map.apply(&cand);
            let d = vec_norm(&fx.iter().zip(p).map(|(a, b)| a - b).collect::<Vec<_>>());
            if d < best.0 {
                best = (d, cand);
            }
        }
        best.1
    };
    let project = |mut x: Vec<f64>| -> Option<Vec<f64>> {
        for _ in 0..50 {
            let fx = map.apply(&x);
            let residual: Vec<f64> = frame_p.iter().map(|a| vec_dot(a, &fx) - vec_dot(a, p)).collect();
            if vec_norm(&residual) < 1e-12 {
                return Some(x);
            }
            let frame_x = tangent_basis(&x);
            // least-squares Newton: solve J s = residual with J 2x3
            let jac: Vec<Vec<f64>> = frame_p
                .iter()
                .map(|a| {
                    frame_x
                        .iter()
                        .map(|v| vec_dot(a, &map.differential(&x, v)))
                        .collect()
                })
                .collect();
            let step = least_squares_2x3(&jac, &residual)?;
            let mut moved = x.clone();
            for (j, s) in step.iter().enumerate() {
                for (m, f) in moved.iter_mut().zip(&frame_x[j]) {
                    *m -= s * f;
                }
            }
            x = vec_normalize(&moved);
        }
        None
    };
    x = project(x).ok_or_else(|| {
        ItintError::Unsupported("fiber seed did not converge".into())
    })?;
    let start = x.clone();
    let step = 0.01;
    let mut polygon = vec![x.clone()];
    let mut prev_tau: Option<Vec<f64>> = None;
    for iter in 0..5000 {
        let frame_x = tangent_basis(&x);
        let jac: Vec<Vec<f64>> = frame_p
            .iter()
            .map(|a| {
                frame_x
                    .iter()
                    .map(|v| vec_dot(a, &map.differential(&x, v)))
                    .collect()
            })
            .collect();
        // kernel direction: cross product of the two Jacobian rows in chart coords
        let tau_chart = cross3(&jac[0], &jac[1]);
        let norm = vec_norm(&tau_chart);
        if norm < 1e-10 {
            return Err(ItintError::Unsupported("fiber tangent degenerated".into()));
        }
        let mut tau = combine(&frame_x, &tau_chart);
        tau = vec_normalize(&tau);
        // orient as a preimage: det[x, tau, w1, w2] > 0 with Df w_i = a_i
        let w1 = least_squares_2x3(&jac, &[1.0, 0.0])
            .map(|c| combine(&frame_x, &c))
            .ok_or_else(|| ItintError::Unsupported("fiber frame solve failed".into()))?;
        let w2 = least_squares_2x3(&jac, &[0.0, 1.0])
            .map(|c| combine(&frame_x, &c))
            .ok_or_else(|| ItintError::Unsupported("fiber frame solve failed".into()))?;
        let det = domain_det(&[x.clone(), tau.clone(), w1, w2]);
        if det < 0.0 {
            tau = tau.iter().map(|v| -v).collect();
        }
        if let Some(prev) = &prev_tau {
            if vec_dot(prev, &tau) < 0.0 {
                // orientation rule must march consistently
                return Err(ItintError::Unsupported("fiber orientation flipped".into()));
            }
        }
        prev_tau = Some(tau.clone());
        let mut moved = x.clone();
        for (m, t) in moved.iter_mut().zip(&tau) {
            *m += step * t;
        }
        x = project(vec_normalize(&moved)).ok_or_else(|| {
            ItintError::Unsupported("fiber projection diverged".into())
        })?;
        polygon.push(x.clone());
        let dist_back = vec_norm(
            &x.iter().zip(&start).map(|(a, b)| a - b).collect::<Vec<_>>(),
        );
        if iter > 20 && dist_back < 0.8 * step {
            break;
        }
    }
    polygon.push(start);
    Ok(polygon)
}

fn tangent_basis(x: &[f64]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|a, b| x[*a].abs().partial_cmp(&x[*b].abs()).unwrap());
    for k in order {
        if basis.len() == x.len() - 1 {
            break;
        }
        let mut v = vec![0.0; x.len()];
        v[k] = 1.0;
        let d = vec_dot(&v, x);
        for (a, b) in v.iter_mut().zip(x) {
            *a -= d * b;
        }
        for f in &basis {
            let d = vec_dot(&v, f);
            for (a, b) in v.iter_mut().zip(f) {
                *a -= d * b;
            }
        }
        let n = vec_norm(&v);
        if n > 1e-8 {
            basis.push(v.iter().map(|a| a / n).collect());
        }
    }
    basis
}

fn combine(basis: &[Vec<f64>], coords: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; basis[0].len()];
    for (c, b) in coords.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

fn cross3(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Solve J s = r for J 2x3 in the least-squares sense (minimum norm).
fn least_squares_2x3(jac: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    // s = J^T (J J^T)^{-1} r
    let g00 = vec_dot(&jac[0], &jac[0]);
    let g01 = vec_dot(&jac[0], &jac[1]);
    let g11 = vec_dot(&jac[1], &jac[1]);
    let det = g00 * g11 - g01 * g01;
    if det.abs() < 1e-14 {
        return None;
    }
    let y0 = (g11 * rhs[0] - g01 * rhs[1]) / det;
    let y1 = (-g01 * rhs[0] + g00 * rhs[1]) / det;
    Some((0..3).map(|j| y0 * jac[0][j] + y1 * jac[1][j]).collect())
}

fn solve_small(m: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            // rows of the system: residual_r = sum_j m[j][r] * s_j
            let mut row: Vec<f64> = (0..n).map(|j| m[j][r]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|x, y| a[*x][col].abs().partial_cmp(&a[*y][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(pivot, col);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=n {
                    let delta = f * a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn small_det(rows: &[Vec<f64>]) -> f64 {
    domain_det(rows)
}

/// Orientation-preserving stereographic projection from `zstar`: basis of
/// zstar-perp chosen with det[zstar, b1, b2, b3] = +1.
fn stereographic(points: &[Vec<f64>], zstar: &[f64]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|a, b| zstar[*a].abs().partial_cmp(&zstar[*b].abs()).unwrap());
    for k in order {
        if basis.len() == 3 {
            break;
        }
        let mut v = vec![0.0; 4];
        v[k] = 1.0;
        let d = vec_dot(&v, zstar);
        for (a, b) in v.iter_mut().zip(zstar) {
            *a -= d * b;
        }
        for f in &basis {
            let d = vec_dot(&v, f);
            for (a, b) in v.iter_mut().zip(f) {
                *a -= d * b;
            }
        }
        let n = vec_norm(&v);
        if n > 1e-8 {
            basis.push(v.iter().map(|a| a / n).collect());
        }
    }
    let mut rows = vec![zstar.to_vec()];
    rows.extend(basis.iter().cloned());
    if domain_det(&rows) < 0.0 {
        basis[2] = basis[2].iter().map(|v| -v).collect();
    }
    points
        .iter()
        .map(|x| {
            let den = 1.0 - vec_dot(x, zstar);
            basis.iter().map(|b| vec_dot(x, b) / den).collect()
        })
        .collect()
}

/// Gauss linking double sum over segment midpoints of two closed polygons.
fn gauss_linking(pa: &[Vec<f64>], pb: &[Vec<f64>]) -> f64 {
    let seg = |poly: &[Vec<f64>]| -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mids = poly
            .windows(2)
            .map(|w| (0..3).map(|i| 0.5 * (w[0][i] + w[1][i])).collect())
            .collect();
        let dirs = poly
            .windows(2)
            .map(|w| (0..3).map(|i| w[1][i] - w[0][i]).collect())
            .collect();
        (mids, dirs)
    };
    let (ma, da) = seg(pa);
    let (mb, db) = seg(pb);
    let mut total = 0.0;
    for i in 0..ma.len() {
        for j in 0..mb.len() {
            let r: Vec<f64> = (0..3).map(|k| mb[j][k] - ma[i][k]).collect();
            let c = cross3(&da[i], &db[j]);
            let dist = vec_norm(&r);
            total += vec_dot(&c, &r) / (dist * dist * dist);
        }
    }
    total / (4.0 * std::f64::consts::PI)
}
