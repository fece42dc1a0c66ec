//! Sampled verification of the length-power norm bound on iterated integrals
//! and of the Lipschitz pullback inequality.

use super::eval::{eval_iterated_integral, frame_degree, rotate_frame, sampled_dilation, SliceBundle};
use super::forms::FormSpec;
use super::quadrature::factorial;
use super::{ItintError, NumericConfig};
use crate::geometry::{vec_dot, vec_norm, vec_normalize, Domain, DomainPoint, LoopFamily, MapSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Outcome of the norm-bound check at one slice of a family.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub r: usize,
    /// Quadrature value of the slice length (exact for constant-speed slices).
    pub length: f64,
    /// Sampled upper bound for the k-dilation of the plot.
    pub dilation_bound: f64,
    /// Right-hand side (1/r!) length^r prod |w_i| Dil_k.
    pub rhs: f64,
    pub lhs_max: f64,
    pub max_ratio: f64,
    pub samples: usize,
    pub passed: bool,
}

/// Check |(int w_1..w_r)(frame)| <= (1/r!) Length^r prod ||w_i|| Dil_k on
/// `samples` random orthonormal frames at the slice through `u`.
pub fn check_length_bound(
    forms: &[FormSpec],
    fam: &LoopFamily,
    u: &DomainPoint,
    samples: usize,
    cfg: &NumericConfig,
) -> Result<BoundReport, ItintError> {
    let r = forms.len();
    let k = frame_degree(forms);
    if k != fam.domain().dim() {
        return Err(ItintError::DegreeMismatch {
            form_degree: k,
            domain_dim: fam.domain().dim(),
        });
    }
    let base_frame = fam.domain().frame_at(&u.0);
    // |gamma'| integrated on the family's quadrature grid
    let rule = super::eval::family_rule(fam, 1, cfg);
    let bundle = SliceBundle::new(fam, u, &base_frame, cfg);
    let length: f64 = rule
        .nodes
        .iter()
        .map(|(t, w)| w * vec_norm(&bundle.velocity(t[0])))
        .sum();
    let dilation = sampled_dilation(fam, std::slice::from_ref(u), r, cfg)?;
    let norms: f64 = forms.iter().map(|f| f.sup_norm).product();
    let rhs = length.powi(r as i32) * norms * dilation.powi(k as i32) / factorial(r);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut lhs_max: f64 = 0.0;
    let mut max_ratio: f64 = 0.0;
    for sample in 0..samples {
        let frame = rotate_frame(&base_frame, &mut rng);
        let lhs = eval_iterated_integral(forms, fam, u, &frame, cfg)?.abs();
        lhs_max = lhs_max.max(lhs);
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if ratio > max_ratio {
            max_ratio = ratio;
        }
        if ratio > 1.0 + cfg.bound_slack {
            return Err(ItintError::BoundViolated { ratio, sample });
        }
    }
    Ok(BoundReport {
        r,
        length,
        dilation_bound: dilation,
        rhs,
        lhs_max,
        max_ratio,
        samples,
        passed: true,
    })
}

/// Outcome of the pullback-norm check for one map and form.
#[derive(Debug, Clone, Serialize)]
pub struct PullbackReport {
    pub lipschitz: f64,
    pub max_ratio: f64,
    pub samples: usize,
    pub passed: bool,
}

/// Check ||f^* a(x)|| <= L^n ||a(f(x))|| on random points and orthonormal
/// n-frames. The Lipschitz estimate is the running max of the stored sampled
/// bound and the singular values observed at the checked points.
pub fn lipschitz_pullback_check(
    map: &MapSpec,
    form: &FormSpec,
    samples: usize,
    cfg: &NumericConfig,
) -> Result<PullbackReport, ItintError> {
    if form.target_dim != map.target_dim {
        return Err(ItintError::TargetMismatch {
            form: form.target_dim,
            family: map.target_dim,
        });
    }
    let n = form.degree;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(17));
    let mut points = Vec::with_capacity(samples);
    for _ in 0..samples {
        let p = random_unit(map.source_dim + 1, &mut rng);
        let frame = random_orthonormal_frame(&p, n, &mut rng);
        points.push((p, frame));
    }
    let mut lipschitz = map.lipschitz;
    for (p, frame) in &points {
        lipschitz = lipschitz.max(map.local_dilation(p, frame));
    }
    let mut max_ratio: f64 = 0.0;
    for (sample, (p, frame)) in points.iter().enumerate() {
        let image = map.apply(p);
        let pushed: Vec<Vec<f64>> = frame.iter().map(|v| map.differential(p, v)).collect();
        let args: Vec<&[f64]> = pushed.iter().map(|v| v.as_slice()).collect();
        let lhs = form.eval(&image, &args).abs();
        let rhs = lipschitz.powi(n as i32) * form.sup_norm;
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        max_ratio = max_ratio.max(ratio);
        if ratio > 1.0 + cfg.bound_slack {
            return Err(ItintError::BoundViolated { ratio, sample });
        }
    }
    Ok(PullbackReport {
        lipschitz,
        max_ratio,
        samples,
        passed: true,
    })
}

fn random_unit(len: usize, rng: &mut impl rand::Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| gaussian(rng)).collect();
        if vec_norm(&v) > 1e-6 {
            return vec_normalize(&v);
        }
    }
}

fn random_orthonormal_frame(p: &[f64], k: usize, rng: &mut impl rand::Rng) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(k);
    while frame.len() < k {
        let mut v: Vec<f64> = (0..p.len()).map(|_| gaussian(rng)).collect();
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
        if vec_norm(&v) > 1e-6 {
            frame.push(vec_normalize(&v));
        }
    }
    frame
}

fn gaussian(rng: &mut impl rand::Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-12);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Domain point of the sweepout slice whose loop is the full great circle:
/// the parameter embedding to -e_1, opposite the reference meridian.
pub fn great_circle_parameter(n: usize) -> DomainPoint {
    let m = Domain::Sphere { dim: n - 1 }.chart_len();
    let mut coords = vec![std::f64::consts::FRAC_PI_2; m];
    coords[m - 1] = std::f64::consts::PI;
    DomainPoint(coords)
}
