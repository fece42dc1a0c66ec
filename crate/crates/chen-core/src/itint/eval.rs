//! Plotwise evaluation of iterated integrals and pairings against domain
//! fundamental classes.
//!
//! The value of `int w_1 .. w_r` on a plot at a frame (v_1, .., v_k) is the
//! quadrature over the ordered simplex of the product form evaluated on the
//! pushed-forward frame vectors followed by the time directions. The product
//! form is expanded over ordered block assignments: block i receives the
//! velocity at t_i plus deg(w_i) - 1 pushed frame vectors, with the sign of
//! the permutation computed by inversion count.

use super::forms::{permutation_sign, FormSpec};
use super::quadrature::QuadratureRule;
use super::{ItintError, NumericConfig};
use crate::geometry::{vec_normalize, DomainPoint, LoopFamily, SliceRule};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One summand of a pairing: a real coefficient and the factor forms of one
/// iterated integral.
#[derive(Debug, Clone)]
pub struct PairingSummand {
    pub coefficient: f64,
    pub forms: Vec<FormSpec>,
}

/// A computed pairing with its refinement-based error estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairingResult {
    pub value: f64,
    /// |value - value at half resolution|; refining further changes the value
    /// by less than this on smooth integrands.
    pub error_estimate: f64,
    pub domain_res: usize,
    pub time_refine: usize,
}

/// Slices of a family at a domain point and at finite-difference offsets in
/// the frame directions.
pub(crate) struct SliceBundle {
    center: SliceRule,
    offsets: Vec<(SliceRule, SliceRule)>,
    fd_domain: f64,
    fd_time: f64,
}

impl SliceBundle {
    pub(crate) fn new(
        fam: &LoopFamily,
        u: &DomainPoint,
        frame: &[Vec<f64>],
        cfg: &NumericConfig,
    ) -> Self {
        let h = cfg.fd_domain;
        let offsets = frame
            .iter()
            .map(|v| {
                let plus: Vec<f64> = u.0.iter().zip(v).map(|(c, d)| c + h * d).collect();
                let minus: Vec<f64> = u.0.iter().zip(v).map(|(c, d)| c - h * d).collect();
                (
                    fam.slice_rule(&DomainPoint(plus)),
                    fam.slice_rule(&DomainPoint(minus)),
                )
            })
            .collect();
        Self {
            center: fam.slice_rule(u),
            offsets,
            fd_domain: h,
            fd_time: cfg.fd_time,
        }
    }

    pub(crate) fn point(&self, t: f64) -> Vec<f64> {
        self.center.point(t)
    }

    pub(crate) fn velocity(&self, t: f64) -> Vec<f64> {
        let h = self.fd_time;
        let plus = self.center.point(t + h);
        let minus = self.center.point(t - h);
        plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect()
    }

    pub(crate) fn push(&self, a: usize, t: f64) -> Vec<f64> {
        let (plus, minus) = &self.offsets[a];
        let (p, m) = (plus.point(t), minus.point(t));
        p.iter()
            .zip(&m)
            .map(|(x, y)| (x - y) / (2.0 * self.fd_domain))
            .collect()
    }
}

/// Ordered distribution of frame indices into blocks with the permutation
/// sign of (block_1, k+1, block_2, k+2, ...).
struct Assignment {
    blocks: Vec<Vec<usize>>,
    sign: f64,
}

fn assignments(k: usize, capacities: &[usize]) -> Vec<Assignment> {
    let r = capacities.len();
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); r];
    fn rec(
        next: usize,
        k: usize,
        capacities: &[usize],
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Assignment>,
    ) {
        if next == k {
            let mut seq = Vec::with_capacity(k + capacities.len());
            for (i, b) in blocks.iter().enumerate() {
                seq.extend_from_slice(b);
                seq.push(k + i);
            }
            out.push(Assignment {
                blocks: blocks.clone(),
                sign: permutation_sign(&seq),
            });
            return;
        }
        for i in 0..capacities.len() {
            if blocks[i].len() < capacities[i] {
                blocks[i].push(next);
                rec(next + 1, k, capacities, blocks, out);
                blocks[i].pop();
            }
        }
    }
    rec(0, k, capacities, &mut blocks, &mut out);
    out
}

struct NodeData {
    point: Vec<f64>,
    velocity: Vec<f64>,
    pushes: Vec<Vec<f64>>,
}

/// Per-slice evaluation context: node data cached at every distinct 1-d time.
struct SliceEval {
    times: Vec<f64>,
    data: Vec<NodeData>,
}

impl SliceEval {
    fn new(bundle: &SliceBundle, rule: &QuadratureRule, k: usize) -> Self {
        let mut times: Vec<f64> = rule
            .nodes
            .iter()
            .flat_map(|(t, _)| t.iter().copied())
            .collect();
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times.dedup();
        let data = times
            .iter()
            .map(|t| NodeData {
                point: bundle.point(*t),
                velocity: bundle.velocity(*t),
                pushes: (0..k).map(|a| bundle.push(a, *t)).collect(),
            })
            .collect();
        Self { times, data }
    }

    fn at(&self, t: f64) -> &NodeData {
        let i = self
            .times
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
            .expect("quadrature node time was cached");
        &self.data[i]
    }
}

fn eval_with_rule(
    forms: &[FormSpec],
    bundle: &SliceBundle,
    rule: &QuadratureRule,
    k: usize,
) -> f64 {
    let capacities: Vec<usize> = forms.iter().map(|f| f.degree - 1).collect();
    let assigns = assignments(k, &capacities);
    let cache = SliceEval::new(bundle, rule, k);
    let mut total = 0.0;
    for (node, weight) in &rule.nodes {
        let datas: Vec<&NodeData> = node.iter().map(|t| cache.at(*t)).collect();
        let mut node_val = 0.0;
        for assign in &assigns {
            let mut term = assign.sign;
            for (i, form) in forms.iter().enumerate() {
                let d = datas[i];
                let mut args: Vec<&[f64]> = assign.blocks[i]
                    .iter()
                    .map(|a| d.pushes[*a].as_slice())
                    .collect();
                args.push(d.velocity.as_slice());
                term *= form.eval(&d.point, &args);
                if term == 0.0 {
                    break;
                }
            }
            node_val += term;
        }
        total += weight * node_val;
    }
    total
}

fn validate_forms(forms: &[FormSpec], fam: &LoopFamily) -> Result<(), ItintError> {
    if forms.is_empty() {
        return Err(ItintError::Unsupported(
            "iterated integral needs at least one form".into(),
        ));
    }
    for f in forms {
        if f.target_dim != fam.target_dim() {
            return Err(ItintError::TargetMismatch {
                form: f.target_dim,
                family: fam.target_dim(),
            });
        }
        if f.degree == 0 {
            return Err(ItintError::Unsupported("forms must have positive degree".into()));
        }
    }
    Ok(())
}

pub(crate) fn frame_degree(forms: &[FormSpec]) -> usize {
    forms.iter().map(|f| f.degree).sum::<usize>() - forms.len()
}

/// Quadrature rule for a family: composite on the declared pieces, Monte
/// Carlo for long iterated integrals where the grid would explode.
pub(crate) fn family_rule(fam: &LoopFamily, r: usize, cfg: &NumericConfig) -> QuadratureRule {
    if r >= 4 {
        QuadratureRule::monte_carlo(r, 50_000, cfg.seed)
    } else {
        QuadratureRule::composite(r, fam.time_pieces(), cfg.time_refine)
    }
}

/// Value of the iterated integral of `forms` on the plot `fam` at the domain
/// point `u` against tangent vectors `frame` (chart velocities).
pub fn eval_iterated_integral(
    forms: &[FormSpec],
    fam: &LoopFamily,
    u: &DomainPoint,
    frame: &[Vec<f64>],
    cfg: &NumericConfig,
) -> Result<f64, ItintError> {
    validate_forms(forms, fam)?;
    let k = frame_degree(forms);
    if frame.len() != k {
        return Err(ItintError::ArityMismatch {
            expected: k,
            got: frame.len(),
        });
    }
    let bundle = SliceBundle::new(fam, u, frame, cfg);
    let rule = family_rule(fam, forms.len(), cfg);
    Ok(eval_with_rule(forms, &bundle, &rule, k))
}

fn pair_at(
    summands: &[PairingSummand],
    fam: &LoopFamily,
    cfg: &NumericConfig,
) -> Result<f64, ItintError> {
    let cells = fam.domain().mesh(cfg.domain_res);
    let rules: Vec<QuadratureRule> = summands
        .iter()
        .map(|s| family_rule(fam, s.forms.len(), cfg))
        .collect();
    let values: Vec<f64> = cells
        .par_iter()
        .map(|cell| {
            let mut acc = 0.0;
            for (summand, rule) in summands.iter().zip(&rules) {
                let k = frame_degree(&summand.forms);
                let bundle = SliceBundle::new(fam, &cell.center, &cell.frame, cfg);
                acc += summand.coefficient
                    * cell.volume
                    * eval_with_rule(&summand.forms, &bundle, rule, k);
            }
            acc
        })
        .collect();
    // ordered reduction keeps outputs identical at any thread count
    Ok(values.iter().sum::<f64>() * fam.orientation() * fam.coefficient_f64())
}

/// Pair a sum of iterated integrals with the fundamental class of the
/// family's domain: integrate the plotwise values against an oriented
/// orthonormal frame field over the mesh.
pub fn pair(
    summands: &[PairingSummand],
    fam: &LoopFamily,
    cfg: &NumericConfig,
) -> Result<PairingResult, ItintError> {
    for s in summands {
        validate_forms(&s.forms, fam)?;
        let k = frame_degree(&s.forms);
        if k != fam.domain().dim() {
            return Err(ItintError::DegreeMismatch {
                form_degree: k,
                domain_dim: fam.domain().dim(),
            });
        }
    }
    let value = pair_at(summands, fam, cfg)?;
    let coarse = pair_at(summands, fam, &cfg.halved())?;
    Ok(PairingResult {
        value,
        error_estimate: (value - coarse).abs(),
        domain_res: cfg.domain_res,
        time_refine: cfg.time_refine,
    })
}

/// Certified comparison bound of Lemma-type pairings: an upper bound for
/// |pairing| from the volume estimator, the suplength and the form norms,
/// computed on the same family.
pub fn pairing_volume_bound(
    summands: &[PairingSummand],
    fam: &LoopFamily,
    cfg: &NumericConfig,
) -> Result<f64, ItintError> {
    let volume = fam.volume_estimate(cfg.lattice_res)?;
    let suplength = fam.suplength(cfg.lattice_res)?;
    let mut bound = 0.0;
    for s in summands {
        let r = s.forms.len();
        let norms: f64 = s.forms.iter().map(|f| f.sup_norm).product();
        bound += s.coefficient.abs() * volume * suplength.powi(r as i32) * norms
            / super::quadrature::factorial(r);
    }
    Ok(bound)
}

/// Largest sampled singular value of the domain pushforward of the family
/// over mesh centers and quadrature times, an upper bound ingredient for the
/// k-dilation of the plot.
pub(crate) fn sampled_dilation(
    fam: &LoopFamily,
    extra: &[DomainPoint],
    r: usize,
    cfg: &NumericConfig,
) -> Result<f64, ItintError> {
    let rule = family_rule(fam, r, cfg);
    let mut times: Vec<f64> = rule
        .nodes
        .iter()
        .flat_map(|(t, _)| t.iter().copied())
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();
    let cells = fam.domain().mesh((cfg.domain_res / 4).max(4));
    let mut best: f64 = 0.0;
    let mut frames: Vec<(DomainPoint, Vec<Vec<f64>>)> = cells
        .into_iter()
        .map(|c| (c.center, c.frame))
        .collect();
    for u in extra {
        frames.push((u.clone(), fam.domain().frame_at(&u.0)));
    }
    for (u, frame) in &frames {
        let bundle = SliceBundle::new(fam, u, frame, cfg);
        for t in &times {
            let pushes: Vec<Vec<f64>> = (0..frame.len()).map(|a| bundle.push(a, *t)).collect();
            best = best.max(crate::geometry::gram_sigma1(&pushes));
        }
    }
    Ok(best)
}

/// Orthonormal random k-frame: a seeded random rotation applied to a base
/// orthonormal frame.
pub(crate) fn rotate_frame(
    base: &[Vec<f64>],
    rng: &mut impl rand::Rng,
) -> Vec<Vec<f64>> {
    let k = base.len();
    if k == 0 {
        return Vec::new();
    }
    // random orthogonal matrix by Gram-Schmidt on Gaussian columns
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut v: Vec<f64> = (0..k)
            .map(|_| {
                // Box-Muller
                let u1: f64 = rng.gen::<f64>().max(1e-12);
                let u2: f64 = rng.gen();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        for c in &cols {
            let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= d * y;
            }
        }
        cols.push(vec_normalize(&v));
    }
    (0..k)
        .map(|i| {
            let mut out = vec![0.0; base[0].len()];
            for (j, b) in base.iter().enumerate() {
                for (o, x) in out.iter_mut().zip(b) {
                    *o += cols[i][j] * x;
                }
            }
            out
        })
        .collect()
}
