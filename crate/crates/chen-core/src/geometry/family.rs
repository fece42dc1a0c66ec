//! Parametrized families of based loops: a domain, a closed-form rule with
//! declared time breakpoints, an orientation and a rational chain coefficient.
//!
//! Families are built compositionally (sweepout, map application, concat
//! powers, Pontryagin products, domain reflection, time reparametrization).
//! Evaluation first resolves a domain point into a [`SliceRule`], so per-slice
//! data such as concatenation splits is computed once per slice.

use super::domain::{Domain, DomainPoint};
use super::loops::{geodesic_loop, loop_space_distance, Loop};
use super::maps::MapSpec;
use super::sphere::{north_pole, SpherePoint};
use super::GeometryError;
use crate::rational::{self, Rational};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize, Deserialize)]
enum Rule {
    Constant,
    Sweepout,
    Mapped { map: MapSpec, inner: Box<Rule> },
    ConcatPower { inner: Box<Rule>, power: u32 },
    Pontryagin { left: Box<LoopFamily>, right: Box<LoopFamily> },
    DomainReflect { inner: Box<Rule> },
    TimeReparam { inner: Box<Rule> },
}

/// A smooth family of based loops over a parameter domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoopFamily {
    domain: Domain,
    target_dim: usize,
    rule: Rule,
    orientation: f64,
    coefficient: Rational,
    /// Declared time breakpoints, including 0 and 1.
    time_pieces: Vec<f64>,
    /// Sampling resolution per piece when slices are materialized as loops.
    pub samples_per_piece: usize,
}

/// A single slice, resolved at a domain point; evaluates times to points.
#[derive(Debug, Clone)]
pub enum SliceRule {
    Constant {
        n: usize,
    },
    /// Sweepout slice: descend the reference meridian, ascend the u-meridian.
    Meridians {
        n: usize,
        u: Vec<f64>,
    },
    Mapped {
        map: MapSpec,
        inner: Box<SliceRule>,
    },
    Repeat {
        inner: Box<SliceRule>,
        power: u32,
    },
    Concat {
        first: Box<SliceRule>,
        second: Box<SliceRule>,
        split: f64,
    },
    Smoothstep {
        inner: Box<SliceRule>,
    },
}

impl SliceRule {
    pub fn point(&self, t: f64) -> Vec<f64> {
        match self {
            SliceRule::Constant { n } => north_pole(*n).coords().to_vec(),
            SliceRule::Meridians { n, u } => {
                let mut out = vec![0.0; n + 1];
                if t <= 0.5 {
                    let (s, c) = (2.0 * PI * t).sin_cos();
                    out[0] = s;
                    out[*n] = c;
                } else {
                    let (s, c) = (2.0 * PI * (1.0 - t)).sin_cos();
                    for (o, ui) in out.iter_mut().zip(u) {
                        *o = s * ui;
                    }
                    out[*n] = c;
                }
                out
            }
            SliceRule::Mapped { map, inner } => map.apply(&inner.point(t)),
            SliceRule::Repeat { inner, power } => {
                let scaled = (f64::from(*power) * t).fract();
                inner.point(if t >= 1.0 && scaled == 0.0 { 1.0 } else { scaled })
            }
            SliceRule::Concat {
                first,
                second,
                split,
            } => {
                if t <= *split {
                    if *split == 0.0 {
                        second.point(t)
                    } else {
                        first.point(t / split)
                    }
                } else if *split == 1.0 {
                    first.point(t)
                } else {
                    second.point((t - split) / (1.0 - split))
                }
            }
            SliceRule::Smoothstep { inner } => {
                inner.point(t - (2.0 * PI * t).sin() / (2.0 * PI))
            }
        }
    }
}

/// Unit sweepout of S^n by based loops over S^{n-1}: each slice descends the
/// reference meridian (direction e_1) and ascends the meridian of its
/// parameter. Every slice has length exactly 2 pi; the evaluation map has
/// degree +1 (the degree pairing of the identity is +1).
pub fn sweepout(n: usize) -> LoopFamily {
    assert!(n >= 2, "sweepouts need n >= 2");
    LoopFamily {
        domain: Domain::Sphere { dim: n - 1 },
        target_dim: n,
        rule: Rule::Sweepout,
        orientation: 1.0,
        coefficient: rational::one(),
        time_pieces: vec![0.0, 0.5, 1.0],
        samples_per_piece: 16,
    }
}

/// The family of constant loops at the basepoint over the given domain.
pub fn constant_family(domain: Domain, n: usize) -> LoopFamily {
    LoopFamily {
        domain,
        target_dim: n,
        rule: Rule::Constant,
        orientation: 1.0,
        coefficient: rational::one(),
        time_pieces: vec![0.0, 1.0],
        samples_per_piece: 16,
    }
}

/// Pontryagin product: domain is the product, each slice is the concatenation
/// of the factor slices (time split proportional to slice lengths), the
/// coefficient is the product of coefficients.
pub fn pontryagin_product(
    left: LoopFamily,
    right: LoopFamily,
) -> Result<LoopFamily, GeometryError> {
    if left.target_dim != right.target_dim {
        return Err(GeometryError::BasepointMismatch);
    }
    // representative split for the declared breakpoints; exact whenever the
    // slice lengths do not depend on the parameter (true for the catalog)
    let probe_left = DomainPoint(vec![0.9; left.domain.chart_len()]);
    let probe_right = DomainPoint(vec![0.9; right.domain.chart_len()]);
    let ll = left.slice_loop(&probe_left)?.length();
    let lr = right.slice_loop(&probe_right)?.length();
    let split = if ll + lr > 0.0 { ll / (ll + lr) } else { 0.5 };
    let mut pieces: Vec<f64> = left.time_pieces.iter().map(|b| b * split).collect();
    pieces.extend(right.time_pieces.iter().map(|b| split + b * (1.0 - split)));
    pieces.dedup();
    let orientation = left.orientation * right.orientation;
    let coefficient = &left.coefficient * &right.coefficient;
    let samples_per_piece = left.samples_per_piece.max(right.samples_per_piece);
    let target_dim = left.target_dim;
    Ok(LoopFamily {
        domain: Domain::Product(Box::new(left.domain.clone()), Box::new(right.domain.clone())),
        target_dim,
        rule: Rule::Pontryagin {
            left: Box::new(left),
            right: Box::new(right),
        },
        orientation,
        coefficient,
        time_pieces: pieces,
        samples_per_piece,
    })
}

impl LoopFamily {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn coefficient_f64(&self) -> f64 {
        self.coefficient.to_f64().unwrap_or(0.0)
    }

    pub fn with_coefficient(mut self, c: Rational) -> Self {
        self.coefficient = c;
        self
    }

    pub fn time_pieces(&self) -> &[f64] {
        &self.time_pieces
    }

    /// Apply a based map to every loop of the family.
    pub fn mapped(self, map: MapSpec) -> Result<LoopFamily, GeometryError> {
        if map.source_dim != self.target_dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.target_dim,
                got: map.source_dim,
            });
        }
        if !map.is_based() {
            return Err(GeometryError::MapNotBased);
        }
        let target_dim = map.target_dim;
        Ok(LoopFamily {
            rule: Rule::Mapped {
                map,
                inner: Box::new(self.rule),
            },
            target_dim,
            ..self
        })
    }

    /// Concatenate every slice with itself `power` times. Slice lengths scale
    /// exactly by `power`.
    pub fn concat_power(self, power: u32) -> LoopFamily {
        assert!(power >= 1);
        let mut pieces = Vec::new();
        let p = f64::from(power);
        for rep in 0..power {
            let offset = f64::from(rep) / p;
            for b in &self.time_pieces {
                pieces.push(offset + b / p);
            }
        }
        pieces.push(1.0);
        pieces.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        LoopFamily {
            rule: Rule::ConcatPower {
                inner: Box::new(self.rule),
                power,
            },
            time_pieces: pieces,
            ..self
        }
    }

    /// Precompose the rule with an orientation-reversing reflection of the
    /// domain chart; pairings change sign.
    pub fn reflect_domain(self) -> LoopFamily {
        LoopFamily {
            rule: Rule::DomainReflect {
                inner: Box::new(self.rule),
            },
            ..self
        }
    }

    /// Orientation-preserving smooth time reparametrization of every slice
    /// (fixed points at 0, 1/2, 1); pairings are invariant.
    pub fn time_reparam(self) -> LoopFamily {
        LoopFamily {
            rule: Rule::TimeReparam {
                inner: Box::new(self.rule),
            },
            ..self
        }
    }

    pub fn with_samples_per_piece(mut self, samples: usize) -> Self {
        self.samples_per_piece = samples.max(4);
        self
    }

    /// Resolve the rule at a domain point.
    pub fn slice_rule(&self, u: &DomainPoint) -> SliceRule {
        resolve(&self.rule, &self.domain, self.target_dim, &u.0)
    }

    pub fn point(&self, u: &DomainPoint, t: f64) -> Vec<f64> {
        self.slice_rule(u).point(t)
    }

    /// Time grid aligned to the declared breakpoints, with a fixed number of
    /// samples per piece (so concat powers replicate the base grid exactly).
    pub fn time_grid(&self) -> Vec<f64> {
        let mut grid = Vec::new();
        for w in self.time_pieces.windows(2) {
            let (a, b) = (w[0], w[1]);
            for i in 0..self.samples_per_piece {
                grid.push(a + (b - a) * i as f64 / self.samples_per_piece as f64);
            }
        }
        grid.push(1.0);
        grid
    }

    /// Materialize the slice at `u` as a piecewise-geodesic loop sampled on
    /// the family's time grid.
    pub fn slice_loop(&self, u: &DomainPoint) -> Result<Loop, GeometryError> {
        let slice = self.slice_rule(u);
        let points = self
            .time_grid()
            .iter()
            .map(|t| SpherePoint::new(slice.point(*t)))
            .collect::<Result<Vec<_>, _>>()?;
        geodesic_loop(points)
    }

    /// Corner lattice of the domain chart used by the metric estimators.
    fn corner_slices(&self, res: usize) -> Result<(Vec<(Vec<f64>, bool)>, Vec<Loop>), GeometryError> {
        let axes = self.domain.lattice_axes(res);
        let shape: Vec<usize> = axes.iter().map(|(g, _)| g.len()).collect();
        let total: usize = shape.iter().product::<usize>().max(1);
        let mut slices = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut coords = Vec::with_capacity(axes.len());
            for (g, _) in &axes {
                coords.push(g[rem % g.len()]);
                rem /= g.len();
            }
            slices.push(self.slice_loop(&DomainPoint(coords))?);
        }
        Ok((axes, slices))
    }

    /// Largest slice length over the corner lattice; converges to the true
    /// suplength from below as the mesh refines.
    pub fn suplength(&self, res: usize) -> Result<f64, GeometryError> {
        let (_, slices) = self.corner_slices(res)?;
        Ok(slices.iter().map(Loop::length).fold(0.0, f64::max))
    }

    /// Upper-bound estimator for the volume in the sup metric: for every cell
    /// of the corner lattice, the product over axes of the sup-metric edge
    /// distances, summed over cells and scaled by |coefficient|.
    pub fn volume_estimate(&self, res: usize) -> Result<f64, GeometryError> {
        let (axes, slices) = self.corner_slices(res)?;
        if axes.is_empty() {
            return Ok(self.coefficient.abs().to_f64().unwrap_or(0.0));
        }
        let shape: Vec<usize> = axes.iter().map(|(g, _)| g.len()).collect();
        let strides: Vec<usize> = {
            let mut s = vec![1usize; shape.len()];
            for i in 1..shape.len() {
                s[i] = s[i - 1] * shape[i - 1];
            }
            s
        };
        let total: usize = shape.iter().product();
        let mut volume = 0.0;
        'cells: for flat in 0..total {
            let mut idx = Vec::with_capacity(shape.len());
            let mut rem = flat;
            for len in &shape {
                idx.push(rem % len);
                rem /= len;
            }
            let mut cell = 1.0;
            for (axis, (grid, wraps)) in axes.iter().enumerate() {
                let i = idx[axis];
                let succ = if i + 1 < grid.len() {
                    flat + strides[axis]
                } else if *wraps {
                    flat - i * strides[axis]
                } else {
                    continue 'cells; // boundary: no cell in this direction
                };
                cell *= loop_space_distance(&slices[flat], &slices[succ]);
            }
            volume += cell;
        }
        Ok(volume * self.coefficient.abs().to_f64().unwrap_or(0.0))
    }
}

fn resolve(rule: &Rule, domain: &Domain, target_dim: usize, u: &[f64]) -> SliceRule {
    match rule {
        Rule::Constant => SliceRule::Constant { n: target_dim },
        Rule::Sweepout => SliceRule::Meridians {
            n: domain.dim() + 1,
            u: Domain::embed_sphere(u),
        },
        Rule::Mapped { map, inner } => SliceRule::Mapped {
            map: map.clone(),
            inner: Box::new(resolve(inner, domain, map.source_dim, u)),
        },
        Rule::ConcatPower { inner, power } => SliceRule::Repeat {
            inner: Box::new(resolve(inner, domain, target_dim, u)),
            power: *power,
        },
        Rule::Pontryagin { left, right } => {
            let k = left.domain.chart_len();
            let (ul, ur) = u.split_at(k);
            let sl = left.slice_rule(&DomainPoint(ul.to_vec()));
            let sr = right.slice_rule(&DomainPoint(ur.to_vec()));
            let ll = sampled_length(&sl, &left.time_pieces, left.samples_per_piece);
            let lr = sampled_length(&sr, &right.time_pieces, right.samples_per_piece);
            let split = if ll + lr > 0.0 { ll / (ll + lr) } else { 0.5 };
            SliceRule::Concat {
                first: Box::new(sl),
                second: Box::new(sr),
                split,
            }
        }
        Rule::DomainReflect { inner } => {
            let reflected = domain.reflect_chart(u);
            resolve(inner, domain, target_dim, &reflected)
        }
        Rule::TimeReparam { inner } => SliceRule::Smoothstep {
            inner: Box::new(resolve(inner, domain, target_dim, u)),
        },
    }
}

fn sampled_length(slice: &SliceRule, pieces: &[f64], samples: usize) -> f64 {
    let mut prev: Option<Vec<f64>> = None;
    let mut total = 0.0;
    for w in pieces.windows(2) {
        for i in 0..=samples {
            let t = w[0] + (w[1] - w[0]) * i as f64 / samples as f64;
            let p = slice.point(t);
            if let Some(q) = &prev {
                total += super::sphere::geodesic_distance(q, &p);
            }
            prev = Some(p);
        }
    }
    total
}
