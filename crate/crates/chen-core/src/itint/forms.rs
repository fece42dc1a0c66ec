//! Symbolic differential forms on spheres with pointwise evaluation and
//! analytic comass norms.

use super::ItintError;
use crate::geometry::domain_det;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Riemannian volume of the round unit sphere S^m.
pub fn sphere_volume(m: usize) -> f64 {
    // vol(S^m) = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
    2.0 * PI.powf((m as f64 + 1.0) / 2.0) / gamma_half_integer(m + 1)
}

/// Gamma(k/2) for integer k >= 1.
fn gamma_half_integer(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        // Gamma(n) = (n-1)!
        (1..k / 2).map(|i| i as f64).product()
    } else {
        // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
        let n = k / 2;
        let mut v = PI.sqrt();
        for i in 0..n {
            v *= i as f64 + 0.5;
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FormKind {
    /// Volume form normalized so its integral over the sphere is 1; its
    /// pointwise comass is 1/vol(S^m).
    NormalizedVolume,
    /// Wedge product of two forms on the same sphere.
    Wedge(Box<FormSpec>, Box<FormSpec>),
    /// Scalar multiple.
    Scaled(f64, Box<FormSpec>),
}

/// A differential form on a sphere from the symbolic catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormSpec {
    pub target_dim: usize,
    pub degree: usize,
    pub kind: FormKind,
    /// Analytic comass upper bound (exact for volume forms, submultiplicative
    /// with the binomial factor for wedges).
    pub sup_norm: f64,
}

impl FormSpec {
    pub fn normalized_volume(m: usize) -> Self {
        Self {
            target_dim: m,
            degree: m,
            kind: FormKind::NormalizedVolume,
            sup_norm: 1.0 / sphere_volume(m),
        }
    }

    pub fn wedge(a: FormSpec, b: FormSpec) -> Result<Self, ItintError> {
        if a.target_dim != b.target_dim {
            return Err(ItintError::TargetMismatch {
                form: b.target_dim,
                family: a.target_dim,
            });
        }
        let degree = a.degree + b.degree;
        let binom = binomial(degree, a.degree);
        Ok(Self {
            target_dim: a.target_dim,
            degree,
            sup_norm: binom * a.sup_norm * b.sup_norm,
            kind: FormKind::Wedge(Box::new(a), Box::new(b)),
        })
    }

    pub fn scaled(c: f64, inner: FormSpec) -> Self {
        Self {
            target_dim: inner.target_dim,
            degree: inner.degree,
            sup_norm: c.abs() * inner.sup_norm,
            kind: FormKind::Scaled(c, Box::new(inner)),
        }
    }

    /// Evaluate at a point against `degree` tangent vectors.
    pub fn eval(&self, p: &[f64], args: &[&[f64]]) -> f64 {
        debug_assert_eq!(args.len(), self.degree);
        match &self.kind {
            FormKind::NormalizedVolume => {
                let mut rows: Vec<Vec<f64>> = Vec::with_capacity(p.len());
                rows.push(p.to_vec());
                for a in args {
                    rows.push(a.to_vec());
                }
                domain_det(&rows) / sphere_volume(self.target_dim)
            }
            FormKind::Scaled(c, inner) => c * inner.eval(p, args),
            FormKind::Wedge(a, b) => {
                // sum over (deg a, deg b) shuffles with signs
                let k = a.degree;
                let total = self.degree;
                let mut sum = 0.0;
                for combo in combinations(total, k) {
                    let mut in_first = vec![false; total];
                    for i in &combo {
                        in_first[*i] = true;
                    }
                    let first: Vec<&[f64]> = combo.iter().map(|i| args[*i]).collect();
                    let rest: Vec<&[f64]> = (0..total).filter(|i| !in_first[*i]).map(|i| args[i]).collect();
                    let mut seq: Vec<usize> = combo.clone();
                    seq.extend((0..total).filter(|i| !in_first[*i]));
                    sum += permutation_sign(&seq) * a.eval(p, &first) * b.eval(p, &rest);
                }
                sum
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut out = 1.0;
    for i in 0..k.min(n - k) {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// All increasing k-subsets of 0..n.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Sign of the permutation given as a sequence of distinct indices.
pub(crate) fn permutation_sign(seq: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_volumes() {
        assert!((sphere_volume(1) - 2.0 * PI).abs() < 1e-12);
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn normalized_volume_on_orthonormal_frame() {
        let form = FormSpec::normalized_volume(2);
        let p = [1.0, 0.0, 0.0];
        let u = [0.0, 1.0, 0.0];
        let v = [0.0, 0.0, 1.0];
        let val = form.eval(&p, &[&u, &v]);
        assert!((val - 1.0 / (4.0 * PI)).abs() < 1e-14);
        // antisymmetry
        assert!((form.eval(&p, &[&v, &u]) + val).abs() < 1e-14);
        assert!((form.sup_norm - 1.0 / (4.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn wedge_of_top_forms_vanishes() {
        let v = FormSpec::normalized_volume(2);
        let w = FormSpec::wedge(v.clone(), v).unwrap();
        assert_eq!(w.degree, 4);
        let p = [0.0, 0.0, 1.0];
        let frame: Vec<Vec<f64>> = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![1.0, -1.0, 0.0],
        ];
        let args: Vec<&[f64]> = frame.iter().map(|v| v.as_slice()).collect();
        assert!(w.eval(&p, &args).abs() < 1e-12);
    }

    #[test]
    fn scaling() {
        let v = FormSpec::normalized_volume(2);
        let s = FormSpec::scaled(-3.0, v.clone());
        let p = [1.0, 0.0, 0.0];
        let u = [0.0, 1.0, 0.0];
        let w = [0.0, 0.0, 1.0];
        assert!((s.eval(&p, &[&u, &w]) + 3.0 * v.eval(&p, &[&u, &w])).abs() < 1e-14);
        assert!((s.sup_norm - 3.0 / (4.0 * PI)).abs() < 1e-14);
    }
}
