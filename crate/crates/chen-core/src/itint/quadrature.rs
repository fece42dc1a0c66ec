//! Quadrature over the ordered simplex {0 <= t_1 <= ... <= t_r <= 1}.
//!
//! The composite rule subdivides each declared time piece uniformly and sums
//! over nondecreasing cell multi-indices: fully ordered cells contribute a
//! product-midpoint node, tied groups contribute the ordered centroid of the
//! sub-simplex with weight h^g / g!. Weights sum to exactly 1/r! and the rule
//! is exact on integrands constant per cell, which makes the speed factors of
//! constant-speed loops integrate exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Nodes and weights on the ordered r-simplex.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub r: usize,
    pub nodes: Vec<(Vec<f64>, f64)>,
    /// Nominal order of accuracy (2 for the composite rule, 1 for Monte Carlo).
    pub order: usize,
}

impl QuadratureRule {
    /// Composite rule aligned to `pieces` (sorted breakpoints including 0 and
    /// 1), each subdivided into `refine` equal intervals.
    pub fn composite(r: usize, pieces: &[f64], refine: usize) -> Self {
        assert!(r >= 1);
        assert!(refine >= 1);
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        for w in pieces.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let h = (b - a) / refine as f64;
            for i in 0..refine {
                intervals.push((a + i as f64 * h, h));
            }
        }
        let m = intervals.len();
        let mut nodes = Vec::new();
        // nondecreasing multi-indices of length r over m intervals
        let mut idx = vec![0usize; r];
        loop {
            // group ties
            let mut node = Vec::with_capacity(r);
            let mut weight = 1.0;
            let mut i = 0;
            while i < r {
                let mut j = i;
                while j < r && idx[j] == idx[i] {
                    j += 1;
                }
                let g = j - i;
                let (a, h) = intervals[idx[i]];
                // ordered centroid of the g-sub-simplex in this interval
                for s in 1..=g {
                    node.push(a + h * s as f64 / (g as f64 + 1.0));
                }
                weight *= h.powi(g as i32) / factorial(g);
                i = j;
            }
            nodes.push((node, weight));
            // advance nondecreasing multi-index
            let mut pos = r;
            loop {
                if pos == 0 {
                    return Self { r, nodes, order: 2 };
                }
                pos -= 1;
                if idx[pos] + 1 < m {
                    let v = idx[pos] + 1;
                    for slot in idx.iter_mut().skip(pos) {
                        *slot = v;
                    }
                    break;
                }
            }
        }
    }

    /// Uniform Monte Carlo on the simplex (sorted uniform tuples), for r too
    /// large for the composite grid.
    pub fn monte_carlo(r: usize, samples: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vol = 1.0 / factorial(r);
        let nodes = (0..samples)
            .map(|_| {
                let mut t: Vec<f64> = (0..r).map(|_| rng.gen::<f64>()).collect();
                t.sort_by(|a, b| a.partial_cmp(b).unwrap());
                (t, vol / samples as f64)
            })
            .collect();
        Self { r, nodes, order: 1 }
    }

    pub fn weight_sum(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}
