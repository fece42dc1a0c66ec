//! Built-in algebra presentations used throughout the test and acceptance
//! suites, mirroring the spec files shipped under `data/algebras/`.

use super::FiniteCdga;
use crate::rational::from_i64;
use std::collections::BTreeMap;

/// Volume-form model of the n-sphere: one closed generator `w` in degree n,
/// cap n (so `w*w` is zero by truncation).
pub fn sphere_model(n: usize) -> FiniteCdga {
    assert!(n >= 2);
    FiniteCdga::new(
        vec![("w".to_string(), n)],
        BTreeMap::new(),
        BTreeMap::new(),
        n,
    )
    .expect("sphere model is valid")
}

/// Truncated polynomial model of complex projective n-space: generators
/// `w1..wn` in degrees 2..2n with `wi*wj = w(i+j)` while `i+j <= n`, zero
/// differential, cap 2n.
pub fn projective_model(n: usize) -> FiniteCdga {
    assert!(n >= 1);
    let generators: Vec<(String, usize)> =
        (1..=n).map(|i| (format!("w{i}"), 2 * i)).collect();
    let mut products = BTreeMap::new();
    for i in 1..=n {
        for j in i..=n {
            if i + j <= n {
                products.insert((i - 1, j - 1), vec![(i + j - 1, from_i64(1))]);
            }
        }
    }
    FiniteCdga::new(generators, products, BTreeMap::new(), 2 * n).expect("projective model is valid")
}

/// The 8-dimensional nonformal two-cell example: generators w_a, w_b (3),
/// w_y (5), w_ab (6), w_w, w_z (8) with d w_y = w_ab, w_a*w_b = w_ab,
/// w_a*w_y = w_w, w_b*w_y = w_z, cap 8.
pub fn nonformal8_model() -> FiniteCdga {
    let generators = vec![
        ("w_a".to_string(), 3),
        ("w_b".to_string(), 3),
        ("w_y".to_string(), 5),
        ("w_ab".to_string(), 6),
        ("w_w".to_string(), 8),
        ("w_z".to_string(), 8),
    ];
    let mut products = BTreeMap::new();
    products.insert((0, 1), vec![(3, from_i64(1))]);
    products.insert((0, 2), vec![(4, from_i64(1))]);
    products.insert((1, 2), vec![(5, from_i64(1))]);
    let mut differentials = BTreeMap::new();
    differentials.insert(2, vec![(3, from_i64(1))]);
    FiniteCdga::new(generators, products, differentials, 8).expect("nonformal8 model is valid")
}
