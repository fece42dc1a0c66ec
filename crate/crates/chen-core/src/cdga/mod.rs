//! Finite graded-commutative differential algebras over exact rationals.
//!
//! An algebra is presented by a basis of positive-degree generators (the unit
//! in degree 0 is implicit), a structure-constant multiplication table and a
//! differential matrix, all truncated at a degree cap: products landing above
//! the cap are zero. Validation is eager and exhaustive — graded commutativity,
//! associativity, d^2 = 0 and the graded Leibniz rule are checked exactly on
//! every basis pair/triple at construction.

mod spec_file;

pub mod catalog;

pub use spec_file::ParseError;

use crate::rational::{self, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid algebra: {0}")]
    AlgebraInvalid(String),
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("degree {degree} out of range 0..={cap}")]
    DegreeOutOfRange { degree: usize, cap: usize },
}

/// Sparse rational combination of basis generators, sorted by index.
pub(crate) type Combo = Vec<(usize, Rational)>;

pub(crate) fn combo_add(acc: &mut BTreeMap<usize, Rational>, c: &Combo, scale: &Rational) {
    for (i, v) in c {
        let e = acc.entry(*i).or_insert_with(rational::zero);
        *e += v * scale;
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

pub(crate) fn combo_from_map(m: BTreeMap<usize, Rational>) -> Combo {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// A validated finite CDGA presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCdga {
    degree_cap: usize,
    labels: Vec<String>,
    degrees: Vec<usize>,
    index: BTreeMap<String, usize>,
    /// mult[i][j]: product of generators i and j (empty when zero or above cap)
    mult: Vec<Vec<Combo>>,
    /// diff[i]: differential of generator i (degree + 1)
    diff: Vec<Combo>,
}

impl FiniteCdga {
    /// Assemble and validate. `products` maps ordered generator index pairs to
    /// combinations; missing pairs default to zero and graded-commutative
    /// mirrors are auto-filled.
    pub fn new(
        generators: Vec<(String, usize)>,
        products: BTreeMap<(usize, usize), Combo>,
        differentials: BTreeMap<usize, Combo>,
        degree_cap: usize,
    ) -> Result<Self, AlgebraError> {
        let invalid = |msg: String| AlgebraError::AlgebraInvalid(msg);
        if degree_cap == 0 {
            return Err(invalid("degree_cap must be at least 1".into()));
        }
        let n = generators.len();
        let mut index = BTreeMap::new();
        for (i, (label, degree)) in generators.iter().enumerate() {
            if label == "1" {
                return Err(invalid("label 1 is reserved for the unit".into()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(invalid(format!("duplicate generator {label}")));
            }
            if *degree == 0 {
                return Err(invalid(format!("generator {label} has degree 0")));
            }
            if *degree > degree_cap {
                return Err(invalid(format!(
                    "generator {label} has degree {degree} above cap {degree_cap}"
                )));
            }
        }
        let labels: Vec<String> = generators.iter().map(|g| g.0.clone()).collect();
        let degrees: Vec<usize> = generators.iter().map(|g| g.1).collect();

        let mut mult = vec![vec![Combo::new(); n]; n];
        for ((i, j), combo) in &products {
            if *i >= n || *j >= n {
                return Err(invalid("product entry references unknown generator".into()));
            }
            let target = degrees[*i] + degrees[*j];
            if target > degree_cap {
                if !combo.is_empty() {
                    return Err(invalid(format!(
                        "product {}*{} lands above the degree cap but is declared nonzero",
                        labels[*i], labels[*j]
                    )));
                }
                continue;
            }
            for (k, _) in combo {
                if *k >= n {
                    return Err(invalid("product lands outside the algebra".into()));
                }
                if degrees[*k] != target {
                    return Err(invalid(format!(
                        "product {}*{} has a term of degree {} (expected {})",
                        labels[*i], labels[*j], degrees[*k], target
                    )));
                }
            }
            mult[*i][*j] = combo.clone();
        }
        // graded-commutative mirrors: fill or cross-check
        for i in 0..n {
            for j in 0..n {
                if products.contains_key(&(i, j)) && !products.contains_key(&(j, i)) {
                    let sign = koszul_sign(degrees[i], degrees[j]);
                    mult[j][i] = mult[i][j]
                        .iter()
                        .map(|(k, v)| (*k, v * &sign))
                        .collect();
                }
            }
        }
        let mut diff = vec![Combo::new(); n];
        for (i, combo) in &differentials {
            if *i >= n {
                return Err(invalid("differential entry references unknown generator".into()));
            }
            let target = degrees[*i] + 1;
            for (k, _) in combo {
                if *k >= n {
                    return Err(invalid(format!(
                        "differential of {} lands outside the algebra",
                        labels[*i]
                    )));
                }
                if degrees[*k] != target {
                    return Err(invalid(format!(
                        "differential of {} has a term of degree {} (expected {})",
                        labels[*i], degrees[*k], target
                    )));
                }
            }
            if target <= degree_cap {
                diff[*i] = combo.clone();
            } else if !combo.is_empty() {
                return Err(invalid(format!(
                    "differential of {} lands above the degree cap",
                    labels[*i]
                )));
            }
        }

        let alg = Self {
            degree_cap,
            labels,
            degrees,
            index,
            mult,
            diff,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let invalid = |msg: String| AlgebraError::AlgebraInvalid(msg);
        let n = self.labels.len();
        // graded commutativity
        for i in 0..n {
            for j in 0..n {
                let sign = koszul_sign(self.degrees[i], self.degrees[j]);
                let mut acc = BTreeMap::new();
                combo_add(&mut acc, &self.mult[i][j], &rational::one());
                combo_add(&mut acc, &self.mult[j][i], &-sign);
                if !acc.is_empty() {
                    return Err(invalid(format!(
                        "graded commutativity fails on {}*{}",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        // associativity within the cap
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut lhs = BTreeMap::new();
                    for (m, c) in &self.mult[i][j] {
                        combo_add(&mut lhs, self.product_combo(*m, k), c);
                    }
                    let mut rhs = BTreeMap::new();
                    for (m, c) in &self.mult[j][k] {
                        combo_add(&mut rhs, self.product_combo(i, *m), c);
                    }
                    for (m, c) in rhs {
                        let e = lhs.entry(m).or_insert_with(rational::zero);
                        *e -= c;
                        if e.is_zero() {
                            lhs.remove(&m);
                        }
                    }
                    if !lhs.is_empty() {
                        return Err(invalid(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        // d o d = 0
        for i in 0..n {
            let mut acc = BTreeMap::new();
            for (k, c) in &self.diff[i] {
                combo_add(&mut acc, &self.diff[*k], c);
            }
            if !acc.is_empty() {
                return Err(invalid(format!("d\u{b2}\u{2260}0 on {}", self.labels[i])));
            }
        }
        // graded Leibniz: d(ab) = (da)b + (-1)^{deg a} a(db)
        for i in 0..n {
            for j in 0..n {
                let mut acc = BTreeMap::new();
                for (m, c) in &self.mult[i][j] {
                    combo_add(&mut acc, &self.diff[*m], c);
                }
                for (m, c) in &self.diff[i] {
                    combo_add(&mut acc, self.product_combo(*m, j), &-c);
                }
                let sign = Rational::from_integer((-1i64).pow((self.degrees[i] % 2) as u32).into());
                for (m, c) in &self.diff[j] {
                    combo_add(&mut acc, self.product_combo(i, *m), &-(&sign * c));
                }
                if !acc.is_empty() {
                    return Err(invalid(format!(
                        "Leibniz fails on {}*{}",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Smallest generator degree; bar enumeration needs this to decide whether
    /// a default length cap is safe.
    pub fn min_generator_degree(&self) -> Option<usize> {
        self.degrees.iter().copied().min()
    }

    /// Product of two generators as a combination; empty when zero (including
    /// products above the cap).
    pub(crate) fn product_combo(&self, i: usize, j: usize) -> &Combo {
        &self.mult[i][j]
    }

    pub(crate) fn differential_combo(&self, i: usize) -> &Combo {
        &self.diff[i]
    }

    /// Basis labels in the given degree; degree 0 is the implicit unit.
    pub fn basis_of_degree(&self, degree: usize) -> Result<Vec<String>, AlgebraError> {
        if degree > self.degree_cap {
            return Err(AlgebraError::DegreeOutOfRange {
                degree,
                cap: self.degree_cap,
            });
        }
        if degree == 0 {
            return Ok(vec!["1".to_string()]);
        }
        Ok(self
            .labels
            .iter()
            .zip(&self.degrees)
            .filter(|(_, d)| **d == degree)
            .map(|(l, _)| l.clone())
            .collect())
    }
}

pub(crate) fn koszul_sign(deg_a: usize, deg_b: usize) -> Rational {
    if (deg_a * deg_b).is_multiple_of(2) {
        rational::one()
    } else {
        -rational::one()
    }
}

/// Degree of an element: zero element, homogeneous of a degree, or mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementDegree {
    Zero,
    Homogeneous(usize),
    Mixed,
}

/// A rational combination of the unit and basis generators of one algebra.
#[derive(Debug, Clone)]
pub struct Element {
    algebra: Arc<FiniteCdga>,
    unit: Rational,
    coeffs: BTreeMap<usize, Rational>,
}

impl Element {
    pub fn zero(algebra: Arc<FiniteCdga>) -> Self {
        Self {
            algebra,
            unit: rational::zero(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unit(algebra: Arc<FiniteCdga>) -> Self {
        Self {
            algebra,
            unit: rational::one(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn generator(algebra: Arc<FiniteCdga>, label: &str) -> Option<Self> {
        let i = algebra.generator_index(label)?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, rational::one());
        Some(Self {
            algebra,
            unit: rational::zero(),
            coeffs,
        })
    }

    pub fn algebra(&self) -> &Arc<FiniteCdga> {
        &self.algebra
    }

    pub fn coefficient(&self, label: &str) -> Rational {
        if label == "1" {
            return self.unit.clone();
        }
        self.algebra
            .generator_index(label)
            .and_then(|i| self.coeffs.get(&i).cloned())
            .unwrap_or_else(rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero() && self.coeffs.is_empty()
    }

    pub fn degree(&self) -> ElementDegree {
        let mut degs: Vec<usize> = self
            .coeffs
            .keys()
            .map(|i| self.algebra.degree(*i))
            .collect();
        if !self.unit.is_zero() {
            degs.push(0);
        }
        degs.dedup();
        degs.sort_unstable();
        degs.dedup();
        match degs.len() {
            0 => ElementDegree::Zero,
            1 => ElementDegree::Homogeneous(degs[0]),
            _ => ElementDegree::Mixed,
        }
    }

    fn same_algebra(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        if !self.same_algebra(other) {
            return Err(AlgebraError::MixedAlgebras);
        }
        let mut out = self.clone();
        out.unit += &other.unit;
        for (i, v) in &other.coeffs {
            let e = out.coeffs.entry(*i).or_insert_with(rational::zero);
            *e += v;
            if e.is_zero() {
                out.coeffs.remove(i);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero(self.algebra.clone());
        }
        let mut out = self.clone();
        out.unit *= c;
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    /// Bilinear extension of the structure-constant table; Koszul signs are
    /// baked into the table.
    pub fn multiply(&self, other: &Element) -> Result<Element, AlgebraError> {
        if !self.same_algebra(other) {
            return Err(AlgebraError::MixedAlgebras);
        }
        let mut acc = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                combo_add(&mut acc, self.algebra.product_combo(*i, *j), &(a * b));
            }
        }
        let mut out = Element {
            algebra: self.algebra.clone(),
            unit: &self.unit * &other.unit,
            coeffs: acc,
        };
        // unit acts as identity
        if !self.unit.is_zero() {
            for (j, b) in &other.coeffs {
                let e = out.coeffs.entry(*j).or_insert_with(rational::zero);
                *e += &self.unit * b;
                if e.is_zero() {
                    out.coeffs.remove(j);
                }
            }
        }
        if !other.unit.is_zero() {
            for (i, a) in &self.coeffs {
                let e = out.coeffs.entry(*i).or_insert_with(rational::zero);
                *e += a * &other.unit;
                if e.is_zero() {
                    out.coeffs.remove(i);
                }
            }
        }
        Ok(out)
    }

    /// Linear extension of the differential; raises degree by one.
    pub fn differential(&self) -> Element {
        let mut acc = BTreeMap::new();
        for (i, c) in &self.coeffs {
            combo_add(&mut acc, self.algebra.differential_combo(*i), c);
        }
        Element {
            algebra: self.algebra.clone(),
            unit: rational::zero(),
            coeffs: acc,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut write_term = |f: &mut fmt::Formatter<'_>,
                              c: &Rational,
                              label: &str|
         -> fmt::Result {
            let neg = c < &rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag != rational::one() || label == "1" {
                write!(f, "{}", rational::format(&mag))?;
                if label != "1" {
                    write!(f, " ")?;
                }
            }
            if label != "1" {
                write!(f, "{label}")?;
            }
            Ok(())
        };
        if !self.unit.is_zero() {
            write_term(f, &self.unit.clone(), "1")?;
        }
        for (i, c) in &self.coeffs {
            write_term(f, c, self.algebra.label(*i))?;
        }
        Ok(())
    }
}
