//! Algebra spec files: a line-oriented key/value document.
//!
//! ```text
//! # comment
//! degree_cap 8
//!
//! [generators]
//! w_a 3
//! w_b 3
//!
//! [products]
//! w_a w_b = w_ab
//! w_a w_a = 0
//!
//! [differentials]
//! w_y = w_ab
//! ```
//!
//! Right-hand sides are rational combinations: `0`, `w_ab`, `3/2 w_w - w_z`.
//! Unlisted products are zero; graded-commutative mirror entries are filled in
//! automatically. `to_spec_string` emits a canonical form that reparses to an
//! identical algebra and is a fixed point of parse-then-print.

use super::{AlgebraError, Combo, FiniteCdga};
use crate::rational::{self, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(PartialEq)]
enum Section {
    None,
    Generators,
    Products,
    Differentials,
}

struct RawSpec {
    degree_cap: Option<usize>,
    generators: Vec<(String, usize)>,
    products: Vec<(usize, String, String, Vec<(Rational, String)>)>,
    differentials: Vec<(usize, String, Vec<(Rational, String)>)>,
}

/// Parse a combination: `0` or signed terms `[coef] label` joined by +/-.
fn parse_combo(line_no: usize, s: &str) -> Result<Vec<(Rational, String)>, ParseError> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    // split into sign-prefixed chunks
    let mut rest = s;
    let mut sign = rational::one();
    if let Some(r) = rest.strip_prefix('-') {
        sign = -sign;
        rest = r.trim_start();
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r.trim_start();
    }
    loop {
        let end = rest
            .char_indices()
            .find(|(i, c)| (*c == '+' || *c == '-') && *i > 0)
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let chunk = rest[..end].trim();
        if chunk.is_empty() {
            return Err(err(line_no, "empty term in combination"));
        }
        let mut parts = chunk.split_whitespace();
        let first = parts.next().unwrap();
        let (coef, label) = if let Some(q) = rational::parse(first) {
            let label = parts
                .next()
                .ok_or_else(|| err(line_no, "coefficient without generator label"))?;
            (q, label)
        } else {
            (rational::one(), first)
        };
        if parts.next().is_some() {
            return Err(err(line_no, format!("trailing tokens in term `{chunk}`")));
        }
        terms.push((&sign * coef, label.to_string()));
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'-' {
            -rational::one()
        } else {
            rational::one()
        };
        rest = rest[end + 1..].trim_start();
    }
    Ok(terms)
}

fn parse_raw(input: &str) -> Result<RawSpec, ParseError> {
    let mut raw = RawSpec {
        degree_cap: None,
        generators: Vec::new(),
        products: Vec::new(),
        differentials: Vec::new(),
    };
    let mut section = Section::None;
    for (idx, full_line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.find('#') {
            Some(p) => &full_line[..p],
            None => full_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match name.trim() {
                "generators" => Section::Generators,
                "products" => Section::Products,
                "differentials" => Section::Differentials,
                other => return Err(err(line_no, format!("unknown section [{other}]"))),
            };
            continue;
        }
        if let Some(v) = line.strip_prefix("degree_cap") {
            if section != Section::None {
                return Err(err(line_no, "degree_cap must precede the sections"));
            }
            let cap: usize = v
                .trim()
                .parse()
                .map_err(|_| err(line_no, "degree_cap expects an integer"))?;
            raw.degree_cap = Some(cap);
            continue;
        }
        match section {
            Section::None => return Err(err(line_no, format!("unexpected line `{line}`"))),
            Section::Generators => {
                let mut parts = line.split_whitespace();
                let label = parts.next().unwrap().to_string();
                let degree: usize = parts
                    .next()
                    .ok_or_else(|| err(line_no, "generator line expects `label degree`"))?
                    .parse()
                    .map_err(|_| err(line_no, "generator degree expects an integer"))?;
                if parts.next().is_some() {
                    return Err(err(line_no, "trailing tokens on generator line"));
                }
                raw.generators.push((label, degree));
            }
            Section::Products => {
                let (lhs, rhs) = line
                    .split_once('=')
                    .ok_or_else(|| err(line_no, "product line expects `a b = combination`"))?;
                let mut parts = lhs.split_whitespace();
                let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(a), Some(b), None) => (a.to_string(), b.to_string()),
                    _ => return Err(err(line_no, "product left side expects two labels")),
                };
                raw.products.push((line_no, a, b, parse_combo(line_no, rhs)?));
            }
            Section::Differentials => {
                let (lhs, rhs) = line
                    .split_once('=')
                    .ok_or_else(|| err(line_no, "differential line expects `a = combination`"))?;
                let label = lhs.trim();
                if label.is_empty() || label.split_whitespace().count() != 1 {
                    return Err(err(line_no, "differential left side expects one label"));
                }
                raw.differentials
                    .push((line_no, label.to_string(), parse_combo(line_no, rhs)?));
            }
        }
    }
    Ok(raw)
}

impl FiniteCdga {
    /// Parse and validate an algebra spec document.
    pub fn from_spec_str(input: &str) -> Result<Self, AlgebraError> {
        let raw = parse_raw(input)?;
        let cap = raw
            .degree_cap
            .ok_or_else(|| ParseError {
                line: 0,
                message: "missing degree_cap".into(),
            })?;
        let mut index = BTreeMap::new();
        for (i, (label, _)) in raw.generators.iter().enumerate() {
            index.insert(label.clone(), i);
        }
        let resolve_combo = |terms: &[(Rational, String)],
                             what: &str|
         -> Result<Combo, AlgebraError> {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (c, label) in terms {
                let i = *index.get(label).ok_or_else(|| {
                    AlgebraError::AlgebraInvalid(format!(
                        "{what} references `{label}` which is not in the basis"
                    ))
                })?;
                let e = acc.entry(i).or_insert_with(rational::zero);
                *e += c;
                if e.is_zero() {
                    acc.remove(&i);
                }
            }
            Ok(super::combo_from_map(acc))
        };
        let mut products = BTreeMap::new();
        for (line, a, b, combo) in &raw.products {
            let ia = *index.get(a).ok_or_else(|| {
                AlgebraError::Parse(err(*line, format!("unknown generator `{a}`")))
            })?;
            let ib = *index.get(b).ok_or_else(|| {
                AlgebraError::Parse(err(*line, format!("unknown generator `{b}`")))
            })?;
            let combo = resolve_combo(combo, &format!("product {a}*{b}"))?;
            if products.insert((ia, ib), combo).is_some() {
                return Err(AlgebraError::AlgebraInvalid(format!(
                    "product {a}*{b} declared twice"
                )));
            }
        }
        let mut differentials = BTreeMap::new();
        for (line, label, combo) in &raw.differentials {
            let i = *index.get(label).ok_or_else(|| {
                AlgebraError::Parse(err(*line, format!("unknown generator `{label}`")))
            })?;
            let combo = resolve_combo(combo, &format!("differential of {label}"))?;
            if differentials.insert(i, combo).is_some() {
                return Err(AlgebraError::AlgebraInvalid(format!(
                    "differential of {label} declared twice"
                )));
            }
        }
        FiniteCdga::new(raw.generators, products, differentials, cap)
    }

    pub fn from_spec_file(path: &std::path::Path) -> Result<Self, AlgebraError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            AlgebraError::Parse(ParseError {
                line: 0,
                message: format!("cannot read {}: {e}", path.display()),
            })
        })?;
        Self::from_spec_str(&text)
    }

    fn format_combo(&self, combo: &Combo) -> String {
        if combo.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (pos, (i, c)) in combo.iter().enumerate() {
            let neg = c < &rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if pos == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != rational::one() {
                out.push_str(&rational::format(&mag));
                out.push(' ');
            }
            out.push_str(self.label(*i));
        }
        out
    }

    /// Canonical spec document. Only products with both factors within the cap
    /// and `i <= j` in declaration order are listed (mirrors are implied), and
    /// only nonzero differentials.
    pub fn to_spec_string(&self) -> String {
        let n = self.generator_count();
        let mut out = String::new();
        out.push_str(&format!("degree_cap {}\n\n[generators]\n", self.degree_cap()));
        for i in 0..n {
            out.push_str(&format!("{} {}\n", self.label(i), self.degree(i)));
        }
        out.push_str("\n[products]\n");
        for i in 0..n {
            for j in i..n {
                if self.degree(i) + self.degree(j) > self.degree_cap() {
                    continue;
                }
                let combo = self.product_combo(i, j);
                if combo.is_empty() {
                    continue;
                }
                out.push_str(&format!(
                    "{} {} = {}\n",
                    self.label(i),
                    self.label(j),
                    self.format_combo(combo)
                ));
            }
        }
        out.push_str("\n[differentials]\n");
        for i in 0..n {
            let combo = self.differential_combo(i);
            if !combo.is_empty() {
                out.push_str(&format!(
                    "{} = {}\n",
                    self.label(i),
                    self.format_combo(combo)
                ));
            }
        }
        out
    }
}


#[cfg(test)]
mod data_files {
    use super::super::catalog;
    use super::*;
    use std::path::PathBuf;

    fn data_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/algebras")
    }

    #[test]
    fn shipped_files_match_catalog_bit_exactly() {
        let cases: Vec<(&str, FiniteCdga)> = vec![
            ("nonformal8.alg", catalog::nonformal8_model()),
            ("sphere2.alg", catalog::sphere_model(2)),
            ("sphere3.alg", catalog::sphere_model(3)),
            ("sphere4.alg", catalog::sphere_model(4)),
            ("sphere5.alg", catalog::sphere_model(5)),
            ("cp1.alg", catalog::projective_model(1)),
            ("cp2.alg", catalog::projective_model(2)),
            ("cp3.alg", catalog::projective_model(3)),
        ];
        for (file, alg) in cases {
            let text = std::fs::read_to_string(data_dir().join(file)).unwrap();
            assert_eq!(text, alg.to_spec_string(), "{file} drifted from the catalog");
            assert_eq!(FiniteCdga::from_spec_str(&text).unwrap(), alg);
        }
    }
}
