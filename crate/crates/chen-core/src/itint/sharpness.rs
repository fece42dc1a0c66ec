//! Sharpness scans: pairings against concatenation powers of the sweepout
//! scale linearly in L for the degree class and quadratically for the
//! Pontryagin square, while the volume estimator stays constant.

use super::eval::{pair, PairingSummand};
use super::forms::FormSpec;
use super::{ItintError, NumericConfig};
use crate::geometry::{pontryagin_product, sweepout, LoopFamily};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanMode {
    Degree,
    Hopf,
}

impl ScanMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanMode::Degree => "degree",
            ScanMode::Hopf => "hopf",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub l: u32,
    pub value: f64,
    pub error_estimate: f64,
    pub suplength: f64,
    pub volume_estimate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessTable {
    pub mode: ScanMode,
    pub rows: Vec<SharpnessRow>,
}

fn scan_family(mode: ScanMode, l: u32, cfg: &NumericConfig) -> Result<LoopFamily, ItintError> {
    let base = sweepout(2)
        .with_samples_per_piece(cfg.slice_samples)
        .concat_power(l);
    Ok(match mode {
        ScanMode::Degree => base,
        ScanMode::Hopf => pontryagin_product(base.clone(), base)?,
    })
}

fn scan_summands(mode: ScanMode) -> Vec<PairingSummand> {
    let form = FormSpec::normalized_volume(2);
    match mode {
        ScanMode::Degree => vec![PairingSummand {
            coefficient: 1.0,
            forms: vec![form],
        }],
        ScanMode::Hopf => vec![PairingSummand {
            coefficient: 1.0,
            forms: vec![form.clone(), form],
        }],
    }
}

/// Rows (L, pairing, suplength, volume estimate) for the requested powers.
pub fn sharpness_scan(
    mode: ScanMode,
    l_values: &[u32],
    cfg: &NumericConfig,
) -> Result<SharpnessTable, ItintError> {
    let summands = scan_summands(mode);
    let mut rows = Vec::with_capacity(l_values.len());
    for &l in l_values {
        assert!(l >= 1, "powers must be positive");
        let family = scan_family(mode, l, cfg)?;
        let pairing = pair(&summands, &family, cfg)?;
        rows.push(SharpnessRow {
            l,
            value: pairing.value,
            error_estimate: pairing.error_estimate,
            suplength: family.suplength(cfg.lattice_res)?,
            volume_estimate: family.volume_estimate(cfg.lattice_res)?,
        });
    }
    Ok(SharpnessTable { mode, rows })
}
