//! Degree and Hopf functionals realized as loop-space pairings.

use super::eval::{pair, PairingResult, PairingSummand};
use super::forms::FormSpec;
use super::{ItintError, NumericConfig};
use crate::geometry::{desuspend, sweepout, MapSpec};

/// Degree of a self-map of S^n as the pairing of the length-1 iterated
/// integral of the normalized volume form against the desuspended family.
/// Near-integer for accurate meshes.
pub fn degree_via_loops(map: &MapSpec, cfg: &NumericConfig) -> Result<PairingResult, ItintError> {
    if map.source_dim != map.target_dim {
        return Err(ItintError::Unsupported(format!(
            "degree needs a self-map, got S^{} -> S^{}",
            map.source_dim, map.target_dim
        )));
    }
    if map.source_dim < 2 {
        return Err(ItintError::Unsupported("degree needs n >= 2".into()));
    }
    let family = desuspend(map.clone(), sweepout(map.source_dim))?
        .with_samples_per_piece(cfg.slice_samples);
    let form = FormSpec::normalized_volume(map.target_dim);
    pair(
        &[PairingSummand {
            coefficient: 1.0,
            forms: vec![form],
        }],
        &family,
        cfg,
    )
}

/// Hopf invariant of a map S^{2n-1} -> S^n (n even) as the pairing of the
/// length-2 iterated integral of two normalized volume forms against the
/// desuspended family over S^{2n-2}.
pub fn hopf_via_loops(map: &MapSpec, cfg: &NumericConfig) -> Result<PairingResult, ItintError> {
    let n = map.target_dim;
    if map.source_dim != 2 * n - 1 {
        return Err(ItintError::Unsupported(format!(
            "hopf needs S^{} -> S^{}, got S^{}",
            2 * n - 1,
            n,
            map.source_dim
        )));
    }
    if !n.is_multiple_of(2) || n < 2 {
        return Err(ItintError::Unsupported(
            "hopf needs an even target dimension".into(),
        ));
    }
    let family = desuspend(map.clone(), sweepout(map.source_dim))?
        .with_samples_per_piece(cfg.slice_samples);
    let form = FormSpec::normalized_volume(n);
    pair(
        &[PairingSummand {
            coefficient: 1.0,
            forms: vec![form.clone(), form],
        }],
        &family,
        cfg,
    )
}
