//! Comparison of truncated length spectra and the surfaces whose spectrum
//! is trivial.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::TruncatedLengthSpectrum;
use crate::metrics::ModelSurface;

pub const DEFAULT_COMPARE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Distinct,
    /// Equal up to tolerance at this truncation; says nothing about conjugacy.
    IndistinguishableAtTruncation,
}

/// First sorted index where the spectra disagree. A missing length means
/// that spectrum has fewer entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub length_a: Option<f64>,
    pub length_b: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub tolerance: f64,
}

pub fn compare(
    a: &TruncatedLengthSpectrum,
    b: &TruncatedLengthSpectrum,
    tolerance: f64,
) -> Result<SpectrumComparison> {
    if a.max_word_length != b.max_word_length {
        return Err(Error::MismatchedTruncation(
            a.max_word_length,
            b.max_word_length,
        ));
    }
    if !(tolerance >= 0.0) || !tolerance.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be finite and non-negative, got {tolerance}"
        )));
    }
    let (la, lb) = (a.lengths(), b.lengths());
    let mismatch = la
        .iter()
        .zip(&lb)
        .position(|(x, y)| !((x - y).abs() <= tolerance));
    let index = match mismatch {
        Some(i) => Some(i),
        None if la.len() != lb.len() => Some(la.len().min(lb.len())),
        None => None,
    };
    Ok(match index {
        Some(index) => SpectrumComparison {
            verdict: Verdict::Distinct,
            witness: Some(Witness {
                index,
                length_a: la.get(index).copied(),
                length_b: lb.get(index).copied(),
            }),
            tolerance,
        },
        None => SpectrumComparison {
            verdict: Verdict::IndistinguishableAtTruncation,
            witness: None,
            tolerance,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Triviality {
    /// Hyperbolic, but every simple closed curve shortens to length 0.
    Trivial,
    NonTrivial,
    /// Not hyperbolic; the Kobayashi pseudometric vanishes.
    ZeroMetric,
}

/// The disc, the punctured disc and the thrice-punctured sphere are the
/// hyperbolic surfaces with spectrum `{0}`. The last is not a
/// [`ModelSurface`].
pub fn triviality(surface: &ModelSurface) -> Triviality {
    match surface {
        ModelSurface::Disc | ModelSurface::PuncturedDisc => Triviality::Trivial,
        ModelSurface::Annulus { .. } => Triviality::NonTrivial,
        ModelSurface::Plane | ModelSurface::PuncturedPlane => Triviality::ZeroMetric,
    }
}

/// Whether the length spectrum is `{0}`; non-hyperbolic surfaces count as
/// trivially zero.
pub fn classify_trivial(surface: &ModelSurface) -> bool {
    triviality(surface) != Triviality::NonTrivial
}
