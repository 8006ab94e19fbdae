//! Hyperbolic lengths, truncated length spectra and explicit deformation
//! families on model Riemann surfaces and Schottky quotients.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod deform;
pub mod error;
pub mod groups;
pub mod metrics;
pub mod moebius;
pub mod quadrature;
pub mod spectrum;

pub use error::{Error, Result};
pub use metrics::{
    curve_length, Curve, HolomorphicMap, ModelSurface, Quadrature, SymmetricAnnulus,
};
pub use moebius::{IsometryClass, Model, Moebius};
