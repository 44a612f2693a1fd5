use num_complex::Complex64;
use thiserror::Error;

use crate::domain::Hyperplane;

/// Failure modes of the evaluation, residue and classification routines.
///
/// Each variant is a distinct error class; the command-line front end maps
/// them one-to-one onto exit codes.
#[derive(Debug, Clone, Error)]
pub enum ZetaError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The point is outside the region where the requested method applies.
    #[error("point outside the direct-summation region: {0}; use the continued evaluator")]
    Region(String),

    #[error("point lies within {distance:e} of the polar hyperplane {hyperplane}")]
    PoleProximity {
        hyperplane: Hyperplane,
        distance: f64,
    },

    /// A division by a quantity below the conditioning floor was required.
    #[error("ill-conditioned division: |{quantity}| = {magnitude:e} is below the floor {floor:e}")]
    Conditioning {
        quantity: String,
        magnitude: f64,
        floor: f64,
    },

    /// The requested accuracy could not be certified.
    #[error("accuracy target {eps:e} not met: achieved error bound {error_bound:e}")]
    Accuracy {
        value: Complex64,
        error_bound: f64,
        eps: f64,
    },

    #[error("point is not on {hyperplane}: offset {offset:e}")]
    OffHyperplane { hyperplane: Hyperplane, offset: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, ZetaError>;
