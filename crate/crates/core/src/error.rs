use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has non-positive determinant {0}")]
    NonPositiveDeterminant(f64),

    #[error("point ({re}, {im}) lies outside the domain of {domain}")]
    OutsideDomain { re: f64, im: f64, domain: String },

    #[error("point ({re}, {im}) is a pole of the transformation")]
    Pole { re: f64, im: f64 },

    #[error("isometric circle undefined: transformation fixes the disc centre's pole")]
    UndefinedIsometricCircle,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("finite-difference stencil needs clearance {needed}, have {available}")]
    InsufficientClearance { needed: f64, available: f64 },

    #[error("{0} carries the zero metric; hyperbolic quantities are undefined")]
    NonHyperbolicSurface(String),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("image of ({re}, {im}) leaves the target domain {domain}")]
    ImageOutsideTarget { re: f64, im: f64, domain: String },

    #[error("word {word} evaluates to a non-hyperbolic element (|trace| = {trace})")]
    NonHyperbolicWord { word: String, trace: f64 },

    #[error("ping-pong certification failed: {0}")]
    CertificationFailed(String),

    #[error("spectra truncated at different word lengths ({0} vs {1})")]
    MismatchedTruncation(usize, usize),
}

impl Error {
    pub(crate) fn outside(z: num_complex::Complex64, domain: impl ToString) -> Self {
        Error::OutsideDomain {
            re: z.re,
            im: z.im,
            domain: domain.to_string(),
        }
    }

    /// Certification errors are reported separately from precondition errors by the CLI.
    pub fn is_certification_failure(&self) -> bool {
        matches!(
            self,
            Error::CertificationFailed(_) | Error::NonHyperbolicWord { .. }
        )
    }
}
