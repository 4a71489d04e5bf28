use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid elliptic context: {0}")]
    InvalidContext(String),

    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),

    /// A half-bracket argument whose field-affine part does not give a
    /// positive real bracket value.
    #[error("regime violation: [{argument}] = {value} is not positive real")]
    RegimeViolation {
        argument: Complex64,
        value: Complex64,
    },

    #[error("singular height: |[{argument}]| = {modulus:e} is below the guard threshold")]
    SingularHeight { argument: Complex64, modulus: f64 },

    #[error("bracket overflow at u = {0}")]
    Range(Complex64),

    #[error("face deltas {0:?} do not correspond to a non-zero weight")]
    ZeroWeightFace((i32, i32, i32)),

    #[error("function vanishes (|f| = {modulus:e}) on the contour near {point}")]
    BoundaryZero { point: Complex64, modulus: f64 },

    #[error("root polishing failed to converge near {0}")]
    ConvergenceFailure(Complex64),
}

pub type Result<T> = std::result::Result<T, Error>;
