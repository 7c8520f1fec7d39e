use thiserror::Error;

/// Errors raised by the numerical pipelines.
///
/// Scalars are carried as `f64` regardless of the working precision so the
/// error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("unsupported dimension {0}; expected 1, 2 or 3")]
    Dimension(usize),

    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },

    #[error("evaluation at a singular point")]
    SingularPoint,

    #[error("wavenumber must be non-zero")]
    ZeroWavenumber,

    #[error("complex wavenumber {re}+{im}i not supported in dimension 2")]
    ComplexWavenumber { re: f64, im: f64 },

    #[error("energy must be real and positive, got {re}+{im}i")]
    NonPositiveEnergy { re: f64, im: f64 },

    #[error("matrix is numerically singular (pivot {pivot:e} at step {step})")]
    SingularMatrix { step: usize, pivot: f64 },

    #[error("scattering resonance at |k| = {modulus}: A(|k|) is numerically singular (condition estimate {condition:e})")]
    Resonance { modulus: f64, condition: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("scatterer configuration has no sites")]
    NoSites,

    #[error("sites {first} and {second} coincide (separation {separation:e})")]
    CoincidentSites {
        first: usize,
        second: usize,
        separation: f64,
    },

    #[error("non-finite coordinate or strength at site {0}")]
    NonFinite(usize),

    #[error("|k| = {k} and |l| = {l} differ")]
    EnergyShellMismatch { k: f64, l: f64 },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
