//! Multipoint point scatterers (zero-range potentials) in one, two and three
//! dimensions, and constructive transmission eigenfunctions.
//!
//! The numerical core is generic over the scalar type (`f32` or `f64`); the
//! aliases below fix it to `f64`.
//!
//! ```
//! use mps_core::{Dimension, Scatterer, Site};
//!
//! let s = Scatterer::new(Dimension::One, vec![Site::new(vec![0.0], 1.0)]).unwrap();
//! let f = s.amplitude(&[1.0], &[-1.0]).unwrap();
//! // q = −1/(α + 1/2i) = −0.8 − 0.4i and f = q/2π
//! assert!((f * std::f64::consts::TAU - mps_core::Complex64::new(-0.8, -0.4)).norm() < 1e-14);
//! ```

pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod real;
pub mod s_operator;
pub mod scatterer;
pub mod space;
pub mod special;
pub mod tev_interior;
pub mod tev_strong;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use quadrature::QuadratureRule;
pub use real::Real;
pub use s_operator::{build_s_matrix, SMatrix};
pub use scatterer::{MultipointScatterer, Site, Strength};
pub use space::Dimension;
pub use special::Wavenumber;
pub use tev_interior::{
    boundary_match_check, interior_eigenfunctions, lemma1_verify, plane_wave_family, Ball,
    InteriorEigenfunction, PlaneWaveFamily,
};
pub use tev_strong::{
    d1_single_point_eigenvector, moment_matrix, strong_eigenfunctions, StrongTevReport,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Scatterer = MultipointScatterer<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type Rule = QuadratureRule<f64>;
pub type ScatteringMatrix = SMatrix<f64>;
pub type Family = PlaneWaveFamily<f64>;
pub type Eigenfunction = InteriorEigenfunction<f64>;
