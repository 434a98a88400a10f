//! Density matrices in the polarization-operator (spherical tensor) basis.

pub mod angular;
pub mod bloch;
pub mod contour;
pub mod eigen;
pub mod error;
pub mod io;
pub mod matrix;
pub mod polarization;
pub mod positivity;
pub mod sampling;
pub mod sections;
pub mod verify;

pub use angular::{cgc, wigner6j, HalfInt, SignedSqrtRational};
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use polarization::PolOpLabel;
