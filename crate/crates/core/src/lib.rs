//! Finite-element spectra of the constant-field magnetic Laplacian on planar
//! domains, and numerical checks of a sum inequality for its lowest
//! eigenvalues under linear maps of rotationally symmetric domains.

pub mod eigensolve;
pub mod error;
pub mod geometry;
pub mod linalg2;
pub mod mesh;
pub mod operator;
pub mod sparse;
pub mod verify;

pub use error::{Error, Result};
