//! Exact computations on the q-deformed Fock space.
pub mod bounds;
pub mod calculus;
pub mod combinat;
pub mod dualsys;
pub mod error;
pub mod fock;
pub mod qscalar;
mod residual;
pub mod univar;
mod word;
pub use error::{Error, Result};
pub use fock::{FockSpace, FockVector};
pub use qscalar::{Coeff, Deformation, DeformationMatrix, QPoly, Scalar};
pub use residual::Residual;
pub use word::Word;
