//! Exact scalars in three representations, the q-combinatorial quantities
//! built from them, and the deformation parameters of the Fock space.

mod analytic;
mod coeff;
mod deformation;
mod poly;
mod qnum;
mod scalar;

pub use analytic::{analytic_constants, AnalyticConstants, PRODUCT_TAIL};
pub use coeff::Coeff;
pub use deformation::{Deformation, DeformationMatrix};
pub use poly::QPoly;
pub use qnum::{
    q_binom, q_binom_at, q_factorial, q_factorial_at, q_falling, q_falling_at, q_int, q_int_at,
};
pub use scalar::{parse_rational, QRatFunc, Scalar, ScalarMode};
