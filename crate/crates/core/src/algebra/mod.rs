//! Exact arithmetic on Dirichlet polynomials.
//!
//! A Dirichlet polynomial `sum a_n n^{-s}` is stored as a sparse map from the
//! index `n` to its coefficient. Products are Dirichlet convolutions, and the
//! Bohr lift re-indexes each `n` by its prime exponent vector so that the
//! polynomial becomes an ordinary polynomial in one variable per prime.

mod json;
mod lift;
mod multi_index;
mod polynomial;
pub mod primes;

pub use lift::{bohr_lift, LiftedPolynomial};
pub use multi_index::{factorize, MultiIndex};
pub use polynomial::{Coefficient, DirichletPolynomial, ExactCoefficient, ExactPolynomial, Norm2};
pub use primes::PrimeTable;
