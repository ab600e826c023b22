//! Hardy, Bergman and mixed norm spaces of Dirichlet series.
//!
//! The crate works with finite Dirichlet series `sum a_n n^{-s}` and offers:
//!
//! * [`algebra`]: Dirichlet convolution, powers, the Bohr lift, translation and
//!   truncation operators, with an exact-rational coefficient mode;
//! * [`norms`]: `H^p`, `A^p_alpha` and `H^{p,q}_alpha` norms by closed form,
//!   generalized Gauss-Laguerre quadrature against `mu_alpha`, and Monte Carlo
//!   on the polytorus;
//! * [`randomization`]: Bernoulli, Steinhaus and Gaussian random series and
//!   the membership experiments built on them;
//! * [`regions`]: decision procedures for inclusions and random embeddings,
//!   the witness series showing the boundaries are sharp, and grid export;
//! * [`superposition`]: polynomial superposition operators and their degree
//!   bounds.
//!
//! ```
//! use dirichlet_spaces::prelude::*;
//!
//! let f = DirichletPolynomial::from_real([(1, 1.0), (2, 1.0)])?;
//! // ||f||_{H^4}^4 = ||f^2||_{H^2}^2 = 1 + 4 + 1
//! let h4 = hp_norm_exact_even(&f, 2)?;
//! assert!((h4 - 6f64.powf(0.25)).abs() < 1e-14);
//! # Ok::<(), dirichlet_spaces::Error>(())
//! ```
//!
//! The companion guide lives in `book/`; its code listings are compiled and
//! run as doctests of this crate.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
mod error;
pub mod norms;
mod parallel;
pub mod randomization;
pub mod regions;
pub mod superposition;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::algebra::{
        bohr_lift, factorize, DirichletPolynomial, ExactPolynomial, MultiIndex,
    };
    pub use crate::norms::{
        h2_norm, hp_norm_exact_even, hp_norm_mc, mixed_norm, Exponent, InnerNorm, NormEstimate,
        QuadratureSpec, SpaceParams,
    };
    pub use crate::randomization::{randomize, ModelKind, RandomModel};
    pub use crate::regions::{inclusion_decide, random_embedding_decide, RegionVerdict, Rule};
    pub use crate::superposition::{apply_superposition, superposition_decide, ScalarPolynomial};
    pub use crate::{Error, Result};
    pub use num_complex::Complex64;
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dirichlet-polynomials.md")]
    mod dirichlet_polynomials {}
    #[doc = include_str!("../../../book/src/norms.md")]
    mod norms {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/random-series.md")]
    mod random_series {}
    #[doc = include_str!("../../../book/src/regions.md")]
    mod regions {}
    #[doc = include_str!("../../../book/src/superposition.md")]
    mod superposition {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
