//! Numerical toolkit for variable-exponent Lebesgue spaces on finite grids.
//!
//! The crate is organised bottom-up:
//!
//! - [`measure`]: finite atomic measure spaces, grid functions, partitions
//!   and their refinement order.
//! - [`exponents`]: variable exponents `p(·)` with cached essential bounds
//!   and pointwise conjugates.
//! - [`norms`]: the modular, the Luxemburg norm (bracketed bisection),
//!   `ℓ^{p(·)}` sequence norms and the factor-2 Hölder check.
//! - [`approx`]: partition-averaging finite-rank operators and sampled
//!   operator-norm lower bounds.
//! - [`nuclear`]: nuclear representations `Σ gₙ ⊗ hₙ`, their kernels,
//!   traces and Schatten comparisons.
//! - [`torus`]: Fourier analysis on uniform torus grids, toroidal
//!   quantization and trace/eigenvalue reports.
//!
//! With the default `parallel` feature, independent work items such as
//! matrix rows or sampling trials are spread over a rayon pool; every
//! reduction is still performed sequentially in ascending index order,
//! so results do not depend on the number of threads. Disabling the feature gives a purely
//! sequential build with identical output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod error;
pub mod exec;
pub mod exponents;
mod linalg;
pub mod measure;
pub mod norms;
pub mod nuclear;
pub mod torus;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
