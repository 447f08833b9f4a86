//! Numerical toolkit for singular inner functions that decay slowly toward
//! the boundary of the unit disk.
//!
//! The crate is organised by what each part computes:
//!
//! * [`functions`]: inner/outer function evaluation, Taylor coefficients,
//!   minimum-modulus envelopes.
//! * [`cyclicity`]: growth weights, envelope domination, and the polynomial
//!   approximants `p_n` of `1/θ(r_n z)` with certified sup-error.
//! * [`weights`]: the moment weight `Λ`, the step multiplier `W`, weighted
//!   Bergman norms.
//! * [`spectra`]: moduli of continuity and the coefficient embedding
//!   sequence `α_n`.
//! * [`model`]: model-space kernels, projections, pairings, and the full
//!   non-membership pipeline.

pub mod cyclicity;
pub mod error;
pub mod functions;
pub mod model;
pub mod rng;
pub mod series;
pub mod spectra;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::{Certification, PowerSeries};
