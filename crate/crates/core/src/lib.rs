//! Exact solutions of `u_tt = K²(x) u_xx` and the tools to check them.
//!
//! * [`media`]: sound-speed profiles, travel time, Laplace invariant.
//! * [`riccati`]: the travel-time ODE of rank-one solutions, its closed-form
//!   solutions and numerical integration.
//! * [`solutions`]: rank-zero and rank-one solution builders with analytic
//!   residuals.
//! * [`transforms`]: changes of variable, conformal and Kelvin maps,
//!   spherical and cylindrical reductions.
//! * [`numeric`]: quadrature, ODE and root solvers, finite differences, the
//!   leapfrog scheme and convergence studies.
//!
//! ```
//! use acoustic_wave::media::Profile;
//!
//! let k = Profile::power_law(4.0)?; // K = x²
//! assert_eq!(k.laplace_invariant(1.5)?, 0.0);
//! # Ok::<(), acoustic_wave::Error>(())
//! ```

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod jets;
pub mod media;
pub mod numeric;
pub mod riccati;
pub mod solutions;
pub mod transforms;

pub use error::{Error, Result};
pub use jets::{Jet, Waveform};
pub use media::{Base, Profile, ProfileDescriptor};
pub use riccati::{ClosedFormFamily, RiccatiParams};
pub use solutions::{build_rank0, build_rank1, residual_1d, residual_norms, ExactSolution1D};
