//! Noise thresholds at which a depolarised qudit magic state, added to the
//! odd-dimensional stabiliser subtheory, admits a classical (real,
//! non-negative) quasiprobability representation.
//!
//! The crate is organised bottom-up:
//!
//! * [`qudit`]: Weyl and Clifford operators, stabiliser states, magic states
//!   and the depolarising channel.
//! * [`frames`]: exact frames (analysis/synthesis operator pairs): the Gross
//!   phase-point frame and Kirkwood-Dirac frames, plus a validator.
//! * [`representation`]: quasiprobability representations of states, effects
//!   and channels, KD distributions, the non-classicality penalty and the
//!   witness Ω.
//! * [`optimizer`]: Nelder-Mead search over unitary-parametrised KD frames
//!   and monotone bisection.
//! * [`thresholds`]: the Wigner, stabiliser-polytope, KD and combined
//!   thresholds with certificates.
//! * [`cli`]: the command-line front end used by the `magic-ctx` binary.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod optimizer;
pub mod qudit;
pub mod representation;
pub mod simplex;
pub mod thresholds;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
