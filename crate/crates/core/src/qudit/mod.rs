//! Single-qudit algebra in odd prime dimension.
//!
//! Weyl operators `W_{p,q} = Z^p X^q`, a Clifford generating set, the
//! `d(d+1)` pure stabiliser states, a few magic states and the depolarising
//! channel. Everything here is a pure function of its inputs.

mod dimension;
mod operator;
mod stabilizer;
mod states;
mod weyl;

pub use dimension::Dimension;
pub use operator::{Operator, Role};
pub use stabilizer::{stabilizer_states, StabilizerStateSet};
pub use states::{depolarize, magic_state, random_state, random_unitary, MagicKind};
pub(crate) use weyl::symmetric_weyl;
pub use weyl::{
    clifford_generators, clock, fourier_gate, phase_gate, shift, weyl_matrix, weyl_operator,
    WeylIndex,
};
