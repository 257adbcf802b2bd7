use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Hilbert-space dimension of a single qudit. Only the odd primes 3, 5 and 7
/// are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Dimension(usize);

impl Dimension {
    pub const SUPPORTED: [usize; 3] = [3, 5, 7];

    pub fn new(d: usize) -> Result<Self> {
        if Self::SUPPORTED.contains(&d) {
            Ok(Dimension(d))
        } else {
            Err(Error::UnsupportedDimension(d))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// ω^k with ω = exp(2πi/d); `k` is reduced mod d first so the phase is exact
    /// for equal residues.
    pub fn omega_pow(self, k: i64) -> C64 {
        let d = self.0 as i64;
        let r = k.rem_euclid(d);
        C64::from_polar(1.0, std::f64::consts::TAU * r as f64 / d as f64)
    }

    /// Multiplicative inverse of 2 modulo d.
    pub fn half(self) -> usize {
        self.0.div_ceil(2)
    }

    /// Reduce an integer into `0..d`.
    pub fn reduce(self, k: i64) -> usize {
        k.rem_euclid(self.0 as i64) as usize
    }
}

impl TryFrom<usize> for Dimension {
    type Error = Error;
    fn try_from(d: usize) -> Result<Self> {
        Dimension::new(d)
    }
}

impl From<Dimension> for usize {
    fn from(d: Dimension) -> usize {
        d.0
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
