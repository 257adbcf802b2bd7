use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{Dimension, Operator, Role};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, C64};

/// Which magic state to inject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MagicKind {
    /// (|1> - |2>)/√2, qutrit only.
    Strange,
    /// (-|0> + 2|1> - |2>)/√6, qutrit only.
    Norrell,
    /// Any nonzero vector; normalised on use.
    Custom(Vec<C64>),
}

pub fn magic_state(kind: &MagicKind, dim: Dimension) -> Result<Operator> {
    let real = |xs: &[f64]| CVector::from_iterator(xs.len(), xs.iter().map(|&x| c(x, 0.0)));
    match kind {
        MagicKind::Strange | MagicKind::Norrell if dim.get() != 3 => {
            Err(Error::UnsupportedDimension(dim.get()))
        }
        MagicKind::Strange => Operator::pure_state(dim, &real(&[0.0, 1.0, -1.0])),
        MagicKind::Norrell => Operator::pure_state(dim, &real(&[-1.0, 2.0, -1.0])),
        MagicKind::Custom(v) => {
            if v.len() != dim.get() {
                return Err(Error::DimensionMismatch {
                    expected: dim.get(),
                    found: v.len(),
                });
            }
            if v.iter().all(|z| z.norm() == 0.0) {
                return Err(Error::InvalidInput(
                    "custom magic-state vector is zero".into(),
                ));
            }
            Operator::pure_state(dim, &CVector::from_column_slice(v))
        }
    }
}

/// (1-p) ρ + p 𝟙/d
pub fn depolarize(rho: &Operator, p: f64) -> Result<Operator> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "noise must lie in [0, 1]",
        });
    }
    if rho.role() != Role::State {
        return Err(Error::RoleViolation {
            role: "state",
            detail: format!("depolarize expects a state, got {}", rho.role().as_str()),
        });
    }
    let d = rho.dim().get();
    let mut m = rho.matrix() * c(1.0 - p, 0.0);
    for k in 0..d {
        m[(k, k)] += c(p / d as f64, 0.0);
    }
    Ok(Operator::trusted(rho.dim(), m, Role::State))
}

fn ginibre(dim: Dimension, rng: &mut ChaCha8Rng) -> CMatrix {
    let d = dim.get();
    CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

/// Random mixed state G G† / Tr(G G†) from a seeded Ginibre matrix.
pub fn random_state(dim: Dimension, seed: u64) -> Operator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(dim, &mut rng);
    let m = &g * g.adjoint();
    let m = (&m + m.adjoint()).scale(0.5);
    let tr = linalg::trace(&m).re;
    Operator::trusted(dim, m / c(tr, 0.0), Role::State)
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
pub fn random_unitary(dim: Dimension, seed: u64) -> Operator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(dim, &mut rng);
    let (q, r) = g.qr().unpack();
    let d = dim.get();
    let mut u = q;
    for k in 0..d {
        let z = r[(k, k)];
        let phase = if z.norm() > 0.0 {
            z / z.norm()
        } else {
            c(1.0, 0.0)
        };
        for row in 0..d {
            u[(row, k)] *= phase;
        }
    }
    Operator::trusted(dim, u, Role::Unitary)
}
