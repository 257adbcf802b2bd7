use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::qudit::{weyl_matrix, Dimension, Operator, WeylIndex};
use crate::tolerance::Tolerances;

/// A CPTP map given by Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    dim: Dimension,
    kraus: Vec<CMatrix>,
}

impl Channel {
    /// Checks Σ K†K = 𝟙 to the validation tolerance.
    pub fn new(dim: Dimension, kraus: Vec<CMatrix>) -> Result<Self> {
        let d = dim.get();
        if kraus.is_empty() {
            return Err(Error::InvalidInput(
                "channel needs at least one Kraus operator".into(),
            ));
        }
        if let Some(k) = kraus.iter().find(|k| k.nrows() != d || k.ncols() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: k.nrows().max(k.ncols()),
            });
        }
        let sum = kraus
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        let residual = linalg::max_abs_diff(&sum, &CMatrix::identity(d, d));
        if residual >= Tolerances::DEFAULT.validation {
            return Err(Error::NotTracePreserving(residual));
        }
        Ok(Channel { dim, kraus })
    }

    pub fn identity(dim: Dimension) -> Self {
        let d = dim.get();
        Channel {
            dim,
            kraus: vec![CMatrix::identity(d, d)],
        }
    }

    /// ρ ↦ UρU†
    pub fn unitary(u: &Operator) -> Result<Self> {
        Channel::new(u.dim(), vec![u.matrix().clone()])
    }

    /// ρ ↦ (1-p)ρ + p𝟙/d, with Kraus operators √(1-p+p/d²)𝟙 and √(p/d²) W_w, w ≠ 0.
    pub fn depolarizing(dim: Dimension, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "noise must lie in [0, 1]",
            });
        }
        let d2 = (dim.get() * dim.get()) as f64;
        let mut kraus = Vec::with_capacity(dim.get() * dim.get());
        for w in WeylIndex::all(dim) {
            let weight = if w.is_identity() {
                1.0 - p + p / d2
            } else {
                p / d2
            };
            if weight > 0.0 {
                kraus.push(weyl_matrix(dim, w) * c(weight.sqrt(), 0.0));
            }
        }
        Channel::new(dim, kraus)
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Applies the channel to an arbitrary operator (linear extension).
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let d = self.dim.get();
        self.kraus
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, k| acc + k * x * k.adjoint())
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &Channel) -> Result<Channel> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim.get(),
                found: other.dim.get(),
            });
        }
        let kraus = other
            .kraus
            .iter()
            .flat_map(|k2| self.kraus.iter().map(move |k1| k2 * k1))
            .collect();
        Ok(Channel {
            dim: self.dim,
            kraus,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{depolarize, random_state};

    #[test]
    fn depolarizing_kraus_matches_closed_form() {
        for d in [3, 5] {
            let dim = Dimension::new(d).unwrap();
            let rho = random_state(dim, 3);
            for p in [0.0, 0.2, 0.75, 1.0] {
                let ch = Channel::depolarizing(dim, p).unwrap();
                let direct = depolarize(&rho, p).unwrap();
                assert!(linalg::max_abs_diff(&ch.apply(rho.matrix()), direct.matrix()) < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_non_trace_preserving_kraus() {
        let dim = Dimension::new(3).unwrap();
        let k = CMatrix::identity(3, 3) * c(0.9, 0.0);
        assert!(matches!(
            Channel::new(dim, vec![k]),
            Err(Error::NotTracePreserving(_))
        ));
    }
}
