use serde::{Deserialize, Serialize};

use super::Dimension;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::tolerance::Tolerances;

/// What an [`Operator`] stands for. The role decides which invariants are
/// enforced on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    State,
    Unitary,
    Effect,
    Generic,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::State => "state",
            Role::Unitary => "unitary",
            Role::Effect => "effect",
            Role::Generic => "generic",
        }
    }
}

/// A d×d complex matrix tagged with its role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorRecord", into = "OperatorRecord")]
pub struct Operator {
    dim: Dimension,
    mat: CMatrix,
    role: Role,
}

impl Operator {
    /// Build an operator and check the invariants of `role`.
    pub fn new(dim: Dimension, mat: CMatrix, role: Role) -> Result<Self> {
        let d = dim.get();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: mat.nrows().max(mat.ncols()),
            });
        }
        let op = Operator { dim, mat, role };
        op.check_role()?;
        Ok(op)
    }

    pub fn generic(dim: Dimension, mat: CMatrix) -> Result<Self> {
        Self::new(dim, mat, Role::Generic)
    }

    pub fn state(dim: Dimension, mat: CMatrix) -> Result<Self> {
        Self::new(dim, mat, Role::State)
    }

    pub fn unitary(dim: Dimension, mat: CMatrix) -> Result<Self> {
        Self::new(dim, mat, Role::Unitary)
    }

    pub fn effect(dim: Dimension, mat: CMatrix) -> Result<Self> {
        Self::new(dim, mat, Role::Effect)
    }

    /// Skips the role checks. Callers must already know the invariants hold,
    /// e.g. for convex combinations of valid states.
    pub(crate) fn trusted(dim: Dimension, mat: CMatrix, role: Role) -> Self {
        debug_assert_eq!(mat.nrows(), dim.get());
        Operator { dim, mat, role }
    }

    pub fn identity(dim: Dimension) -> Self {
        let d = dim.get();
        Operator::trusted(dim, CMatrix::identity(d, d), Role::Unitary)
    }

    /// 𝟙/d
    pub fn maximally_mixed(dim: Dimension) -> Self {
        let d = dim.get();
        Operator::trusted(dim, CMatrix::identity(d, d) / c(d as f64, 0.0), Role::State)
    }

    /// The unit effect 𝟙.
    pub fn unit_effect(dim: Dimension) -> Self {
        let d = dim.get();
        Operator::trusted(dim, CMatrix::identity(d, d), Role::Effect)
    }

    /// |v><v| / <v|v>
    pub fn pure_state(dim: Dimension, v: &CVector) -> Result<Self> {
        let norm = v.norm();
        if v.len() != dim.get() {
            return Err(Error::DimensionMismatch {
                expected: dim.get(),
                found: v.len(),
            });
        }
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidInput(
                "state vector must be nonzero and finite".into(),
            ));
        }
        let u = v / c(norm, 0.0);
        Ok(Operator::trusted(dim, linalg::outer(&u, &u), Role::State))
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Same matrix, different role; the new role's invariants are checked.
    pub fn with_role(self, role: Role) -> Result<Self> {
        Operator::new(self.dim, self.mat, role)
    }

    pub fn adjoint(&self) -> CMatrix {
        self.mat.adjoint()
    }

    fn check_role(&self) -> Result<()> {
        let tol = Tolerances::DEFAULT;
        let fail = |detail: String| Error::RoleViolation {
            role: self.role.as_str(),
            detail,
        };
        if self
            .mat
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(fail("non-finite entry".into()));
        }
        match self.role {
            Role::Generic => Ok(()),
            Role::Unitary => {
                let r = linalg::unitarity_residual(&self.mat);
                if r < tol.construction {
                    Ok(())
                } else {
                    Err(fail(format!("|U†U - 1| = {r:e}")))
                }
            }
            Role::State => {
                let h = linalg::hermiticity_residual(&self.mat);
                if h >= tol.construction {
                    return Err(fail(format!("hermiticity residual {h:e}")));
                }
                let t = (linalg::trace(&self.mat) - c(1.0, 0.0)).norm();
                if t >= tol.construction {
                    return Err(fail(format!("trace deviates from 1 by {t:e}")));
                }
                let lo = linalg::min_eigenvalue(&self.mat);
                if lo < -tol.validation {
                    return Err(fail(format!("negative eigenvalue {lo:e}")));
                }
                Ok(())
            }
            Role::Effect => {
                let h = linalg::hermiticity_residual(&self.mat);
                if h >= tol.construction {
                    return Err(fail(format!("hermiticity residual {h:e}")));
                }
                let (values, _) = linalg::hermitian_eigen(&self.mat);
                let lo = values[0];
                let hi = values[values.len() - 1];
                if lo < -tol.validation || hi > 1.0 + tol.validation {
                    return Err(fail(format!("eigenvalues span [{lo:e}, {hi:e}]")));
                }
                Ok(())
            }
        }
    }
}

/// Wire form: `{"d": int, "re": [[...]], "im": [[...]], "role": string}`, row-major.
#[derive(Serialize, Deserialize)]
struct OperatorRecord {
    d: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    role: Role,
}

impl From<Operator> for OperatorRecord {
    fn from(op: Operator) -> Self {
        let d = op.dim.get();
        let rows = |f: fn(&crate::linalg::C64) -> f64| -> Vec<Vec<f64>> {
            (0..d)
                .map(|r| (0..d).map(|k| f(&op.mat[(r, k)])).collect())
                .collect()
        };
        OperatorRecord {
            d,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
            role: op.role,
        }
    }
}

impl TryFrom<OperatorRecord> for Operator {
    type Error = Error;
    fn try_from(rec: OperatorRecord) -> Result<Self> {
        let dim = Dimension::new(rec.d)?;
        let d = rec.d;
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == d && m.iter().all(|row| row.len() == d);
        if !shape_ok(&rec.re) || !shape_ok(&rec.im) {
            return Err(Error::InvalidInput(format!(
                "operator entries must be {d}×{d}"
            )));
        }
        let mat = CMatrix::from_fn(d, d, |r, k| c(rec.re[r][k], rec.im[r][k]));
        Operator::new(dim, mat, rec.role)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d3() -> Dimension {
        Dimension::new(3).unwrap()
    }

    #[test]
    fn rejects_non_hermitian_state() {
        let mut m = CMatrix::identity(3, 3) / c(3.0, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            Operator::state(d3(), m),
            Err(Error::RoleViolation { role: "state", .. })
        ));
    }

    #[test]
    fn rejects_wrong_trace_and_negative_state() {
        let m = CMatrix::identity(3, 3) / c(2.0, 0.0);
        assert!(Operator::state(d3(), m).is_err());
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(1.2, 0.0),
            c(-0.2, 0.0),
            c(0.0, 0.0),
        ]));
        assert!(Operator::state(d3(), m).is_err());
    }

    #[test]
    fn rejects_non_unitary_and_bad_effect() {
        let m = CMatrix::identity(3, 3) * c(1.001, 0.0);
        assert!(Operator::unitary(d3(), m.clone()).is_err());
        assert!(Operator::effect(d3(), m).is_err());
        assert!(Operator::effect(d3(), CMatrix::zeros(3, 3)).is_ok());
    }

    #[test]
    fn rejects_wrong_shape() {
        let m = CMatrix::identity(5, 5);
        assert_eq!(
            Operator::generic(d3(), m),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 5
            })
        );
    }

    #[test]
    fn json_layout_is_row_major() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 1)] = c(2.0, -1.0);
        let op = Operator::generic(d3(), m).unwrap();
        let v: serde_json::Value = serde_json::to_value(&op).unwrap();
        assert_eq!(v["d"], 3);
        assert_eq!(v["role"], "generic");
        assert_eq!(v["re"][0][1], 2.0);
        assert_eq!(v["im"][0][1], -1.0);
        assert_eq!(v["re"][1][0], 0.0);
    }

    #[test]
    fn deserialization_enforces_role() {
        let json = r#"{"d":3,"re":[[1,0,0],[0,1,0],[0,0,1]],"im":[[0,0,0],[0,0,0],[0,0,0]],"role":"state"}"#;
        assert!(serde_json::from_str::<Operator>(json).is_err());
        let json = json.replace("state", "unitary");
        assert!(serde_json::from_str::<Operator>(&json).is_ok());
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(entries in proptest::collection::vec(-1e3f64..1e3, 50)) {
            let dim = Dimension::new(5).unwrap();
            let m = CMatrix::from_fn(5, 5, |r, k| c(entries[r * 5 + k], entries[25 + (r * 5 + k) % 25]));
            let op = Operator::generic(dim, m).unwrap();
            let text = serde_json::to_string(&op).unwrap();
            let back: Operator = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, op);
        }
    }
}
