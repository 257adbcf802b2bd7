use super::{QuasiDistribution, Subject};
use crate::error::{Error, Result};
use crate::frames::Basis;
use crate::linalg::{self, CMatrix, C64};
use crate::qudit::{Dimension, Operator};
use crate::tolerance::Tolerances;

fn same_dim(expected: Dimension, found: Dimension) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: expected.get(),
            found: found.get(),
        })
    }
}

/// ϱ_{i,j} = <b_j|a_i><a_i|ρ|b_j>
pub fn kd_matrix(rho: &Operator, a: &Basis, b: &Basis) -> Result<QuasiDistribution> {
    same_dim(rho.dim(), a.dim())?;
    same_dim(rho.dim(), b.dim())?;
    let d = rho.dim().get();
    let overlaps = b.matrix().adjoint() * a.matrix(); // (j, i) -> <b_j|a_i>
    let sandwich = a.matrix().adjoint() * rho.matrix() * b.matrix(); // (i, j) -> <a_i|ρ|b_j>
    let mut labels = Vec::with_capacity(d * d);
    let mut values = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            labels.push(vec![i, j]);
            values.push(overlaps[(j, i)] * sandwich[(i, j)]);
        }
    }
    QuasiDistribution::new(labels, values, Subject::State)
}

/// Sequential KD distribution for k non-degenerate observables:
/// ϱ_{i1..ik} = <a^k_{ik}|a^{k-1}_{ik-1}> ··· <a^2_{i2}|a^1_{i1}> <a^1_{i1}|ρ|a^k_{ik}>.
/// Labels run with i1 as the most significant index.
pub fn kd_sequential(rho: &Operator, bases: &[Basis]) -> Result<QuasiDistribution> {
    let Some(first) = bases.first() else {
        return Err(Error::InvalidInput(
            "kd_sequential needs at least one basis".into(),
        ));
    };
    for b in bases {
        same_dim(rho.dim(), b.dim())?;
    }
    let d = rho.dim().get();
    let k = bases.len();
    let last = &bases[k - 1];
    let sandwich = first.matrix().adjoint() * rho.matrix() * last.matrix();
    // links[l][(x, y)] = <a^{l+2}_x | a^{l+1}_y>
    let links: Vec<CMatrix> = bases
        .windows(2)
        .map(|w| w[1].matrix().adjoint() * w[0].matrix())
        .collect();
    let total = d.pow(k as u32);
    let mut labels = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    let mut idx = vec![0usize; k];
    for flat in 0..total {
        let mut rem = flat;
        for slot in (0..k).rev() {
            idx[slot] = rem % d;
            rem /= d;
        }
        let mut v: C64 = sandwich[(idx[0], idx[k - 1])];
        for (l, link) in links.iter().enumerate() {
            v *= link[(idx[l + 1], idx[l])];
        }
        labels.push(idx.clone());
        values.push(v);
    }
    QuasiDistribution::new(labels, values, Subject::State)
}

/// A POVM: positive semidefinite elements summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: Dimension,
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(dim: Dimension, elements: Vec<CMatrix>) -> Result<Self> {
        let d = dim.get();
        let tol = Tolerances::DEFAULT.validation;
        if elements.is_empty() {
            return Err(Error::InvalidPovm("no elements".into()));
        }
        for (k, m) in elements.iter().enumerate() {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::InvalidPovm(format!("element {k} is not {d}×{d}")));
            }
            let h = linalg::hermiticity_residual(m);
            if h >= tol {
                return Err(Error::InvalidPovm(format!(
                    "element {k} is not Hermitian ({h:e})"
                )));
            }
            let lo = linalg::min_eigenvalue(m);
            if lo < -tol {
                return Err(Error::InvalidPovm(format!(
                    "element {k} has eigenvalue {lo:e}"
                )));
            }
        }
        let sum = elements.iter().fold(CMatrix::zeros(d, d), |acc, m| acc + m);
        let residual = linalg::max_abs_diff(&sum, &CMatrix::identity(d, d));
        if residual >= tol {
            return Err(Error::InvalidPovm(format!(
                "elements sum to the identity only within {residual:e}"
            )));
        }
        Ok(Povm { dim, elements })
    }

    /// Rank-1 projectors onto the vectors of `basis`.
    pub fn projective(basis: &Basis) -> Self {
        let d = basis.dim().get();
        Povm {
            dim: basis.dim(),
            elements: (0..d).map(|i| basis.projector(i)).collect(),
        }
    }

    /// The single-outcome POVM {𝟙}.
    pub fn trivial(dim: Dimension) -> Self {
        let d = dim.get();
        Povm {
            dim,
            elements: vec![CMatrix::identity(d, d)],
        }
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }
}

/// ϱ_{i1..ik} = Tr(M^k_{ik} ··· M^1_{i1} ρ), with i1 most significant.
pub fn kd_povm(rho: &Operator, povms: &[Povm]) -> Result<QuasiDistribution> {
    if povms.is_empty() {
        return Err(Error::InvalidInput(
            "kd_povm needs at least one POVM".into(),
        ));
    }
    for m in povms {
        same_dim(rho.dim(), m.dim)?;
    }
    // Breadth-first products M^l ··· M^1 ρ, keeping the label order.
    let mut frontier: Vec<(Vec<usize>, CMatrix)> = vec![(Vec::new(), rho.matrix().clone())];
    for povm in povms {
        let mut next = Vec::with_capacity(frontier.len() * povm.elements.len());
        for (label, acc) in &frontier {
            for (i, m) in povm.elements.iter().enumerate() {
                let mut l = label.clone();
                l.push(i);
                next.push((l, m * acc));
            }
        }
        frontier = next;
    }
    let (labels, values) = frontier
        .into_iter()
        .map(|(l, m)| (l, linalg::trace(&m)))
        .unzip();
    QuasiDistribution::new(labels, values, Subject::State)
}
