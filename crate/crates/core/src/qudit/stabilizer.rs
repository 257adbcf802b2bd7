use super::{Dimension, Operator, Role};
use crate::linalg::{self, CMatrix, CVector};

/// The d(d+1) pure stabiliser states of one qudit, grouped into d+1 mutually
/// unbiased bases.
///
/// Group 0 is the computational basis. Group 1 + a (a = 0..d-1) is the
/// eigenbasis of X Z^a, ordered by eigenvalue ω^k, k = 0..d-1. Every ket has
/// its first nonzero component real and positive.
#[derive(Debug, Clone)]
pub struct StabilizerStateSet {
    dim: Dimension,
    kets: Vec<CVector>,
    states: Vec<Operator>,
}

impl StabilizerStateSet {
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Operator] {
        &self.states
    }

    pub fn kets(&self) -> &[CVector] {
        &self.kets
    }

    pub fn group_count(&self) -> usize {
        self.dim.get() + 1
    }

    /// Group index of state `k`.
    pub fn group_of(&self, k: usize) -> usize {
        k / self.dim.get()
    }

    /// Basis `g` as a unitary whose columns are the kets of that group.
    pub fn basis_matrix(&self, g: usize) -> CMatrix {
        let d = self.dim.get();
        CMatrix::from_fn(d, d, |r, k| self.kets[g * d + k][r])
    }

    /// Weyl operator (up to phase) whose eigenbasis is group `g`, as (p, q).
    pub fn group_stabilizer(&self, g: usize) -> super::WeylIndex {
        if g == 0 {
            super::WeylIndex { p: 1, q: 0 }
        } else {
            super::WeylIndex { p: g - 1, q: 1 }
        }
    }
}

/// Enumerate all pure stabiliser states.
pub fn stabilizer_states(dim: Dimension) -> StabilizerStateSet {
    let d = dim.get();
    let norm = 1.0 / (d as f64).sqrt();
    let mut kets = Vec::with_capacity(d * (d + 1));
    for x in 0..d {
        let mut v = CVector::zeros(d);
        v[x] = linalg::ONE;
        kets.push(v);
    }
    // X Z^a ψ = ω^k ψ is solved by ψ_x = ω^{a x(x-1)/2 - k x} / √d.
    for a in 0..d {
        for k in 0..d {
            let v = CVector::from_fn(d, |x, _| {
                let exponent = (a * (x * x.saturating_sub(1) / 2)) as i64 - (k * x) as i64;
                dim.omega_pow(exponent) * norm
            });
            kets.push(v);
        }
    }
    let states = kets
        .iter()
        .map(|v| Operator::trusted(dim, linalg::outer(v, v), Role::State))
        .collect();
    StabilizerStateSet { dim, kets, states }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff, C64};
    use crate::qudit::{clock, shift, weyl_matrix};

    /// Independent route: eigenvectors of the Hermitian e^{-it}U + e^{it}U†,
    /// which are those of U when t breaks the cosine degeneracy.
    fn oracle_eigenprojectors(u: &CMatrix) -> Vec<CMatrix> {
        let t = 0.3137_f64;
        let ph = C64::from_polar(1.0, -t);
        let h = u * ph + u.adjoint() * ph.conj();
        let (_, vecs) = linalg::hermitian_eigen(&h);
        (0..u.nrows())
            .map(|k| {
                let v = vecs.column(k).into_owned();
                linalg::outer(&v, &v)
            })
            .collect()
    }

    fn check_invariants(dim: Dimension) {
        let d = dim.get();
        let set = stabilizer_states(dim);
        assert_eq!(set.len(), d * (d + 1));
        assert_eq!(set.group_count(), d + 1);
        for g in 0..=d {
            let b = set.basis_matrix(g);
            assert!(
                linalg::gram_residual(&b) < 1e-12,
                "group {g} not orthonormal"
            );
        }
        for s in 0..set.len() {
            assert!((set.kets()[s].norm() - 1.0).abs() < 1e-12);
            for t in 0..set.len() {
                if set.group_of(s) != set.group_of(t) {
                    let overlap = set.kets()[s].dotc(&set.kets()[t]).norm_sqr();
                    assert!((overlap - 1.0 / d as f64).abs() < 1e-12);
                }
            }
            // eigenvector of a non-identity Weyl operator with a d-th root eigenvalue
            let idx = set.group_stabilizer(set.group_of(s));
            assert!(!idx.is_identity());
            let w = weyl_matrix(dim, idx);
            let v = &set.kets()[s];
            let wv = &w * v;
            let lambda = v.dotc(&wv);
            assert!((lambda.powu(d as u32) - c(1.0, 0.0)).norm() < 1e-10);
            assert!((wv - v * lambda).norm() < 1e-10);
        }
    }

    #[test]
    fn invariants_hold_for_supported_dimensions() {
        for d in [3, 5, 7] {
            check_invariants(Dimension::new(d).unwrap());
        }
    }

    #[test]
    fn matches_numerical_eigendecomposition() {
        for d in [3, 5] {
            let dim = Dimension::new(d).unwrap();
            let set = stabilizer_states(dim);
            let x = shift(dim);
            let z = clock(dim);
            let mut ops = vec![z.clone()];
            let mut za = CMatrix::identity(d, d);
            for _ in 0..d {
                ops.push(&x * &za);
                za = &za * &z;
            }
            for (g, u) in ops.iter().enumerate() {
                let oracle = oracle_eigenprojectors(u);
                for k in 0..d {
                    let ours = set.states()[g * d + k].matrix();
                    assert!(
                        oracle.iter().any(|p| max_abs_diff(p, ours) < 1e-10),
                        "d={d} group {g} state {k} not an eigenprojector"
                    );
                }
            }
        }
    }

    #[test]
    fn phase_convention_first_component_positive() {
        let set = stabilizer_states(Dimension::new(7).unwrap());
        for v in set.kets() {
            let first = v.iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(first.im.abs() < 1e-15 && first.re > 0.0);
        }
    }

    #[test]
    fn counts_for_qutrit_and_ququint() {
        assert_eq!(stabilizer_states(Dimension::new(3).unwrap()).len(), 12);
        assert_eq!(stabilizer_states(Dimension::new(5).unwrap()).len(), 30);
    }
}
