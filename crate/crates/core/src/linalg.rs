//! Small dense complex linear algebra used throughout the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Tr(A B) without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// max |M - M†| entrywise.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// max |U†U - 1| entrywise.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian matrix.
/// Only the Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0[0]
}

/// exp(A) for anti-Hermitian A, computed as V diag(e^{iλ}) V† from the
/// Hermitian matrix -iA = V diag(λ) V†. The result is unitary to rounding.
pub fn expm_anti_hermitian(a: &CMatrix) -> CMatrix {
    let h = a * c(0.0, -1.0);
    let (values, v) = hermitian_eigen(&h);
    let phases = CVector::from_iterator(
        values.len(),
        values.iter().map(|&l| C64::from_polar(1.0, l)),
    );
    let scaled = CMatrix::from_fn(v.nrows(), v.ncols(), |r, k| v[(r, k)] * phases[k]);
    scaled * v.adjoint()
}

/// Principal logarithm of a unitary matrix, returned as an anti-Hermitian
/// matrix with eigenvalues in i(-π, π].
pub fn log_unitary(u: &CMatrix) -> CMatrix {
    let (q, t) = nalgebra::linalg::Schur::new(u.clone()).unpack();
    let n = u.nrows();
    let diag = CVector::from_iterator(n, (0..n).map(|k| c(0.0, t[(k, k)].arg())));
    let l = &q * CMatrix::from_diagonal(&diag) * q.adjoint();
    (&l - l.adjoint()).scale(0.5)
}

/// |v><w|
pub fn outer(v: &CVector, w: &CVector) -> CMatrix {
    v * w.adjoint()
}

/// max |G - 1| for the Gram matrix of the columns of `m`.
pub fn gram_residual(m: &CMatrix) -> f64 {
    unitarity_residual(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_anti_hermitian(n: usize) -> CMatrix {
        let h = CMatrix::from_fn(n, n, |r, k| {
            c(
                (r + 2 * k) as f64 * 0.17 - 0.3,
                (r as f64 - k as f64) * 0.23,
            )
        });
        let h = (&h + h.adjoint()).scale(0.5);
        h * c(0.0, 1.0)
    }

    #[test]
    fn exp_of_anti_hermitian_is_unitary() {
        for n in [3, 5, 7] {
            let u = expm_anti_hermitian(&sample_anti_hermitian(n));
            assert!(unitarity_residual(&u) < 1e-13);
        }
    }

    #[test]
    fn exp_matches_taylor_series() {
        let a = sample_anti_hermitian(3).scale(0.2);
        let mut term = CMatrix::identity(3, 3);
        let mut sum = term.clone();
        for k in 1..40 {
            term = &term * &a / c(k as f64, 0.0);
            sum += &term;
        }
        assert!(max_abs_diff(&sum, &expm_anti_hermitian(&a)) < 1e-13);
    }

    #[test]
    fn log_inverts_exp() {
        for n in [3, 5] {
            let a = sample_anti_hermitian(n).scale(0.4);
            let u = expm_anti_hermitian(&a);
            let back = expm_anti_hermitian(&log_unitary(&u));
            assert!(max_abs_diff(&u, &back) < 1e-12);
        }
    }

    #[test]
    fn trace_product_matches_matmul() {
        let a = sample_anti_hermitian(5);
        let b = expm_anti_hermitian(&a);
        let direct = trace(&(&a * &b));
        assert!((direct - trace_product(&a, &b)).norm() < 1e-12);
    }
}
