use serde::{Deserialize, Serialize};

use super::{Dimension, Operator, Role};
use crate::linalg::{CMatrix, ZERO};

/// Index (p, q) of the Weyl operator Z^p X^q, both components reduced mod d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylIndex {
    pub p: usize,
    pub q: usize,
}

impl WeylIndex {
    pub fn new(dim: Dimension, p: i64, q: i64) -> Self {
        WeylIndex {
            p: dim.reduce(p),
            q: dim.reduce(q),
        }
    }

    /// All d² indices in row-major order (p outer, q inner).
    pub fn all(dim: Dimension) -> impl Iterator<Item = WeylIndex> {
        let d = dim.get();
        (0..d * d).map(move |k| WeylIndex { p: k / d, q: k % d })
    }

    pub fn is_identity(self) -> bool {
        self.p == 0 && self.q == 0
    }
}

/// X|x> = |x+1>
pub fn shift(dim: Dimension) -> CMatrix {
    weyl_matrix(dim, WeylIndex { p: 0, q: 1 })
}

/// Z|x> = ω^x |x>
pub fn clock(dim: Dimension) -> CMatrix {
    weyl_matrix(dim, WeylIndex { p: 1, q: 0 })
}

/// Z^p X^q as a bare matrix: column x carries ω^{p(x+q)} in row x+q.
pub fn weyl_matrix(dim: Dimension, idx: WeylIndex) -> CMatrix {
    let d = dim.get();
    let mut m = CMatrix::from_element(d, d, ZERO);
    for x in 0..d {
        let row = (x + idx.q) % d;
        m[(row, x)] = dim.omega_pow((idx.p * row) as i64);
    }
    m
}

pub fn weyl_operator(dim: Dimension, idx: WeylIndex) -> Operator {
    Operator::trusted(dim, weyl_matrix(dim, idx), Role::Unitary)
}

/// F|k> = Σ_x ω^{xk} |x> / √d
pub fn fourier_gate(dim: Dimension) -> CMatrix {
    let d = dim.get();
    let norm = 1.0 / (d as f64).sqrt();
    CMatrix::from_fn(d, d, |x, k| dim.omega_pow((x * k) as i64) * norm)
}

/// S|x> = ω^{x(x-1)/2} |x>; conjugates X to Z X.
pub fn phase_gate(dim: Dimension) -> CMatrix {
    let d = dim.get();
    let mut m = CMatrix::from_element(d, d, ZERO);
    for x in 0..d {
        m[(x, x)] = dim.omega_pow((x * x.saturating_sub(1) / 2) as i64);
    }
    m
}

/// Generating set of the single-qudit Clifford group: Fourier, phase, X, Z.
pub fn clifford_generators(dim: Dimension) -> Vec<(&'static str, Operator)> {
    let wrap = |m: CMatrix| Operator::trusted(dim, m, Role::Unitary);
    vec![
        ("fourier", wrap(fourier_gate(dim))),
        ("phase", wrap(phase_gate(dim))),
        ("x", wrap(shift(dim))),
        ("z", wrap(clock(dim))),
    ]
}

/// The symmetric Weyl operator ω^{-pq/2} Z^p X^q (2^{-1} taken mod d). These
/// sum to d times the parity operator, which is what the phase-point
/// construction needs.
pub(crate) fn symmetric_weyl(dim: Dimension, idx: WeylIndex) -> CMatrix {
    let phase = dim.omega_pow(-((dim.half() * idx.p * idx.q) as i64));
    weyl_matrix(dim, idx) * phase
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff, unitarity_residual, C64};

    fn dims() -> [Dimension; 3] {
        [3, 5, 7].map(|d| Dimension::new(d).unwrap())
    }

    #[test]
    fn identity_index_gives_identity() {
        let d3 = Dimension::new(3).unwrap();
        let w = weyl_operator(d3, WeylIndex::new(d3, 0, 0));
        assert_eq!(w.matrix(), &CMatrix::identity(3, 3));
    }

    #[test]
    fn clock_is_diagonal_roots_of_unity() {
        let d3 = Dimension::new(3).unwrap();
        let om = C64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let expected =
            CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), om, om * om]));
        assert!(
            max_abs_diff(
                weyl_operator(d3, WeylIndex::new(d3, 1, 0)).matrix(),
                &expected
            ) < 1e-15
        );
    }

    #[test]
    fn weyl_11_is_clock_times_explicit_shift() {
        let d3 = Dimension::new(3).unwrap();
        let om = C64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let z =
            CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), om, om * om]));
        // |x> -> |x+1>: columns are shifted unit vectors
        let mut x = CMatrix::zeros(3, 3);
        x[(1, 0)] = c(1.0, 0.0);
        x[(2, 1)] = c(1.0, 0.0);
        x[(0, 2)] = c(1.0, 0.0);
        let w = weyl_operator(d3, WeylIndex::new(d3, 1, 1));
        assert!(max_abs_diff(w.matrix(), &(z * x)) < 1e-15);
    }

    fn check_composition(dim: Dimension, a: WeylIndex, b: WeylIndex) {
        let lhs = weyl_matrix(dim, a) * weyl_matrix(dim, b);
        let phase = dim.omega_pow(-((a.q * b.p) as i64));
        let rhs = weyl_matrix(
            dim,
            WeylIndex::new(dim, (a.p + b.p) as i64, (a.q + b.q) as i64),
        ) * phase;
        assert!(max_abs_diff(&lhs, &rhs) < 1e-12, "{a:?} {b:?}");
    }

    #[test]
    fn composition_law_exhaustive_d3() {
        let d3 = Dimension::new(3).unwrap();
        for a in WeylIndex::all(d3) {
            for b in WeylIndex::all(d3) {
                check_composition(d3, a, b);
            }
        }
    }

    #[test]
    fn composition_law_sampled_d5_d7() {
        for dim in [Dimension::new(5).unwrap(), Dimension::new(7).unwrap()] {
            let all: Vec<_> = WeylIndex::all(dim).collect();
            for (k, a) in all.iter().enumerate().step_by(3) {
                let b = all[(7 * k + 4) % all.len()];
                check_composition(dim, *a, b);
            }
        }
    }

    #[test]
    fn every_weyl_operator_is_unitary() {
        for dim in dims() {
            for w in WeylIndex::all(dim) {
                assert!(unitarity_residual(&weyl_matrix(dim, w)) < 1e-12);
            }
        }
    }

    /// Exhaustive oracle: find w' and a 2d-th root of unity c with U W U† = c W_{w'}.
    fn conjugate_to_weyl(dim: Dimension, u: &CMatrix, w: WeylIndex) -> Option<(WeylIndex, usize)> {
        let d = dim.get();
        let target = u * weyl_matrix(dim, w) * u.adjoint();
        for w2 in WeylIndex::all(dim) {
            let base = weyl_matrix(dim, w2);
            for k in 0..2 * d {
                let phase = C64::from_polar(1.0, std::f64::consts::PI * k as f64 / d as f64);
                if max_abs_diff(&target, &(&base * phase)) < 1e-10 {
                    return Some((w2, k));
                }
            }
        }
        None
    }

    #[test]
    fn clifford_generators_normalise_the_weyl_group() {
        for dim in [Dimension::new(3).unwrap(), Dimension::new(5).unwrap()] {
            let gens = clifford_generators(dim);
            assert!(gens.len() >= 2);
            for (name, g) in &gens {
                assert!(unitarity_residual(g.matrix()) < 1e-12);
                for w in WeylIndex::all(dim) {
                    assert!(
                        conjugate_to_weyl(dim, g.matrix(), w).is_some(),
                        "{name} fails on {w:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn fourier_maps_shift_to_clock() {
        let d3 = Dimension::new(3).unwrap();
        let f = fourier_gate(d3);
        let (w, _) = conjugate_to_weyl(d3, &f, WeylIndex { p: 0, q: 1 }).unwrap();
        assert_eq!(w, WeylIndex { p: 1, q: 0 });
    }

    #[test]
    fn symmetric_weyl_sum_is_parity() {
        for dim in dims() {
            let d = dim.get();
            let sum = WeylIndex::all(dim)
                .fold(CMatrix::zeros(d, d), |acc, w| acc + symmetric_weyl(dim, w));
            let mut parity = CMatrix::zeros(d, d);
            for x in 0..d {
                parity[((d - x) % d, x)] = c(d as f64, 0.0);
            }
            assert!(max_abs_diff(&sum, &parity) < 1e-12);
        }
    }
}
