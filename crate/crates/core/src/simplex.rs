//! Dense phase-one simplex for feasibility of `A x = b, x ≥ 0`.
//!
//! One artificial variable per row starts in the basis; the method minimises
//! their sum. Pivoting uses Bland's rule (lowest eligible index for both the
//! entering and the leaving variable), so runs are deterministic and cannot
//! cycle.

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 50_000;

/// Result of phase one.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOne {
    /// Optimal sum of artificial variables; zero (to rounding) iff feasible.
    pub objective: f64,
    /// Values of the original variables at the final basis.
    pub x: Vec<f64>,
    pub pivots: usize,
    /// Hit the pivot cap before optimality.
    pub truncated: bool,
}

/// Solve phase one for the `rows.len()` × `n` system `rows · x = rhs`.
pub fn phase_one(rows: &[Vec<f64>], rhs: &[f64]) -> PhaseOne {
    let m = rows.len();
    assert_eq!(m, rhs.len(), "one right-hand side per row");
    let n = rows.first().map_or(0, |r| r.len());
    let width = n + m;

    // tableau[i] = [A | I | b] with rows flipped so that b ≥ 0
    let mut tableau: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (i, (row, &b)) in rows.iter().zip(rhs).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let mut t = vec![0.0; width + 1];
        for (j, &a) in row.iter().enumerate() {
            t[j] = sign * a;
        }
        t[n + i] = 1.0;
        t[width] = sign * b;
        tableau.push(t);
    }
    let mut basis: Vec<usize> = (n..width).collect();

    // reduced costs of min Σ artificials, last entry = -objective
    let mut cost = vec![0.0; width + 1];
    for t in &tableau {
        for j in 0..n {
            cost[j] -= t[j];
        }
        cost[width] -= t[width];
    }

    let mut pivots = 0;
    let mut truncated = false;
    while let Some(enter) = (0..width).find(|&j| cost[j] < -PIVOT_EPS) {
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for (i, t) in tableau.iter().enumerate() {
            if t[enter] > PIVOT_EPS {
                let ratio = t[width] / t[enter];
                let better = ratio < best_ratio - PIVOT_EPS
                    || (ratio <= best_ratio + PIVOT_EPS
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if leave.is_none() || better {
                    best_ratio = ratio.min(best_ratio);
                    leave = Some(i);
                }
            }
        }
        // phase one is bounded below by zero, so a missing pivot row only
        // arises from rounding; treat the current basis as final
        let Some(row) = leave else {
            break;
        };
        pivot(&mut tableau, &mut cost, row, enter);
        basis[row] = enter;
        pivots += 1;
        if pivots >= MAX_PIVOTS {
            truncated = true;
            break;
        }
    }

    let mut x = vec![0.0; n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = tableau[i][width];
        }
    }
    PhaseOne {
        objective: -cost[width],
        x,
        pivots,
        truncated,
    }
}

fn pivot(tableau: &mut [Vec<f64>], cost: &mut [f64], row: usize, col: usize) {
    let p = tableau[row][col];
    for v in tableau[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = tableau[row].clone();
    for (i, t) in tableau.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let factor = t[col];
        if factor != 0.0 {
            for (v, pr) in t.iter_mut().zip(&pivot_row) {
                *v -= factor * pr;
            }
        }
    }
    let factor = cost[col];
    if factor != 0.0 {
        for (v, pr) in cost.iter_mut().zip(&pivot_row) {
            *v -= factor * pr;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(rows: &[Vec<f64>], rhs: &[f64], x: &[f64]) -> f64 {
        rows.iter()
            .zip(rhs)
            .map(|(r, b)| (r.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn finds_a_feasible_point() {
        // x + y + z = 1, x - y = 0.2
        let rows = vec![vec![1.0, 1.0, 1.0], vec![1.0, -1.0, 0.0]];
        let rhs = vec![1.0, 0.2];
        let sol = phase_one(&rows, &rhs);
        assert!(sol.objective.abs() < 1e-12);
        assert!(sol.x.iter().all(|&v| v >= -1e-12));
        assert!(residual(&rows, &rhs, &sol.x) < 1e-12);
    }

    #[test]
    fn detects_infeasibility() {
        // x + y = 1 and x + y = 2
        let rows = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let sol = phase_one(&rows, &[1.0, 2.0]);
        assert!(sol.objective > 0.5);
        // x - y = -1 with x, y ≥ 0 is feasible via the flipped row
        let sol = phase_one(&[vec![1.0, -1.0]], &[-1.0]);
        assert!(sol.objective.abs() < 1e-12);
        assert!((sol.x[1] - sol.x[0] - 1.0).abs() < 1e-12);
        // x = -1 alone is not
        let sol = phase_one(&[vec![1.0]], &[-1.0]);
        assert!(sol.objective > 0.5);
    }

    #[test]
    fn tolerates_redundant_and_zero_rows() {
        let rows = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 0.0]];
        let sol = phase_one(&rows, &[1.0, 2.0, 0.0]);
        assert!(sol.objective.abs() < 1e-12);
        assert!(residual(&rows, &[1.0, 2.0, 0.0], &sol.x) < 1e-12);
    }

    #[test]
    fn deterministic() {
        let rows = vec![
            vec![1.0, 2.0, 3.0, 4.0],
            vec![4.0, 3.0, 2.0, 1.0],
            vec![1.0, 1.0, 1.0, 1.0],
        ];
        let rhs = vec![2.5, 2.5, 1.0];
        assert_eq!(phase_one(&rows, &rhs), phase_one(&rows, &rhs));
    }
}
