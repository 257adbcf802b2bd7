// Weyl displacements, Clifford generators and the d(d+1) stabiliser states.
//
//     cargo run --example weyl_and_stabilizers

use magic_ctx::linalg;
use magic_ctx::qudit::{clifford_generators, stabilizer_states, weyl_matrix, Dimension, WeylIndex};

pub fn run() -> magic_ctx::Result<()> {
    for d in [3, 5, 7] {
        let dim = Dimension::new(d)?;
        let stab = stabilizer_states(dim);
        println!(
            "d = {d}: {} stabiliser states in {} bases",
            stab.len(),
            stab.group_count()
        );

        // W(1,0) W(0,1) = ω^{-1}·W(1,1) up to the composition phase
        let a = weyl_matrix(dim, WeylIndex::new(dim, 1, 0));
        let b = weyl_matrix(dim, WeylIndex::new(dim, 0, 1));
        let ab = weyl_matrix(dim, WeylIndex::new(dim, 1, 1));
        println!(
            "  |W(1,0)W(0,1) - W(1,1)|_max = {:.3e}",
            linalg::max_abs_diff(&(a * b), &ab)
        );

        for (name, u) in clifford_generators(dim) {
            println!(
                "  {name:>7}: unitarity residual {:.1e}",
                linalg::unitarity_residual(u.matrix())
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
