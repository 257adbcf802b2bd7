// Kirkwood-Dirac distributions: two-basis matrix, sequential chains and POVMs.
//
//     cargo run --example kd_distributions

use magic_ctx::frames::Basis;
use magic_ctx::qudit::{magic_state, Dimension, MagicKind};
use magic_ctx::representation::{kd_matrix, kd_povm, kd_sequential, penalty, Povm};

pub fn run() -> magic_ctx::Result<()> {
    let dim = Dimension::new(3)?;
    let rho = magic_state(&MagicKind::Strange, dim)?;
    let comp = Basis::computational(dim);
    let four = Basis::fourier(dim);

    let kd = kd_matrix(&rho, &comp, &four)?;
    println!("KD matrix of the strange state (rows: computational, columns: Fourier)");
    for i in 0..3 {
        let row: Vec<String> = (0..3)
            .map(|j| {
                format!(
                    "{:+.4}{:+.4}i",
                    kd.values()[3 * i + j].re,
                    kd.values()[3 * i + j].im
                )
            })
            .collect();
        println!("  {}", row.join("  "));
    }
    println!("penalty {:.6}", penalty(&kd));

    let chain = [comp.clone(), four.clone(), comp.clone()];
    let seq = kd_sequential(&rho, &chain)?;
    let povms: Vec<Povm> = chain.iter().map(Povm::projective).collect();
    let gen = kd_povm(&rho, &povms)?;
    let gap = seq
        .values()
        .iter()
        .zip(gen.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!(
        "three-step chain: {} outcomes, total {:.12}, |sequential - povm|_max = {gap:.1e}",
        seq.len(),
        seq.total().re
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
