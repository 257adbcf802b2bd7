// Noise level at which the Gross-Wigner representation becomes non-negative.
//
//     cargo run --example wigner_threshold

use magic_ctx::qudit::{magic_state, random_state, Dimension, MagicKind};
use magic_ctx::thresholds::{wigner_min, wigner_threshold};

pub fn run() -> magic_ctx::Result<()> {
    let dim = Dimension::new(3)?;
    let states = [
        ("strange", magic_state(&MagicKind::Strange, dim)?),
        ("norrell", magic_state(&MagicKind::Norrell, dim)?),
        ("random(seed 1)", random_state(dim, 1)),
    ];
    for (name, rho) in &states {
        let r = wigner_threshold(rho, dim)?;
        println!(
            "{name:<15} w_min = {:+.6}  p_W = {:.6}",
            wigner_min(rho)?,
            r.p
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
