// Gross-Wigner representation of the qutrit magic states.
//
//     cargo run --example gross_wigner

use magic_ctx::frames::gross_wigner_frame;
use magic_ctx::qudit::{magic_state, Dimension, MagicKind};
use magic_ctx::representation::{kd_negativity, negativity_magnitude, penalty, represent_state};

pub fn run() -> magic_ctx::Result<()> {
    let dim = Dimension::new(3)?;
    let frame = gross_wigner_frame(dim);
    for (name, kind) in [
        ("strange", MagicKind::Strange),
        ("norrell", MagicKind::Norrell),
    ] {
        let w = represent_state(&frame, &magic_state(&kind, dim)?)?;
        println!("{name}:");
        for (label, v) in frame.labels().iter().zip(w.values()) {
            println!("  W{label:?} = {:+.6}", v.re);
        }
        println!(
            "  penalty {:.6}, signed negativity {:+.6}, magnitude {:.6}",
            penalty(&w),
            kd_negativity(&w),
            negativity_magnitude(&w)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
