// Stabiliser-polytope membership by linear programming, and the noise level
// at which the depolarised state enters the polytope.
//
//     cargo run --example polytope_threshold

use magic_ctx::qudit::{depolarize, magic_state, Dimension, MagicKind, Operator};
use magic_ctx::thresholds::{polytope_membership, polytope_threshold, Certificate, Membership};

pub fn run() -> magic_ctx::Result<()> {
    let dim = Dimension::new(3)?;
    let mixed = Operator::maximally_mixed(dim);
    if let Membership::Feasible(cert) = polytope_membership(&mixed)? {
        println!(
            "1/3: feasible, residual {:.1e}, coefficients {:?}",
            cert.residual, cert.coefficients
        );
    }
    let strange = magic_state(&MagicKind::Strange, dim)?;
    for p in [0.0, 0.5, 0.99] {
        let m = polytope_membership(&depolarize(&strange, p)?)?;
        println!(
            "strange at p = {p}: {}",
            if m.certificate().is_some() {
                "inside"
            } else {
                "outside"
            }
        );
    }

    for (name, kind) in [
        ("strange", MagicKind::Strange),
        ("norrell", MagicKind::Norrell),
    ] {
        let r = polytope_threshold(&magic_state(&kind, dim)?, dim, 1e-6)?;
        let note = r
            .diagnostic("WIGNER_POLYTOPE_COINCIDENCE")
            .expect("always reported");
        println!(
            "{name}: p_stab = {:.7}, {} ({:?})",
            r.p, note.message, note.verdict
        );
        if let Certificate::Polytope(cert) = &r.certificate {
            println!("  certificate residual {:.1e}", cert.residual);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
