// Validate built-in and random KD frames, then break one on purpose.
//
//     cargo run --example frame_validation

use magic_ctx::frames::{
    frame_from_unitaries, gross_wigner_frame, validate_frame, ExactFrame, FrameDescriptor,
};
use magic_ctx::linalg::c;
use magic_ctx::qudit::{random_unitary, Dimension};

pub fn run() -> magic_ctx::Result<()> {
    for d in [3, 5, 7] {
        let dim = Dimension::new(d)?;
        let gross = validate_frame(&gross_wigner_frame(dim));
        let kd = validate_frame(&frame_from_unitaries(
            &random_unitary(dim, 7),
            &random_unitary(dim, 8),
        )?);
        println!(
            "d = {d}: gross pass={} (max residual {:.1e}), random KD pass={} (max residual {:.1e})",
            gross.pass,
            gross.max_residual(),
            kd.pass,
            kd.max_residual()
        );
    }

    let dim = Dimension::new(3)?;
    let frame = gross_wigner_frame(dim);
    let mut analysis = frame.analysis().to_vec();
    analysis[0][(0, 0)] *= c(1.01, 0.0);
    let broken = ExactFrame::from_parts(
        dim,
        analysis,
        frame.synthesis().to_vec(),
        FrameDescriptor::External {
            note: "perturbed".into(),
        },
    )?;
    let report = validate_frame(&broken);
    println!("perturbed gross frame: pass={}", report.pass);
    for check in &report.checks {
        println!(
            "  {:<24} {:.2e} {}",
            check.name,
            check.residual,
            if check.pass { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
