// Kirkwood-Dirac threshold by bisection over frame searches, with the
// ordering check against p_W and the MUB stabiliser report.
//
//     cargo run --release --example kd_threshold

use magic_ctx::optimizer::OptimizerConfig;
use magic_ctx::qudit::{magic_state, Dimension, MagicKind};
use magic_ctx::representation::Scope;
use magic_ctx::thresholds::{kd_threshold, verify_certificate, SearchSettings};
use magic_ctx::Error;

pub fn run() -> magic_ctx::Result<()> {
    let dim = Dimension::new(3)?;
    let rho = magic_state(&MagicKind::Strange, dim)?;
    let settings = SearchSettings {
        optimizer: OptimizerConfig {
            restarts: 8,
            max_iterations: 150,
            seed: 1,
            ..Default::default()
        },
        tol: 1e-4,
        ..Default::default()
    };

    let r = kd_threshold(&rho, dim, &settings)?;
    println!(
        "state scope: p_KD <= {} ({} bisection steps)",
        r.p,
        r.scan.len()
    );
    for note in &r.diagnostics {
        println!("  {} {:?}: {}", note.code, note.verdict, note.message);
    }
    let check = verify_certificate(&r, &rho, settings.classify_tol)?;
    println!(
        "  certificate re-evaluates to {:.1e} (pass={})",
        check.recomputed, check.pass
    );
    if let Some(mub) = &r.mub_claim {
        for e in &mub.entries {
            println!(
                "  stabiliser state {:>2} (basis {}): penalty {:.3e}{}",
                e.index,
                e.group,
                e.penalty,
                if e.in_defining_basis { " *" } else { "" }
            );
        }
    }

    let sub = SearchSettings {
        scope: Scope::Subtheory,
        ..settings
    };
    match kd_threshold(&rho, dim, &sub) {
        Ok(r) => println!("subtheory scope: p_KD <= {}", r.p),
        Err(Error::NoThreshold) => {
            println!("subtheory scope: no KD frame found with Ω = 0, even at p = 1")
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
