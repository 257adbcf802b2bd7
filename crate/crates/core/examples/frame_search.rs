// Nelder-Mead search for a KD frame minimising the witness Ω.
//
//     cargo run --example frame_search

use magic_ctx::optimizer::{minimize_omega, OptimizerConfig, SearchContext};
use magic_ctx::qudit::{magic_state, Dimension, MagicKind};
use magic_ctx::representation::Scope;

pub fn run() -> magic_ctx::Result<()> {
    let dim = Dimension::new(3)?;
    let rho = magic_state(&MagicKind::Strange, dim)?;
    let config = OptimizerConfig {
        restarts: 6,
        max_iterations: 200,
        seed: 1,
        ..Default::default()
    };
    for (scope, p) in [(Scope::State, 0.3), (Scope::Subtheory, 1.0)] {
        let ctx = SearchContext::new(&rho, p, scope)?;
        let out = minimize_omega(&ctx, &config)?;
        println!(
            "{scope:?} scope, p = {p}: best Ω = {:.3e} (restart {}, canonical MUB frame {:.3e})",
            out.best.objective,
            out.best.restart,
            ctx.objective(&[0.0; 18])
        );
        print!("{}", out.trace_csv());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
