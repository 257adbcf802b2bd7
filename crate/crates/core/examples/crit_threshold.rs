// Critical threshold estimate: the smallest threshold over frame families.
//
//     cargo run --release --example crit_threshold

use magic_ctx::optimizer::OptimizerConfig;
use magic_ctx::qudit::{magic_state, Dimension, MagicKind};
use magic_ctx::representation::Scope;
use magic_ctx::thresholds::{crit_threshold, Certificate, Family, SearchSettings};

pub fn run() -> magic_ctx::Result<()> {
    let dim = Dimension::new(3)?;
    let rho = magic_state(&MagicKind::Norrell, dim)?;
    for scope in [Scope::State, Scope::Subtheory] {
        let settings = SearchSettings {
            optimizer: OptimizerConfig {
                restarts: 4,
                max_iterations: 100,
                seed: 1,
                ..Default::default()
            },
            scope,
            tol: 1e-4,
            ..Default::default()
        };
        let r = crit_threshold(&rho, dim, &[Family::Gross, Family::Kd], &settings)?;
        let family = match &r.certificate {
            Certificate::Frame { family, .. } => family.as_str(),
            Certificate::Polytope(_) => "polytope",
        };
        println!(
            "{scope:?} scope: p_crit <= {} (winning family {family})",
            r.p
        );
        for note in r
            .diagnostics
            .iter()
            .filter(|n| n.code.starts_with("FAMILY"))
        {
            println!("  {}", note.message);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
