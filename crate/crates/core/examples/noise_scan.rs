// Witness versus noise for the Gross and computational/Fourier frames,
// written as plot-ready CSV.
//
//     cargo run --example noise_scan > scan.csv

use magic_ctx::cli::{grid, scan, RunConfig, ScanFamily};
use magic_ctx::thresholds::csv_number;

pub fn run() -> magic_ctx::Result<()> {
    let config = RunConfig::default();
    let points = grid(0.0, 1.0, 0.05).map_err(|e| magic_ctx::Error::InvalidInput(e.to_string()))?;
    let rows = scan(&config, &points, &[ScanFamily::Gross, ScanFamily::KdMub])?;
    println!("p,frame,witness,min_real,max_abs_imag");
    for r in rows {
        println!(
            "{},{},{},{},{}",
            csv_number(r.p),
            r.frame,
            csv_number(r.witness),
            csv_number(r.min_real),
            csv_number(r.max_abs_imag)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> magic_ctx::Result<()> {
    run()
}
