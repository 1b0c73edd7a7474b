// Thin layers of alternating contrast: strong cancellation keeps every
// eigenvalue of `W_c` small.

use diffuse_born::geometry::build_sandwich;
use diffuse_born::spectral::{spectrum_wc, SpectralOptions};

pub fn run_example() -> diffuse_born::Result<()> {
    let grid = build_sandwich(0.45, 0.05, 1.0)?;
    let sum: f64 = grid.kappas().iter().sum();
    let report = spectrum_wc(&grid, &SpectralOptions::default())?;
    println!(
        "{} layers, N = {}, sum of contrasts = {sum}",
        (0.45f64 / 0.05).round(),
        grid.len()
    );
    println!(
        "max|w| = {:.5}, max|Im w| = {:.5}, |trace| = {:.1e}",
        report.max_abs, report.max_imag_abs, report.trace_defect
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
