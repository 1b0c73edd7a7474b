// A cube of negative contrast embedded in a larger positive cube.
//
// The full-size case (outer side 1.05, inner 0.55, N = 9261) ships as
// `fixtures/embedded_cubes.json`; this example runs a smaller version.

use diffuse_born::geometry::{build_embedded, validate};
use diffuse_born::spectral::{spectrum_wc, SpectralOptions};

pub fn run_example() -> diffuse_born::Result<()> {
    let grid = build_embedded(0.45, 0.25, 0.05, 1.0, -1.0)?;
    let inner = grid.kappas().iter().filter(|&&k| k < 0.0).count();
    println!(
        "N = {} ({inner} inner voxels), warnings: {}",
        grid.len(),
        validate(&grid).len()
    );
    let report = spectrum_wc(&grid, &SpectralOptions::default())?;
    println!(
        "max|Re w| = {:.5}, max|Im w| = {:.5}",
        report.max_abs_re(),
        report.max_imag_abs
    );
    for w in report.spectrum.values().iter().take(4) {
        println!("  {:.5} {:+.5}i", w.re, w.im);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
