// Spectrum of the symmetrized interaction kernel `W` for a cube of side
// half a diffuse wavelength, at several contrasts.

use diffuse_born::geometry::build_cube;
use diffuse_born::spectral::{spectrum_w, SpectralOptions};

pub fn run_example() -> diffuse_born::Result<()> {
    let opts = SpectralOptions::default();
    for kappa in [1.0, 2.0, 4.0] {
        let grid = build_cube(0.5, 0.05, kappa)?;
        let report = spectrum_w(&grid, &opts)?;
        let values = &report.spectrum.as_real().expect("real spectrum").values;
        println!(
            "kappa = {kappa}: N = {}, w_max = {:.5}, w_min = {:.5}, |trace| = {:.1e}",
            grid.len(),
            report.w_max,
            values.last().copied().unwrap_or(0.0),
            report.trace_defect
        );
        println!("  top five: {:.4?}", &values[..5]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
