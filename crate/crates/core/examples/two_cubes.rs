// Two equal absorbing cubes brought together: pair splitting of the `W`
// spectrum and growth of `w_max` relative to one isolated cube.

use diffuse_born::geometry::{build_cube, build_two_cubes};
use diffuse_born::spectral::{degeneracy_split, spectrum_w, SpectralOptions};

pub fn run_example() -> diffuse_born::Result<()> {
    let opts = SpectralOptions::default();
    let (side, h) = (0.3, 0.05);
    let isolated = spectrum_w(&build_cube(side, h, 1.0)?, &opts)?.w_max;
    println!("isolated cube: w_max = {isolated:.6}");
    let rows = degeneracy_split(
        |gap| build_two_cubes(side, h, gap, 1.0, 1.0),
        &[2.0, 1.0, 1.0 / 3.0, 0.0],
        Some(isolated),
        &opts,
    )?;
    for r in rows {
        println!(
            "gap {:.3} H: N = {}, w_max = {:.6}, ratio = {:.4}, pair gap = {:.2e}",
            r.delta_h_over_h,
            r.n,
            r.w_max,
            r.ratio.unwrap_or(f64::NAN),
            r.pairing_gap
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
