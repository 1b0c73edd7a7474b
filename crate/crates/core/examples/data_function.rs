// Source-to-detector signal with and without an absorbing cube, against
// the first Born approximation.

use diffuse_born::forward::{data_function, first_born};
use diffuse_born::geometry::{build_cube, Medium, ProbeLayout};
use diffuse_born::operators::polarizabilities;

pub fn run_example() -> diffuse_born::Result<()> {
    let medium = Medium::unit();
    let sources = vec![[-0.5, 0.0, 0.0]];
    let detectors: Vec<_> = (0..5).map(|i| [0.5, 0.1 * i as f64, 0.0]).collect();
    let probes = ProbeLayout::from_wavelengths(&medium, sources, detectors);
    for kappa in [0.1, 1.0] {
        let grid = build_cube(0.25, 0.05, kappa)?;
        let pol = polarizabilities(&grid, true)?;
        let data = data_function(&grid, &pol, &probes)?;
        let born = first_born(&grid, &probes)?;
        println!("kappa = {kappa}");
        for d in 0..data.g_ds.rows() {
            println!(
                "  detector {d}: G0 = {:.4e}, relative change = {:+.4}, first Born = {:+.4}",
                data.g0_ds.get(d, 0),
                data.delta.get(d, 0) / data.g0_ds.get(d, 0),
                born.get(d, 0) / data.g0_ds.get(d, 0)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
