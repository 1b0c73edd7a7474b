// Born iteration of the coupled-monopole equation below and above the
// spectral convergence radius.

use diffuse_born::forward::{born_iterate, convergence_radius, dipoles_direct, BornOptions};
use diffuse_born::geometry::{build_cube, ProbeLayout};
use diffuse_born::operators::{incident_field, polarizabilities};

pub fn run_example() -> diffuse_born::Result<()> {
    let probes = ProbeLayout::new(vec![[6.0, 0.0, 0.0]], vec![]);
    let opts = BornOptions {
        tol: 1e-12,
        max_iter: 5_000,
    };
    for kappa in [0.5, 1.0, 3.0, 8.0] {
        let grid = build_cube(0.3, 0.05, kappa)?;
        let pol = polarizabilities(&grid, true)?;
        let rho = convergence_radius(&grid, &pol)?;
        let u = incident_field(&grid, &probes)?;
        let report = born_iterate(&grid, &pol, &u, &opts)?;
        print!(
            "kappa = {kappa}: rho = {rho:.4}, converged = {}, iterations = {}, outcome = {:?}",
            report.converged, report.iterations, report.divergence
        );
        if report.converged {
            let direct = dipoles_direct(&grid, &pol, &u)?;
            let d = report.dipoles.as_ref().expect("dipoles kept");
            let err = d.sub(&direct)?.norm_fro() / direct.norm_fro();
            print!(", error vs direct solve = {err:.1e}");
        }
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
