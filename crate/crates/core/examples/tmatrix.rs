// The discrete T-matrix from `(I - V G)^{-1} V` and from the symmetric
// form `-S (Sigma + W)^{-1} S` for a mixed-sign target.

use diffuse_born::forward::{tmatrix_direct, tmatrix_symmetric};
use diffuse_born::geometry::build_two_cubes;
use diffuse_born::operators::polarizabilities;

pub fn run_example() -> diffuse_born::Result<()> {
    let grid = build_two_cubes(0.15, 0.05, 0.0, 2.0, -0.7)?;
    let pol = polarizabilities(&grid, true)?;
    let direct = tmatrix_direct(&grid, &pol)?;
    let symmetric = tmatrix_symmetric(&grid, &pol)?;
    let scale = direct.max_abs();
    println!("N = {}, max|T| = {scale:.4e}", grid.len());
    println!(
        "asymmetry of T:       {:.2e}",
        direct.symmetry_defect() / scale
    );
    println!(
        "direct vs symmetric:  {:.2e}",
        direct.sub(&symmetric)?.max_abs() / scale
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
