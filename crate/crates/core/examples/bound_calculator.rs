// Analytic Born-convergence threshold for a ball-shaped inhomogeneity.
//
// Prints the admissible contrast `1 / f(k_d a)` for a few radii together
// with its small- and large-ball limits.

use diffuse_born::geometry::Medium;
use diffuse_born::green::{born_bound, f_shape, g_free};

pub fn run_example() -> diffuse_born::Result<()> {
    let medium = Medium::unit();
    let lambda = medium.lambda_d();

    println!(
        "G0 at one decay length: {:.7}",
        g_free(&[0.0; 3], &[1.0, 0.0, 0.0], &medium)?
    );
    println!(
        "{:>10} {:>10} {:>14} {:>12}",
        "a/lambda", "k_d a", "threshold", "regime"
    );
    for a_over_lambda in [0.001, 0.01, 0.1, 0.25, 0.5, 1.0, 2.0] {
        let a = a_over_lambda * lambda;
        let v = born_bound(a, &medium)?;
        println!(
            "{:>10} {:>10.4} {:>14.6} {:>12?}",
            a_over_lambda,
            medium.kd() * a,
            v.threshold,
            v.regime
        );
    }

    // small balls: 2 / (k_d a)^2, large balls: 1
    let x = 1e-2;
    println!(
        "k_d a = {x}: 1/f = {:.2}, 2/x^2 = {:.2}",
        1.0 / f_shape(x)?,
        2.0 / (x * x)
    );
    let verdict = born_bound(1.0, &medium)?.with_contrast(3.0);
    println!(
        "contrast 3 inside k_d a = 1 ball satisfied: {:?}",
        verdict.satisfied
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
