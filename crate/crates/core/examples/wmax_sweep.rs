// Largest eigenvalue of `W` versus cube size, by power iteration, next to
// the ball bound `f(pi sqrt(3) H / lambda_d)`.

use diffuse_born::spectral::{wmax_sweep, SpectralOptions};

pub fn run_example() -> diffuse_born::Result<()> {
    let opts = SpectralOptions::default();
    let sides = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
    println!(
        "{:>8} {:>6} {:>10} {:>10} {:>10}",
        "H/lam", "N", "w_max", "bound", "full eig"
    );
    for p in wmax_sweep(&sides, 0.05, 1.0, &opts) {
        if let Some(e) = &p.error {
            println!("{:>8} failed: {e}", p.side_over_lambda);
            continue;
        }
        let verified = p.verified.map(|v| format!("{v:.6}")).unwrap_or_default();
        println!(
            "{:>8} {:>6} {:>10.6} {:>10.6} {:>10}",
            p.side_over_lambda,
            p.n,
            p.w_max.unwrap_or(f64::NAN),
            p.bound,
            verified
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
