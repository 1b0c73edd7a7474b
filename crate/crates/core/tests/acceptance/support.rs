use std::io::Write;
use std::path::PathBuf;
use std::sync::{Mutex, MutexGuard};

use diffuse_born::geometry::{Medium, VoxelGrid};
use diffuse_born::Point;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static HEAVY: Mutex<()> = Mutex::new(());

/// Serializes the large dense cases so two of them never share memory.
pub fn heavy() -> MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|e| e.into_inner())
}

/// One criterion line on stderr, outside the test harness capture.
pub fn report(id: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[criterion {id}] {verdict} {detail}");
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random subset of an `m^3` lattice with contrasts of both signs, pitch in
/// `[0.03, 0.15]` diffuse wavelengths. Returns at least two voxels.
pub fn random_grid(rng: &mut ChaCha8Rng, max_side: usize) -> VoxelGrid {
    let medium = Medium::unit();
    let m = rng.gen_range(2..=max_side);
    let h = rng.gen_range(0.03..0.15) * medium.lambda_d();
    let mut sites: Vec<Point> = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                sites.push([i as f64 * h, j as f64 * h, k as f64 * h]);
            }
        }
    }
    sites.shuffle(rng);
    let keep = rng.gen_range(2..=sites.len());
    sites.truncate(keep);
    let kappas = (0..keep)
        .map(|_| {
            let magnitude: f64 = rng.gen_range(0.05..2.0);
            if rng.gen_bool(0.5) {
                magnitude
            } else {
                -magnitude.min(0.95)
            }
        })
        .collect();
    VoxelGrid::new(medium, h, sites, kappas).expect("lattice subset is a valid grid")
}

/// Same centers with new contrasts.
pub fn with_kappas(grid: &VoxelGrid, kappas: Vec<f64>) -> VoxelGrid {
    VoxelGrid::new(*grid.medium(), grid.h(), grid.centers().to_vec(), kappas).expect("same centers")
}
