//! Forward problem: T-matrix by direct and symmetric forms, Born iteration
//! of the coupled-dipole equation, the data function and the spectral
//! convergence radius.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ProbeLayout, VoxelGrid};
use crate::linalg::{eig_real_all, solve_linear, DenseMatrixR, Factorized};
use crate::operators::{
    assemble_g0vv, assemble_probes, assemble_sigma_w, assemble_w, Polarizabilities,
};

fn check_pol(grid: &VoxelGrid, pol: &Polarizabilities) -> Result<()> {
    if pol.len() != grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} polarizabilities for {} voxels",
            pol.len(),
            grid.len()
        )));
    }
    Ok(())
}

/// `I - V G0VV` with `V = diag(chi)`.
fn interaction_matrix(grid: &VoxelGrid, pol: &Polarizabilities) -> DenseMatrixR {
    let mut a = assemble_g0vv(grid);
    let n = grid.len();
    for i in 0..n {
        let chi = pol.chis[i];
        for x in a.row_mut(i) {
            *x *= -chi;
        }
        a.set(i, i, 1.0);
    }
    a
}

/// `T = (I - V G0VV)^{-1} V`.
pub fn tmatrix_direct(grid: &VoxelGrid, pol: &Polarizabilities) -> Result<DenseMatrixR> {
    check_pol(grid, pol)?;
    let n = grid.len();
    if n == 0 {
        return Ok(DenseMatrixR::zeros(0, 0));
    }
    let a = interaction_matrix(grid, pol);
    let v = DenseMatrixR::from_fn(n, n, |i, j| if i == j { pol.chis[i] } else { 0.0 });
    Ok(solve_linear(&a, &v)?.x)
}

/// `T = -S (Sigma + W)^{-1} S` with `S = diag(|chi|^{1/2})` and `Sigma` the
/// signs of `-chi`.
pub fn tmatrix_symmetric(grid: &VoxelGrid, pol: &Polarizabilities) -> Result<DenseMatrixR> {
    check_pol(grid, pol)?;
    let n = grid.len();
    if n == 0 {
        return Ok(DenseMatrixR::zeros(0, 0));
    }
    let s = pol.sqrt_abs();
    let sigma = pol.signs().signs;
    let mut k = assemble_w(grid, pol)?;
    for (i, &sg) in sigma.iter().enumerate() {
        k.set(i, i, sg);
    }
    let rhs = DenseMatrixR::from_fn(n, n, |i, j| if i == j { s[i] } else { 0.0 });
    let x = solve_linear(&k, &rhs)?.x;
    Ok(DenseMatrixR::from_fn(n, n, |i, j| -s[i] * x.get(i, j)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceReason {
    None,
    /// The update norm grew over the whole divergence window.
    ResidualGrowth,
    /// The dipole norm exceeded the overflow cap.
    OverflowCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BornReport {
    pub converged: bool,
    pub iterations: usize,
    /// `||d_{k+1} - d_k|| / ||d_k||` per iteration (Frobenius norms over all
    /// sources).
    pub residuals: Vec<f64>,
    pub divergence: DivergenceReason,
    /// Final dipoles, voxels x sources.
    #[serde(skip)]
    pub dipoles: Option<DenseMatrixR>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BornOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for BornOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

/// Consecutive growth steps that declare divergence.
pub const DIVERGENCE_WINDOW: usize = 10;
/// `||d||` beyond this multiple of `||d_0||` declares divergence.
pub const OVERFLOW_CAP: f64 = 1e12;

/// Iterates `d_{k+1} = V (u_inc + G0VV d_k)` from `d_0 = V u_inc`.
///
/// Converged when the relative update drops to `tol`. Divergence is
/// declared when the absolute update norm `||d_{k+1} - d_k||` grows
/// [`DIVERGENCE_WINDOW`] times in a row, or when `||d||` passes
/// [`OVERFLOW_CAP`] `* ||d_0||`.
pub fn born_iterate(
    grid: &VoxelGrid,
    pol: &Polarizabilities,
    u_inc: &DenseMatrixR,
    opts: &BornOptions,
) -> Result<BornReport> {
    check_pol(grid, pol)?;
    if u_inc.rows() != grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "incident field has {} rows for {} voxels",
            u_inc.rows(),
            grid.len()
        )));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.max_iter == 0 {
        return Err(Error::DimensionMismatch(
            "Born iteration needs tol > 0 and max_iter >= 1".into(),
        ));
    }
    let g = assemble_g0vv(grid);
    born_iterate_with(&g, pol, u_inc, opts)
}

/// [`born_iterate`] with a precomputed `G0VV`.
pub fn born_iterate_with(
    g: &DenseMatrixR,
    pol: &Polarizabilities,
    u_inc: &DenseMatrixR,
    opts: &BornOptions,
) -> Result<BornReport> {
    let (n, ns) = u_inc.shape();
    let apply_v = |m: &mut DenseMatrixR| {
        for i in 0..n {
            let chi = pol.chis[i];
            m.row_mut(i).iter_mut().for_each(|x| *x *= chi);
        }
    };
    let mut d0 = u_inc.clone();
    apply_v(&mut d0);
    let d0_norm = d0.norm_fro();
    let mut d = d0.clone();
    let mut residuals = Vec::new();
    let mut previous_update = f64::INFINITY;
    let mut growth = 0;
    let mut divergence = DivergenceReason::None;
    let mut converged = false;
    if n == 0 || ns == 0 || d0_norm == 0.0 {
        return Ok(BornReport {
            converged: true,
            iterations: 0,
            residuals,
            divergence,
            dipoles: Some(d),
        });
    }
    for _ in 0..opts.max_iter {
        let mut next = g.matmul(&d)?;
        for i in 0..n {
            for (x, u) in next.row_mut(i).iter_mut().zip(u_inc.row(i)) {
                *x += u;
            }
        }
        apply_v(&mut next);
        let update = next.sub(&d)?.norm_fro();
        let norm = d.norm_fro();
        residuals.push(if norm == 0.0 {
            f64::INFINITY
        } else {
            update / norm
        });
        d = next;
        if *residuals.last().unwrap() <= opts.tol {
            converged = true;
            break;
        }
        let dn = d.norm_fro();
        if !dn.is_finite() || dn > OVERFLOW_CAP * d0_norm {
            divergence = DivergenceReason::OverflowCap;
            break;
        }
        if update > previous_update {
            growth += 1;
            if growth >= DIVERGENCE_WINDOW {
                divergence = DivergenceReason::ResidualGrowth;
                break;
            }
        } else {
            growth = 0;
        }
        previous_update = update;
    }
    Ok(BornReport {
        converged,
        iterations: residuals.len(),
        residuals,
        divergence,
        dipoles: Some(d),
    })
}

/// Dipoles from a direct solve of `(I - V G0VV) d = V u_inc`.
pub fn dipoles_direct(
    grid: &VoxelGrid,
    pol: &Polarizabilities,
    u_inc: &DenseMatrixR,
) -> Result<DenseMatrixR> {
    check_pol(grid, pol)?;
    let a = interaction_matrix(grid, pol);
    let mut rhs = u_inc.clone();
    for i in 0..grid.len() {
        let chi = pol.chis[i];
        rhs.row_mut(i).iter_mut().for_each(|x| *x *= chi);
    }
    Ok(solve_linear(&a, &rhs)?.x)
}

/// Source-to-detector Green's matrix with and without the target.
#[derive(Debug, Clone, PartialEq)]
pub struct DataFunction {
    pub g_ds: DenseMatrixR,
    pub g0_ds: DenseMatrixR,
    pub delta: DenseMatrixR,
}

/// `G^DS = G0^DS + G0^DV T G0^VS` with `T` from [`tmatrix_direct`].
pub fn data_function(
    grid: &VoxelGrid,
    pol: &Polarizabilities,
    probes: &ProbeLayout,
) -> Result<DataFunction> {
    check_pol(grid, pol)?;
    let pm = assemble_probes(grid, probes)?;
    let (nd, ns) = pm.g0_ds.shape();
    let delta = if grid.is_empty() {
        DenseMatrixR::zeros(nd, ns)
    } else {
        // T G0VS via one factorization: (I - V G) X = V G0VS
        let a = interaction_matrix(grid, pol);
        let mut rhs = pm.g0_vs.clone();
        for i in 0..grid.len() {
            let chi = pol.chis[i];
            rhs.row_mut(i).iter_mut().for_each(|x| *x *= chi);
        }
        let x = Factorized::new(&a)?.solve(&a, &rhs)?.x;
        pm.g0_dv.matmul(&x)?
    };
    let g_ds = DenseMatrixR::from_fn(nd, ns, |i, j| pm.g0_ds.get(i, j) + delta.get(i, j));
    Ok(DataFunction {
        g_ds,
        g0_ds: pm.g0_ds,
        delta,
    })
}

/// First Born term `-G0^DV diag(v dalpha) G0^VS`.
pub fn first_born(grid: &VoxelGrid, probes: &ProbeLayout) -> Result<DenseMatrixR> {
    let pm = assemble_probes(grid, probes)?;
    let v = grid.volume();
    let weights: Vec<f64> = grid.delta_alpha().map(|da| -v * da).collect();
    let (nv, ns) = pm.g0_vs.shape();
    let scaled = DenseMatrixR::from_fn(nv, ns, |i, j| weights[i] * pm.g0_vs.get(i, j));
    pm.g0_dv.matmul(&scaled)
}

/// Spectral radius of `W_c` (equivalently of `V G0VV`). The Born series
/// converges when it is below one.
///
/// Computed from the real matrix `Sigma W`, which is similar to `W_c`.
pub fn convergence_radius(grid: &VoxelGrid, pol: &Polarizabilities) -> Result<f64> {
    check_pol(grid, pol)?;
    if grid.is_empty() {
        return Ok(0.0);
    }
    let sw = assemble_sigma_w(grid, pol)?;
    Ok(eig_real_all(&sw)?.max_abs())
}
