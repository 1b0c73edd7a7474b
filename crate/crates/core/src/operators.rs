//! Discrete operators on a voxel grid: polarizabilities, the volume Green's
//! matrix, the symmetrized kernels `W` and `W_c`, the sign operator and the
//! probe Green's matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ProbeLayout, VoxelGrid, POLE_TOL};
use crate::green::{distance, g_free_at};
use crate::linalg::{DenseMatrixC, DenseMatrixR};

/// Per-voxel polarizabilities `chi_n = -v dalpha_n / (1 + Q_F dalpha_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polarizabilities {
    pub chis: Vec<f64>,
    /// Self-energy used (zero when switched off).
    pub q_f: f64,
    /// Voxel volume `h^3`.
    pub v: f64,
}

impl Polarizabilities {
    pub fn len(&self) -> usize {
        self.chis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chis.is_empty()
    }

    /// `|chi_n|^{1/2}`.
    pub fn sqrt_abs(&self) -> Vec<f64> {
        self.chis.iter().map(|c| c.abs().sqrt()).collect()
    }

    /// Principal square roots of `-chi_n`.
    pub fn sqrt_neg(&self) -> Vec<Complex64> {
        self.chis
            .iter()
            .map(|&c| Complex64::new(-c, 0.0).sqrt())
            .collect()
    }

    /// Signs of `-chi_n`. They agree with the contrast signs whenever
    /// `1 + Q_F dalpha_n > 0`.
    pub fn signs(&self) -> SignOperator {
        SignOperator {
            signs: self
                .chis
                .iter()
                .map(|&c| if c <= 0.0 { 1.0 } else { -1.0 })
                .collect(),
        }
    }

    fn check(&self, grid: &VoxelGrid) -> Result<()> {
        if self.chis.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} polarizabilities for {} voxels",
                self.chis.len(),
                grid.len()
            )));
        }
        Ok(())
    }
}

pub fn polarizabilities(grid: &VoxelGrid, use_self_energy: bool) -> Result<Polarizabilities> {
    let q_f = if use_self_energy { grid.q_f() } else { 0.0 };
    let v = grid.volume();
    let chis = grid
        .delta_alpha()
        .zip(grid.kappas())
        .map(|(da, &kappa)| {
            let denom = 1.0 + q_f * da;
            if denom.abs() < POLE_TOL {
                return Err(Error::PoleContrast {
                    kappa,
                    distance: denom.abs(),
                });
            }
            Ok(-v * da / denom)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polarizabilities { chis, q_f, v })
}

/// Diagonal `+-1` operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignOperator {
    pub signs: Vec<f64>,
}

impl SignOperator {
    pub fn is_definite(&self) -> bool {
        self.signs.iter().all(|&s| s == self.signs[0])
    }

    pub fn to_matrix(&self) -> DenseMatrixR {
        let n = self.signs.len();
        DenseMatrixR::from_fn(n, n, |i, j| if i == j { self.signs[i] } else { 0.0 })
    }
}

/// `+1` where the contrast is non-negative, `-1` elsewhere.
pub fn assemble_sigma(grid: &VoxelGrid) -> SignOperator {
    SignOperator {
        signs: grid
            .kappas()
            .iter()
            .map(|&k| if k >= 0.0 { 1.0 } else { -1.0 })
            .collect(),
    }
}

/// Symmetric matrix with entries `left_n G0(r_n, r_m) right_m` off the
/// diagonal and zeros on it; the upper triangle is computed and mirrored.
fn symmetric_kernel(grid: &VoxelGrid, weights: &[f64]) -> DenseMatrixR {
    let n = grid.len();
    let centers = grid.centers();
    let medium = grid.medium();
    let mut m = DenseMatrixR::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let g = g_free_at(distance(&centers[i], &centers[j]), medium);
            let value = weights[i] * g * weights[j];
            m.set(i, j, value);
            m.set(j, i, value);
        }
    }
    m
}

/// Volume-to-volume Green's matrix: `G0(r_n, r_m)` off the diagonal, zero on
/// it.
pub fn assemble_g0vv(grid: &VoxelGrid) -> DenseMatrixR {
    symmetric_kernel(grid, &vec![1.0; grid.len()])
}

/// `W = S G0VV S` with `S = diag(|chi_n|^{1/2})`.
pub fn assemble_w(grid: &VoxelGrid, pol: &Polarizabilities) -> Result<DenseMatrixR> {
    pol.check(grid)?;
    Ok(symmetric_kernel(grid, &pol.sqrt_abs()))
}

/// `W_c = S_c G0VV S_c` with `S_c = diag(sqrt(-chi_n))`, principal branch.
/// Complex symmetric, not Hermitian in general.
pub fn assemble_wc(grid: &VoxelGrid, pol: &Polarizabilities) -> Result<DenseMatrixC> {
    pol.check(grid)?;
    let s = pol.sqrt_neg();
    Ok(assemble_wc_with_roots(grid, &s))
}

/// `W_c` from explicitly chosen square roots of `-chi_n`.
pub fn assemble_wc_with_roots(grid: &VoxelGrid, roots: &[Complex64]) -> DenseMatrixC {
    let n = grid.len();
    assert_eq!(roots.len(), n, "one root per voxel");
    let centers = grid.centers();
    let medium = grid.medium();
    let mut m = DenseMatrixC::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let g = g_free_at(distance(&centers[i], &centers[j]), medium);
            let value = roots[i] * roots[j] * g;
            m.set(i, j, value);
            m.set(j, i, value);
        }
    }
    m
}

/// Real nonsymmetric matrix `Sigma W` (signs of `-chi`). It is similar to
/// `W_c`, so both have the same eigenvalues.
pub fn assemble_sigma_w(grid: &VoxelGrid, pol: &Polarizabilities) -> Result<DenseMatrixR> {
    let mut w = assemble_w(grid, pol)?;
    let signs = pol.signs().signs;
    for (i, &s) in signs.iter().enumerate() {
        if s < 0.0 {
            w.row_mut(i).iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(w)
}

/// Green's matrices between probes and voxels.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeMatrices {
    /// detectors x voxels
    pub g0_dv: DenseMatrixR,
    /// voxels x sources
    pub g0_vs: DenseMatrixR,
    /// detectors x sources
    pub g0_ds: DenseMatrixR,
}

fn cross_kernel(
    rows: &[crate::Point],
    cols: &[crate::Point],
    grid: &VoxelGrid,
) -> Result<DenseMatrixR> {
    let medium = grid.medium();
    let floor = crate::green::COINCIDENCE * medium.lambda_d();
    let mut out = DenseMatrixR::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            let d = distance(r, c);
            if d <= floor {
                return Err(Error::SingularArguments { distance: d });
            }
            out.set(i, j, g_free_at(d, medium));
        }
    }
    Ok(out)
}

pub fn assemble_probes(grid: &VoxelGrid, probes: &ProbeLayout) -> Result<ProbeMatrices> {
    probes.check_against(grid)?;
    Ok(ProbeMatrices {
        g0_dv: cross_kernel(&probes.detectors, grid.centers(), grid)?,
        g0_vs: cross_kernel(grid.centers(), &probes.sources, grid)?,
        g0_ds: cross_kernel(&probes.detectors, &probes.sources, grid)?,
    })
}

/// Incident field at the voxel centers, one column per source:
/// `u_inc[n][k] = q_k G0(r_n, r_sk)`.
pub fn incident_field(grid: &VoxelGrid, probes: &ProbeLayout) -> Result<DenseMatrixR> {
    if probes.strengths.len() != probes.sources.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} strengths for {} sources",
            probes.strengths.len(),
            probes.sources.len()
        )));
    }
    probes.check_against(grid)?;
    let g = cross_kernel(grid.centers(), &probes.sources, grid)?;
    Ok(DenseMatrixR::from_fn(g.rows(), g.cols(), |n, k| {
        probes.strengths[k] * g.get(n, k)
    }))
}
