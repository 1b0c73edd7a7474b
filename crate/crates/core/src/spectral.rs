//! Spectra of `W` and `W_c`, dominant-eigenvalue sweeps over cube sizes and
//! the pair-splitting metric for two interacting targets.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_cube, VoxelGrid};
use crate::green::f_shape;
use crate::linalg::{
    eig_general_all, eig_real_all, eig_sym_all, power_max_shifted, PowerResult, SpectrumC,
    SpectrumR,
};
use crate::operators::{assemble_sigma_w, assemble_w, assemble_wc, polarizabilities};

/// Solver settings shared by the spectral routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralOptions {
    pub use_self_energy: bool,
    /// Largest N for real dense eigensolves (including the real route to
    /// the `W_c` spectrum).
    pub real_cap: usize,
    /// Largest N for complex dense eigensolves.
    pub complex_cap: usize,
    pub power_tol: f64,
    pub power_max_iter: usize,
    pub shift: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            use_self_energy: true,
            real_cap: 12_000,
            complex_cap: 4_000,
            power_tol: 1e-10,
            power_max_iter: 200_000,
            shift: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Spectrum {
    Real(SpectrumR),
    Complex(SpectrumC),
}

impl Spectrum {
    pub fn len(&self) -> usize {
        match self {
            Spectrum::Real(s) => s.values.len(),
            Spectrum::Complex(s) => s.values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Eigenvalues as complex numbers in the stored order.
    pub fn values(&self) -> Vec<Complex64> {
        match self {
            Spectrum::Real(s) => s.values.iter().map(|&w| Complex64::new(w, 0.0)).collect(),
            Spectrum::Complex(s) => s.values.clone(),
        }
    }

    pub fn as_real(&self) -> Option<&SpectrumR> {
        match self {
            Spectrum::Real(s) => Some(s),
            Spectrum::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&SpectrumC> {
        match self {
            Spectrum::Complex(s) => Some(s),
            Spectrum::Real(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub n: usize,
    pub h: f64,
    pub h_over_lambda: f64,
    pub label: String,
    pub fingerprint: String,
}

impl GridMeta {
    pub fn of(grid: &VoxelGrid) -> Self {
        Self {
            n: grid.len(),
            h: grid.h(),
            h_over_lambda: grid.h_over_lambda(),
            label: grid.label().to_string(),
            fingerprint: grid.fingerprint(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub spectrum: Spectrum,
    /// Largest eigenvalue (largest real part for complex spectra); zero for
    /// an empty grid.
    pub w_max: f64,
    pub max_abs: f64,
    pub max_imag_abs: f64,
    /// `|sum of eigenvalues|`; the kernels have zero trace.
    pub trace_defect: f64,
    pub grid: GridMeta,
}

impl SpectrumReport {
    fn real(spectrum: SpectrumR, grid: &VoxelGrid) -> Self {
        Self {
            w_max: spectrum.max().unwrap_or(0.0),
            max_abs: spectrum.max_abs(),
            max_imag_abs: 0.0,
            trace_defect: spectrum.sum().abs(),
            grid: GridMeta::of(grid),
            spectrum: Spectrum::Real(spectrum),
        }
    }

    fn complex(spectrum: SpectrumC, grid: &VoxelGrid) -> Self {
        Self {
            w_max: spectrum.max_re().unwrap_or(0.0),
            max_abs: spectrum.max_abs(),
            max_imag_abs: spectrum.max_imag_abs(),
            trace_defect: spectrum.sum().norm(),
            grid: GridMeta::of(grid),
            spectrum: Spectrum::Complex(spectrum),
        }
    }

    /// Largest `|Re w|`.
    pub fn max_abs_re(&self) -> f64 {
        match &self.spectrum {
            Spectrum::Real(s) => s.max_abs(),
            Spectrum::Complex(s) => s.max_abs_re(),
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

/// Full spectrum of `W`.
pub fn spectrum_w(grid: &VoxelGrid, opts: &SpectralOptions) -> Result<SpectrumReport> {
    check_cap(grid.len(), opts.real_cap)?;
    let pol = polarizabilities(grid, opts.use_self_energy)?;
    let w = assemble_w(grid, &pol)?;
    Ok(SpectrumReport::real(eig_sym_all(&w)?, grid))
}

/// Full spectrum of `W_c`, computed from the real matrix `Sigma W`, which is
/// similar to `W_c`. Limited by the real cap.
pub fn spectrum_wc(grid: &VoxelGrid, opts: &SpectralOptions) -> Result<SpectrumReport> {
    check_cap(grid.len(), opts.real_cap)?;
    let pol = polarizabilities(grid, opts.use_self_energy)?;
    let sw = assemble_sigma_w(grid, &pol)?;
    let mut spectrum = eig_real_all(&sw)?;
    if pol.signs().is_definite() {
        // symmetric up to a global sign: eigenvalues are real
        spectrum = SpectrumC::new(
            spectrum
                .values
                .iter()
                .map(|w| Complex64::new(w.re, 0.0))
                .collect(),
        );
    }
    Ok(SpectrumReport::complex(spectrum, grid))
}

/// Full spectrum of `W_c` by a complex eigensolve of the assembled complex
/// symmetric matrix. Limited by the complex cap.
pub fn spectrum_wc_complex(grid: &VoxelGrid, opts: &SpectralOptions) -> Result<SpectrumReport> {
    check_cap(grid.len(), opts.complex_cap)?;
    let pol = polarizabilities(grid, opts.use_self_energy)?;
    let wc = assemble_wc(grid, &pol)?;
    Ok(SpectrumReport::complex(eig_general_all(&wc)?, grid))
}

/// Largest eigenvalue of `W` by shifted power iteration.
pub fn w_max_power(grid: &VoxelGrid, opts: &SpectralOptions) -> Result<PowerResult> {
    check_cap(grid.len(), opts.real_cap)?;
    let pol = polarizabilities(grid, opts.use_self_energy)?;
    let w = assemble_w(grid, &pol)?;
    power_max_shifted(&w, opts.shift, opts.power_tol, opts.power_max_iter)
}

/// One cube size of a [`wmax_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub side_over_lambda: f64,
    pub n: usize,
    pub w_max: Option<f64>,
    /// `f(pi sqrt(3) H / lambda_d)`: the bound for a ball circumscribing the
    /// cube.
    pub bound: f64,
    pub iterations: Option<usize>,
    /// Largest eigenvalue from full diagonalization, for verified points.
    pub verified: Option<f64>,
    pub error: Option<String>,
}

/// `w_max` of `W` for cubes of the given sides (diffuse wavelengths) at one
/// pitch. Every fourth point, starting with the first, is also fully
/// diagonalized. Failures are recorded per point.
pub fn wmax_sweep(sides: &[f64], h: f64, kappa: f64, opts: &SpectralOptions) -> Vec<SweepPoint> {
    sides
        .iter()
        .enumerate()
        .map(|(index, &side)| {
            let bound = f_shape(PI * 3f64.sqrt() * side.abs()).unwrap_or(f64::NAN);
            let mut point = SweepPoint {
                side_over_lambda: side,
                n: 0,
                w_max: None,
                bound,
                iterations: None,
                verified: None,
                error: None,
            };
            let outcome = (|| -> Result<()> {
                let grid = build_cube(side, h, kappa)?;
                point.n = grid.len();
                if grid.len() == 1 {
                    point.w_max = Some(0.0);
                    point.iterations = Some(0);
                } else {
                    let power = w_max_power(&grid, opts)?;
                    point.w_max = Some(power.value);
                    point.iterations = Some(power.iterations);
                }
                if index % 4 == 0 {
                    point.verified = Some(spectrum_w(&grid, opts)?.w_max);
                }
                Ok(())
            })();
            if let Err(e) = outcome {
                point.error = Some(e.to_string());
            }
            point
        })
        .collect()
}

/// Largest gap `w_{2k} - w_{2k+1}` over the top `pairs` consecutive pairs
/// of a descending spectrum.
pub fn pairing_gap(spectrum: &SpectrumR, pairs: usize) -> f64 {
    spectrum
        .values
        .chunks_exact(2)
        .take(pairs)
        .map(|p| p[0] - p[1])
        .fold(0.0, f64::max)
}

/// Number of top pairs entering [`pairing_gap`] in [`degeneracy_split`].
pub const SPLIT_PAIRS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRow {
    pub delta_h_over_h: f64,
    pub n: usize,
    pub w_max: f64,
    pub pairing_gap: f64,
    /// `w_max` relative to the isolated-target reference, when given.
    pub ratio: Option<f64>,
}

/// Spectra of `W` for a family of two-target grids indexed by the surface
/// gap, with the pair-splitting metric of each.
pub fn degeneracy_split(
    factory: impl Fn(f64) -> Result<VoxelGrid>,
    gaps: &[f64],
    isolated_w_max: Option<f64>,
    opts: &SpectralOptions,
) -> Result<Vec<SplitRow>> {
    gaps.iter()
        .map(|&gap| {
            let grid = factory(gap)?;
            let report = spectrum_w(&grid, opts)?;
            let spectrum = report.spectrum.as_real().expect("W spectrum is real");
            Ok(SplitRow {
                delta_h_over_h: gap,
                n: grid.len(),
                w_max: report.w_max,
                pairing_gap: pairing_gap(spectrum, SPLIT_PAIRS),
                ratio: isolated_w_max.map(|w| report.w_max / w),
            })
        })
        .collect()
}
