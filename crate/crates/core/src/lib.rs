//! Forward solver and Born-series convergence analysis for optical
//! tomography with diffuse light.
//!
//! An absorbing inhomogeneity `delta_alpha(r)` embedded in an infinite
//! homogeneous diffusive medium is discretized into cubic voxels. Each voxel
//! acts as a point scatterer ("monopole") with a polarizability renormalized
//! by its self-energy; the resulting coupled-monopole equations give the
//! discrete T-matrix, the Born series, and the symmetrized interaction
//! kernels `W` and `W_c` whose spectra decide whether the Born series
//! converges.
//!
//! Internally the medium is nondimensionalized so that `alpha0 = D0 = 1`,
//! hence `k_d = 1` and the diffuse wavelength is `2 pi`. All user-facing
//! lengths (builder arguments, scenario files) are given in units of the
//! diffuse wavelength.
//!
//! Module map:
//!
//! - [`geometry`]: media, voxel grids and the test targets (cubes, sandwich, ...)
//! - [`green`]: free-space Green's function, self-energy, analytic bounds
//! - [`linalg`]: dense matrices, eigenvalues, LU solves, power iteration
//! - [`operators`]: polarizabilities, `G0^VV`, `W`, `W_c`, sign operator, probes
//! - [`spectral`]: spectra of `W`/`W_c`, `w_max` sweeps, degeneracy splitting
//! - [`forward`]: T-matrix, Born iteration, data function, convergence radius
//! - [`scenario`]: JSON scenario files, CSV/JSON outputs, the CLI backend

pub mod error;
pub mod forward;
pub mod geometry;
pub mod green;
pub mod linalg;
pub mod operators;
pub mod scenario;
pub mod spectral;

pub use error::{ConfigIssue, Error, Result};
pub use geometry::{Diagnostic, Medium, ProbeLayout, VoxelGrid};
pub use green::BoundVerdict;
pub use linalg::{DenseMatrix, DenseMatrixC, DenseMatrixR, SpectrumC, SpectrumR};

/// Complex scalar used for `W_c` and general spectra.
pub type Complex64 = num_complex::Complex64;

/// Three-vector of nondimensional coordinates.
pub type Point = [f64; 3];
