//! Dense row-major matrices and the eigen/solve/power-iteration routines the
//! rest of the crate relies on. Factorizations and eigensolvers are backed
//! by `faer`.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef, Side};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entry type of a [`DenseMatrix`]: `f64` or `Complex64`.
pub trait Scalar:
    faer::traits::ComplexField<Real = f64>
    + Copy
    + Default
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + 'static
{
    fn modulus(self) -> f64;
    fn from_f64(x: f64) -> Self;
    fn conjugate(self) -> Self;
    fn finite(self) -> bool;
    fn real_part(self) -> f64;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn conjugate(self) -> Self {
        self
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
    fn real_part(self) -> f64 {
        self
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conjugate(self) -> Self {
        self.conj()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
    fn real_part(self) -> f64 {
        self.re
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type DenseMatrixR = DenseMatrix<f64>;
pub type DenseMatrixC = DenseMatrix<Complex64>;

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::from_f64(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.finite()) {
            return Err(Error::InvalidGeometry(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    /// Single-column matrix.
    pub fn column(values: Vec<T>) -> Self {
        Self {
            rows: values.len(),
            cols: 1,
            data: values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn trace(&self) -> T {
        self.diagonal()
            .into_iter()
            .fold(T::default(), |acc, x| acc + x)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.modulus()))
    }

    /// Induced 1-norm (largest column sum).
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, x) in sums.iter_mut().zip(self.row(i)) {
                *s += x.modulus();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Induced infinity-norm (largest row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.modulus() * x.modulus())
            .sum::<f64>()
            .sqrt()
    }

    /// `max |m_ij - m_ji|`; infinite for non-square matrices.
    pub fn symmetry_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).modulus());
            }
        }
        worst
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::default(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let product = self.as_faer() * other.as_faer();
        Ok(Self::from_faer(product.as_ref()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    /// `diag(left) * self * diag(right)`.
    pub fn scale_rows_cols(&self, left: &[T], right: &[T]) -> Self {
        assert_eq!(left.len(), self.rows);
        assert_eq!(right.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| {
            left[i] * self.get(i, j) * right[j]
        })
    }

    pub(crate) fn as_faer(&self) -> MatRef<'_, T> {
        MatRef::from_row_major_slice(&self.data, self.rows, self.cols)
    }

    pub(crate) fn from_faer(m: MatRef<'_, T>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

/// Real eigenvalues, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumR {
    pub values: Vec<f64>,
    pub n: usize,
    /// Largest `|m v - w v|` over computed eigenpairs, when vectors were
    /// computed.
    pub residual_bound: Option<f64>,
}

impl SpectrumR {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self {
            n: values.len(),
            values,
            residual_bound: None,
        }
    }

    pub fn max(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, w| acc.max(w.abs()))
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Complex eigenvalues sorted by descending real part, ties broken by
/// descending imaginary part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumC {
    pub values: Vec<Complex64>,
    pub n: usize,
}

fn complex_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

impl SpectrumC {
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(complex_order);
        Self {
            n: values.len(),
            values,
        }
    }

    pub fn max_re(&self) -> Option<f64> {
        self.values.first().map(|w| w.re)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, w| acc.max(w.norm()))
    }

    pub fn max_abs_re(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, w| acc.max(w.re.abs()))
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, w| acc.max(w.im.abs()))
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Largest distance from any eigenvalue to its greedy nearest partner in
    /// `other`. Insensitive to how near-ties were ordered. Infinite when the
    /// lengths differ.
    pub fn matching_distance(&self, other: &SpectrumC) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        let mut used = vec![false; other.n];
        let mut worst: f64 = 0.0;
        for x in &self.values {
            let mut best = None;
            for (j, y) in other.values.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let d = (x - y).norm();
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            if let Some((j, d)) = best {
                used[j] = true;
                worst = worst.max(d);
            }
        }
        worst
    }
}

fn require_square<T: Scalar>(m: &DenseMatrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn require_finite<T: Scalar>(m: &DenseMatrix<T>) -> Result<()> {
    if m.data().iter().any(|x| !x.finite()) {
        return Err(Error::DimensionMismatch(
            "matrix contains non-finite entries".into(),
        ));
    }
    Ok(())
}

/// All eigenvalues of a real symmetric matrix.
pub fn eig_sym_all(m: &DenseMatrixR) -> Result<SpectrumR> {
    require_square(m)?;
    require_finite(m)?;
    if m.rows() == 0 {
        return Ok(SpectrumR::new(Vec::new()));
    }
    let scale = m.max_abs();
    let defect = m.symmetry_defect();
    if defect >= 1e-12 * scale && defect > 0.0 {
        return Err(Error::NotSymmetric { defect, scale });
    }
    let values = m
        .as_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::NoConvergence {
            iterations: 0,
            best_estimate: None,
        })?;
    Ok(SpectrumR::new(values))
}

/// All eigenvalues of a general complex matrix.
pub fn eig_general_all(m: &DenseMatrixC) -> Result<SpectrumC> {
    require_square(m)?;
    require_finite(m)?;
    if m.rows() == 0 {
        return Ok(SpectrumC::new(Vec::new()));
    }
    let values = m
        .as_faer()
        .eigenvalues()
        .map_err(|_| Error::NoConvergence {
            iterations: 0,
            best_estimate: None,
        })?;
    Ok(SpectrumC::new(values))
}

/// All eigenvalues of a general (nonsymmetric) real matrix.
pub fn eig_real_all(m: &DenseMatrixR) -> Result<SpectrumC> {
    require_square(m)?;
    require_finite(m)?;
    if m.rows() == 0 {
        return Ok(SpectrumC::new(Vec::new()));
    }
    let values = m
        .as_faer()
        .eigenvalues()
        .map_err(|_| Error::NoConvergence {
            iterations: 0,
            best_estimate: None,
        })?;
    Ok(SpectrumC::new(values))
}

/// Solution of `m x = rhs` together with conditioning information.
#[derive(Debug, Clone)]
pub struct Solution<T> {
    pub x: DenseMatrix<T>,
    /// 1-norm condition number estimate.
    pub condition: f64,
    /// Set when `condition > 1e12`. The solution is still returned.
    pub ill_conditioned: bool,
}

/// Relative pivot magnitude below which a matrix is treated as singular.
const PIVOT_TOL: f64 = 1e-14;
/// Condition estimate above which a solve is flagged.
const ILL_CONDITIONED: f64 = 1e12;
/// Relative residual accepted from a solve.
const RESIDUAL_TOL: f64 = 1e-10;

/// LU factorization with partial pivoting, kept for repeated solves.
pub struct Factorized<T: Scalar> {
    lu: faer::linalg::solvers::PartialPivLu<T>,
    matrix_norm_one: f64,
    condition: f64,
}

impl<T: Scalar> Factorized<T> {
    pub fn new(m: &DenseMatrix<T>) -> Result<Self> {
        require_square(m)?;
        require_finite(m)?;
        let norm = m.norm_one();
        let lu = m.as_faer().partial_piv_lu();
        let n = m.rows();
        let u = lu.U();
        let pivot = (0..n)
            .map(|i| u[(i, i)].modulus())
            .fold(f64::INFINITY, f64::min);
        if n > 0 && (pivot <= PIVOT_TOL * norm || !pivot.is_finite()) {
            return Err(Error::Singular { pivot, norm });
        }
        let mut out = Self {
            lu,
            matrix_norm_one: norm,
            condition: 1.0,
        };
        if n > 0 {
            out.condition = norm * out.inverse_norm_one_estimate(n);
        }
        Ok(out)
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Hager's estimate of `||m^{-1}||_1`.
    fn inverse_norm_one_estimate(&self, n: usize) -> f64 {
        let mut x = Mat::<T>::from_fn(n, 1, |_, _| T::from_f64(1.0 / n as f64));
        let mut estimate = 0.0;
        let mut last_index = usize::MAX;
        for _ in 0..5 {
            let y = self.lu.solve(&x);
            estimate = (0..n).map(|i| y[(i, 0)].modulus()).sum::<f64>();
            let xi = Mat::<T>::from_fn(n, 1, |i, _| {
                let v = y[(i, 0)];
                let r = v.modulus();
                if r == 0.0 {
                    T::from_f64(1.0)
                } else {
                    v * T::from_f64(1.0 / r)
                }
            });
            let z = self.lu.solve_adjoint(&xi);
            let (j, zmax) = (0..n)
                .map(|i| (i, z[(i, 0)].modulus()))
                .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            let ztx: f64 = (0..n)
                .map(|i| (z[(i, 0)].conjugate() * x[(i, 0)]).real_part())
                .sum();
            if zmax <= ztx || j == last_index {
                break;
            }
            last_index = j;
            x = Mat::<T>::from_fn(n, 1, |i, _| T::from_f64(if i == j { 1.0 } else { 0.0 }));
        }
        estimate
    }

    /// Solves `m x = rhs` and checks the residual against `m`.
    pub fn solve(&self, m: &DenseMatrix<T>, rhs: &DenseMatrix<T>) -> Result<Solution<T>> {
        if rhs.rows() != m.rows() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, matrix has {}",
                rhs.rows(),
                m.rows()
            )));
        }
        let b = rhs.as_faer();
        let mut x = self.lu.solve(b);
        let mut residual = residual_ratio(m, &x, rhs, self.matrix_norm_one);
        if residual > RESIDUAL_TOL {
            // one step of iterative refinement
            let ax = m.as_faer() * &x;
            let r = b - &ax;
            let dx = self.lu.solve(&r);
            x = &x + &dx;
            residual = residual_ratio(m, &x, rhs, self.matrix_norm_one);
        }
        if residual > RESIDUAL_TOL {
            return Err(Error::InaccurateSolve {
                residual,
                bound: RESIDUAL_TOL,
            });
        }
        Ok(Solution {
            x: DenseMatrix::from_faer(x.as_ref()),
            condition: self.condition,
            ill_conditioned: self.condition > ILL_CONDITIONED,
        })
    }
}

/// `||m x - b||_1 / (||m||_1 ||x||_1)` taken column by column, worst case.
fn residual_ratio<T: Scalar>(m: &DenseMatrix<T>, x: &Mat<T>, b: &DenseMatrix<T>, norm: f64) -> f64 {
    let ax = m.as_faer() * x;
    let mut worst: f64 = 0.0;
    for c in 0..b.cols() {
        let mut r = 0.0;
        let mut xn = 0.0;
        for i in 0..b.rows() {
            r += (ax[(i, c)] - b.get(i, c)).modulus();
            xn += x[(i, c)].modulus();
        }
        if r == 0.0 {
            continue;
        }
        if xn == 0.0 || norm == 0.0 {
            return f64::INFINITY;
        }
        worst = worst.max(r / (norm * xn));
    }
    worst
}

/// Solves `m x = rhs` by LU with partial pivoting.
///
/// Fails with [`Error::Singular`] when a pivot falls below `1e-14 ||m||_1`
/// and with [`Error::InaccurateSolve`] when the residual exceeds
/// `1e-10 ||m|| ||x||` after one refinement step.
pub fn solve_linear<T: Scalar>(m: &DenseMatrix<T>, rhs: &DenseMatrix<T>) -> Result<Solution<T>> {
    Factorized::new(m)?.solve(m, rhs)
}

/// Outcome of [`power_max_shifted`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerResult {
    pub value: f64,
    pub iterations: usize,
    /// `||m x - value x|| / |value|` at the returned iterate.
    pub residual: f64,
}

const PERTURBATION_SEED: u64 = 0x0b0e_5eed;

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

struct PowerRun {
    value: f64,
    iterations: usize,
    residual: f64,
    converged: bool,
    stalled_at_zero: bool,
}

fn power_run(m: &DenseMatrixR, shift: f64, tol: f64, max_iter: usize, start: Vec<f64>) -> PowerRun {
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut x = start;
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut best = PowerRun {
        value: f64::NAN,
        iterations: 0,
        residual: f64::INFINITY,
        converged: false,
        stalled_at_zero: false,
    };
    let mut zero_streak = 0;
    for k in 1..=max_iter {
        let mx = m.matvec(&x);
        let theta: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum();
        let residual = mx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - theta * b).powi(2))
            .sum::<f64>()
            .sqrt();
        let relative = if residual == 0.0 {
            0.0
        } else {
            residual / theta.abs()
        };
        if relative < best.residual || best.value.is_nan() {
            best.value = theta;
            best.residual = relative;
        }
        best.iterations = k;
        if relative <= tol {
            best.value = theta;
            best.residual = relative;
            best.converged = true;
            return best;
        }
        if theta.abs() <= 1e-14 * scale {
            zero_streak += 1;
            if zero_streak >= 3 {
                best.stalled_at_zero = true;
                return best;
            }
        } else {
            zero_streak = 0;
        }
        let mut y: Vec<f64> = mx.iter().zip(&x).map(|(a, b)| a + shift * b).collect();
        let ny = norm2(&y);
        if ny == 0.0 || !ny.is_finite() {
            best.stalled_at_zero = true;
            return best;
        }
        y.iter_mut().for_each(|v| *v /= ny);
        x = y;
    }
    best
}

/// Largest algebraic eigenvalue of a symmetric matrix by power iteration on
/// `m + shift I`, started from the normalized all-ones vector.
///
/// Stops when the Rayleigh residual `||m x - theta x||` drops below
/// `tol |theta|`. A start vector that is (numerically) an eigenvector, or a
/// run that stalls at a zero Rayleigh quotient, triggers a second run from a
/// fixed seeded perturbation of the start; the larger converged value wins.
pub fn power_max_shifted(
    m: &DenseMatrixR,
    shift: f64,
    tol: f64,
    max_iter: usize,
) -> Result<PowerResult> {
    require_square(m)?;
    let n = m.rows();
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::DimensionMismatch(
            "power iteration needs tol > 0 and max_iter >= 1".into(),
        ));
    }
    let defect = m.symmetry_defect();
    let scale = m.max_abs();
    if defect > 1e-12 * scale {
        return Err(Error::NotSymmetric { defect, scale });
    }
    if scale == 0.0 {
        return Ok(PowerResult {
            value: 0.0,
            iterations: 1,
            residual: 0.0,
        });
    }
    let first = power_run(m, shift, tol, max_iter, vec![1.0; n]);
    let suspicious = first.stalled_at_zero || (first.converged && first.iterations <= 2);
    let run = if suspicious && n > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(PERTURBATION_SEED);
        let start: Vec<f64> = (0..n)
            .map(|_| 1.0 + 0.5 * rng.gen_range(-1.0..1.0))
            .collect();
        let second = power_run(m, shift, tol, max_iter, start);
        let mut pick = if second.converged && (!first.converged || second.value > first.value) {
            second
        } else {
            first
        };
        if pick.stalled_at_zero && pick.value.abs() <= 1e-14 * scale {
            // every start lands in the null space of m: the top eigenvalue is 0
            pick.converged = true;
            pick.value = 0.0;
        }
        pick
    } else {
        first
    };
    if run.converged {
        Ok(PowerResult {
            value: run.value,
            iterations: run.iterations,
            residual: run.residual,
        })
    } else {
        Err(Error::NoConvergence {
            iterations: run.iterations,
            best_estimate: Some(run.value),
        })
    }
}
