//! Background media, voxelized absorption targets and probe layouts.
//!
//! Builders take lengths in units of the diffuse wavelength and return grids
//! in nondimensional coordinates (`k_d = 1`). Voxel centers are stored in
//! lexicographic `(x, y, z)` order and only voxels with nonzero contrast are
//! kept.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::green::{distance, q_self};
use crate::Point;

/// Largest allowed deviation of a length ratio from an integer.
const COMMENSURATE_TOL: f64 = 1e-6;

/// Distance from the polarizability pole at which a contrast is rejected.
pub const POLE_TOL: f64 = 1e-6;

/// Homogeneous background: absorption rate `alpha0` and diffusion
/// coefficient `d0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    alpha0: f64,
    d0: f64,
}

impl Default for Medium {
    fn default() -> Self {
        Self::unit()
    }
}

impl Medium {
    pub fn new(alpha0: f64, d0: f64) -> Result<Self> {
        if !(alpha0 > 0.0 && alpha0.is_finite() && d0 > 0.0 && d0.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "medium constants must be positive and finite (alpha0 = {alpha0}, d0 = {d0})"
            )));
        }
        Ok(Self { alpha0, d0 })
    }

    /// The nondimensional medium `alpha0 = D0 = 1` used throughout.
    pub fn unit() -> Self {
        Self {
            alpha0: 1.0,
            d0: 1.0,
        }
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    /// Diffuse wave number `sqrt(alpha0 / D0)`.
    pub fn kd(&self) -> f64 {
        (self.alpha0 / self.d0).sqrt()
    }

    /// Diffuse wavelength `2 pi / k_d`.
    pub fn lambda_d(&self) -> f64 {
        2.0 * PI / self.kd()
    }
}

/// A voxelized inhomogeneity: cubic voxels of pitch `h` with per-voxel
/// contrast `kappa_n = delta_alpha_n / alpha0`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    medium: Medium,
    h: f64,
    centers: Vec<Point>,
    kappas: Vec<f64>,
    label: String,
}

fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    a[0].total_cmp(&b[0])
        .then(a[1].total_cmp(&b[1]))
        .then(a[2].total_cmp(&b[2]))
}

impl VoxelGrid {
    /// Builds a grid from explicit centers (nondimensional) and contrasts.
    ///
    /// Zero-contrast voxels are dropped and the remaining voxels sorted
    /// lexicographically. Centers closer than `h` (up to a relative 1e-9)
    /// are rejected. Contrasts are not checked against the polarizability
    /// pole here; see [`validate`] and the builders.
    pub fn new(medium: Medium, h: f64, centers: Vec<Point>, kappas: Vec<f64>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "voxel pitch must be positive, got {h}"
            )));
        }
        if centers.len() != kappas.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} centers but {} contrasts",
                centers.len(),
                kappas.len()
            )));
        }
        if let Some(k) = kappas.iter().find(|k| !k.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "contrast {k} is not finite"
            )));
        }
        if centers.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite voxel center".into()));
        }
        let mut voxels: Vec<(Point, f64)> = centers
            .into_iter()
            .zip(kappas)
            .filter(|(_, k)| *k != 0.0)
            .collect();
        voxels.sort_by(|a, b| lex_cmp(&a.0, &b.0));

        let min_sep = h * (1.0 - 1e-9);
        for i in 0..voxels.len() {
            for j in (i + 1)..voxels.len() {
                // sorted by x: nothing further along can be closer than min_sep
                if voxels[j].0[0] - voxels[i].0[0] >= min_sep {
                    break;
                }
                let d = distance(&voxels[i].0, &voxels[j].0);
                if d < min_sep {
                    return Err(Error::InvalidGeometry(format!(
                        "voxels {i} and {j} are {d:e} apart, closer than the pitch {h:e}"
                    )));
                }
            }
        }
        let (centers, kappas) = voxels.into_iter().unzip();
        Ok(Self {
            medium,
            h,
            centers,
            kappas,
            label: "custom".into(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn medium(&self) -> &Medium {
        &self.medium
    }

    /// Voxel pitch (nondimensional).
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Voxel pitch in units of the diffuse wavelength.
    pub fn h_over_lambda(&self) -> f64 {
        self.h / self.medium.lambda_d()
    }

    pub fn volume(&self) -> f64 {
        self.h * self.h * self.h
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Self-energy `Q_F` for this pitch and medium.
    pub fn q_f(&self) -> f64 {
        q_self(self.h, &self.medium)
    }

    /// Absorption perturbation `delta_alpha_n = kappa_n alpha0`.
    pub fn delta_alpha(&self) -> impl Iterator<Item = f64> + '_ {
        let a0 = self.medium.alpha0();
        self.kappas.iter().map(move |k| k * a0)
    }

    /// Same voxels with every contrast multiplied by `gamma`.
    pub fn scaled(&self, gamma: f64) -> Result<Self> {
        let kappas = self.kappas.iter().map(|k| k * gamma).collect();
        Ok(Self::new(self.medium, self.h, self.centers.clone(), kappas)?.with_label(&*self.label))
    }

    /// Rigidly translated copy (nondimensional offset).
    pub fn translated(&self, offset: Point) -> Self {
        let mut out = self.clone();
        for c in &mut out.centers {
            c[0] += offset[0];
            c[1] += offset[1];
            c[2] += offset[2];
        }
        out
    }

    /// SHA-256 over pitch, centers and contrasts, hex encoded.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.medium.alpha0.to_le_bytes());
        hasher.update(self.medium.d0.to_le_bytes());
        hasher.update(self.h.to_le_bytes());
        for (c, k) in self.centers.iter().zip(&self.kappas) {
            for x in c {
                hasher.update(x.to_le_bytes());
            }
            hasher.update(k.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

/// Point sources (with strengths) and point detectors, nondimensional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProbeLayout {
    pub sources: Vec<Point>,
    pub strengths: Vec<f64>,
    pub detectors: Vec<Point>,
}

impl ProbeLayout {
    /// Unit-strength sources.
    pub fn new(sources: Vec<Point>, detectors: Vec<Point>) -> Self {
        let strengths = vec![1.0; sources.len()];
        Self {
            sources,
            strengths,
            detectors,
        }
    }

    pub fn with_strengths(mut self, strengths: Vec<f64>) -> Result<Self> {
        if strengths.len() != self.sources.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} strengths for {} sources",
                strengths.len(),
                self.sources.len()
            )));
        }
        self.strengths = strengths;
        Ok(self)
    }

    /// Converts coordinates given in diffuse wavelengths.
    pub fn from_wavelengths(medium: &Medium, sources: Vec<Point>, detectors: Vec<Point>) -> Self {
        let s = medium.lambda_d();
        let scale = |p: Point| [p[0] * s, p[1] * s, p[2] * s];
        Self::new(
            sources.into_iter().map(scale).collect(),
            detectors.into_iter().map(scale).collect(),
        )
    }

    /// Sources and detectors exchanged; strengths reset to one.
    pub fn swapped(&self) -> Self {
        Self::new(self.detectors.clone(), self.sources.clone())
    }

    /// Every probe point must stay at least `h/2` away from every voxel
    /// center.
    pub fn check_against(&self, grid: &VoxelGrid) -> Result<()> {
        let limit = grid.h() / 2.0;
        for p in self.sources.iter().chain(&self.detectors) {
            for c in grid.centers() {
                let d = distance(p, c);
                if d < limit {
                    return Err(Error::SingularArguments { distance: d });
                }
            }
        }
        Ok(())
    }
}

fn lattice_count(what: &'static str, length: f64, h: f64) -> Result<usize> {
    if !(length.is_finite() && h.is_finite() && h > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "{what} = {length} with pitch {h} is not a valid length"
        )));
    }
    if length < 0.0 {
        return Err(Error::InvalidGeometry(format!(
            "{what} must be non-negative, got {length}"
        )));
    }
    let ratio = length / h;
    let m = ratio.round();
    if (ratio - m).abs() > COMMENSURATE_TOL {
        return Err(Error::NonCommensurate {
            what,
            value: length,
        });
    }
    Ok(m as usize)
}

fn check_pole(kappa: f64, q_f: f64, medium: &Medium) -> Result<()> {
    if !kappa.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "contrast {kappa} is not finite"
        )));
    }
    let distance = (1.0 + q_f * medium.alpha0() * kappa).abs();
    if distance < POLE_TOL {
        return Err(Error::PoleContrast { kappa, distance });
    }
    Ok(())
}

/// A `dims[0] x dims[1] x dims[2]` block of lattice sites centered at the
/// origin; `kappa_at` assigns the contrast of each site (zero drops it).
fn lattice_block(
    medium: Medium,
    h: f64,
    dims: [usize; 3],
    kappa_at: impl Fn([usize; 3]) -> f64,
) -> Result<VoxelGrid> {
    let offset = dims.map(|m| (m as f64 - 1.0) / 2.0);
    let capacity = dims.iter().product();
    let mut centers = Vec::with_capacity(capacity);
    let mut kappas = Vec::with_capacity(capacity);
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let kappa = kappa_at([i, j, k]);
                if kappa == 0.0 {
                    continue;
                }
                centers.push([
                    (i as f64 - offset[0]) * h,
                    (j as f64 - offset[1]) * h,
                    (k as f64 - offset[2]) * h,
                ]);
                kappas.push(kappa);
            }
        }
    }
    VoxelGrid::new(medium, h, centers, kappas)
}

fn pitch(h: f64, medium: &Medium) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "voxel pitch must be positive, got {h}"
        )));
    }
    Ok(h * medium.lambda_d())
}

fn positive(what: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "{what} must be positive, got {value}"
        )));
    }
    Ok(())
}

/// Cube of side `side` (diffuse wavelengths) filled with contrast `kappa`.
pub fn build_cube(side: f64, h: f64, kappa: f64) -> Result<VoxelGrid> {
    build_box([side, side, side], h, kappa).map(|g| g.with_label("cube"))
}

/// Rectangular box with the given side lengths (diffuse wavelengths).
pub fn build_box(sides: [f64; 3], h: f64, kappa: f64) -> Result<VoxelGrid> {
    let medium = Medium::unit();
    for s in sides {
        positive("box side", s)?;
    }
    let pitch_nd = pitch(h, &medium)?;
    let dims = [
        lattice_count("box side x", sides[0], h)?,
        lattice_count("box side y", sides[1], h)?,
        lattice_count("box side z", sides[2], h)?,
    ];
    check_pole(kappa, q_self(pitch_nd, &medium), &medium)?;
    Ok(lattice_block(medium, pitch_nd, dims, |_| kappa)?.with_label("box"))
}

/// Two cubes of side `side` placed face to face along x with a
/// surface-to-surface gap of `gap_over_side * side`.
pub fn build_two_cubes(
    side: f64,
    h: f64,
    gap_over_side: f64,
    kappa1: f64,
    kappa2: f64,
) -> Result<VoxelGrid> {
    let medium = Medium::unit();
    positive("cube side", side)?;
    if !(gap_over_side >= 0.0 && gap_over_side.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "gap must be non-negative, got {gap_over_side}"
        )));
    }
    let pitch_nd = pitch(h, &medium)?;
    let m = lattice_count("cube side", side, h)?;
    let gap = lattice_count("cube gap", gap_over_side * side, h)?;
    let q_f = q_self(pitch_nd, &medium);
    check_pole(kappa1, q_f, &medium)?;
    check_pole(kappa2, q_f, &medium)?;
    let grid = lattice_block(medium, pitch_nd, [2 * m + gap, m, m], |[i, _, _]| {
        if i < m {
            kappa1
        } else if i >= m + gap {
            kappa2
        } else {
            0.0
        }
    })?;
    Ok(grid.with_label("two_cubes"))
}

/// Cube of side `side` made of `side / h` layers of thickness `h` stacked
/// along z, layer `j` carrying contrast `(-1)^j * kappa`.
pub fn build_sandwich(side: f64, h: f64, kappa: f64) -> Result<VoxelGrid> {
    let medium = Medium::unit();
    positive("cube side", side)?;
    let pitch_nd = pitch(h, &medium)?;
    let m = lattice_count("cube side", side, h)?;
    let q_f = q_self(pitch_nd, &medium);
    check_pole(kappa, q_f, &medium)?;
    check_pole(-kappa, q_f, &medium)?;
    let grid = lattice_block(medium, pitch_nd, [m, m, m], |[_, _, k]| {
        if k % 2 == 0 {
            kappa
        } else {
            -kappa
        }
    })?;
    Ok(grid.with_label("sandwich"))
}

/// Cube of side `inner` with contrast `kappa_in` embedded concentrically in
/// a cube of side `outer` with contrast `kappa_out`. Contrasts replace each
/// other; they do not add.
pub fn build_embedded(
    outer: f64,
    inner: f64,
    h: f64,
    kappa_out: f64,
    kappa_in: f64,
) -> Result<VoxelGrid> {
    let medium = Medium::unit();
    positive("outer side", outer)?;
    positive("inner side", inner)?;
    if inner >= outer {
        return Err(Error::InvalidGeometry(format!(
            "inner cube ({inner}) must be smaller than the outer one ({outer})"
        )));
    }
    let pitch_nd = pitch(h, &medium)?;
    let m_out = lattice_count("outer side", outer, h)?;
    let m_in = lattice_count("inner side", inner, h)?;
    if (m_out - m_in) % 2 != 0 {
        return Err(Error::InvalidGeometry(format!(
            "inner cube of {m_in} voxels cannot be centered in an outer cube of {m_out}"
        )));
    }
    let q_f = q_self(pitch_nd, &medium);
    check_pole(kappa_out, q_f, &medium)?;
    check_pole(kappa_in, q_f, &medium)?;
    let lo = (m_out - m_in) / 2;
    let hi = lo + m_in;
    let inside = |i: usize| (lo..hi).contains(&i);
    let grid = lattice_block(medium, pitch_nd, [m_out, m_out, m_out], |[i, j, k]| {
        if inside(i) && inside(j) && inside(k) {
            kappa_in
        } else {
            kappa_out
        }
    })?;
    Ok(grid.with_label("embedded"))
}

/// Radius of a ball enclosing every voxel: the minimal enclosing ball of the
/// voxel centers padded by the voxel half-diagonal `h sqrt(3) / 2`.
pub fn enclosing_radius(grid: &VoxelGrid) -> Result<f64> {
    Ok(enclosing_ball(grid)?.1)
}

/// Center and padded radius of the enclosing ball; see [`enclosing_radius`].
pub fn enclosing_ball(grid: &VoxelGrid) -> Result<(Point, f64)> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let ball = min_enclosing_ball(grid.centers());
    Ok((ball.center, ball.radius + grid.h() * 3f64.sqrt() / 2.0))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// `kappa < -1`: total absorption negative (gain medium).
    NotPhysicallyAllowable { index: usize, kappa: f64 },
    /// `kappa > 1`: the shape-independent convergence guarantee no longer
    /// applies. Computation proceeds.
    ExceedsTheorem { index: usize, kappa: f64 },
    /// `|1 + Q_F alpha0 kappa| < 1e-6`.
    PoleProximity {
        index: usize,
        kappa: f64,
        distance: f64,
    },
}

impl Diagnostic {
    /// Only pole proximity prevents downstream computation.
    pub fn is_error(&self) -> bool {
        matches!(self, Diagnostic::PoleProximity { .. })
    }
}

pub fn validate(grid: &VoxelGrid) -> Vec<Diagnostic> {
    let q_f = grid.q_f();
    let a0 = grid.medium().alpha0();
    let mut out = Vec::new();
    for (index, &kappa) in grid.kappas().iter().enumerate() {
        if kappa < -1.0 {
            out.push(Diagnostic::NotPhysicallyAllowable { index, kappa });
        }
        if kappa > 1.0 {
            out.push(Diagnostic::ExceedsTheorem { index, kappa });
        }
        let distance = (1.0 + q_f * a0 * kappa).abs();
        if distance < POLE_TOL {
            out.push(Diagnostic::PoleProximity {
                index,
                kappa,
                distance,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct Ball {
    center: Point,
    radius: f64,
}

impl Ball {
    fn contains(&self, p: &Point, slack: f64) -> bool {
        distance(&self.center, p) <= self.radius + slack
    }
}

fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn ball_two(a: &Point, b: &Point) -> Ball {
    let center = [
        (a[0] + b[0]) / 2.0,
        (a[1] + b[1]) / 2.0,
        (a[2] + b[2]) / 2.0,
    ];
    Ball {
        center,
        radius: distance(&center, a).max(distance(&center, b)),
    }
}

/// Smallest ball with all of `support` on its boundary (at most four
/// points). Degenerate configurations fall back to the smallest ball over
/// subsets that still encloses every support point.
fn ball_on(support: &[Point], slack: f64) -> Option<Ball> {
    match support {
        [] => None,
        [a] => Some(Ball {
            center: *a,
            radius: 0.0,
        }),
        [a, b] => Some(ball_two(a, b)),
        [a, b, c] => {
            let u = sub(b, a);
            let v = sub(c, a);
            let w = cross(&u, &v);
            let w2 = dot(&w, &w);
            if w2 <= 1e-24 * dot(&u, &u) * dot(&v, &v) {
                // collinear: the two farthest points span the ball
                let pairs = [ball_two(a, b), ball_two(a, c), ball_two(b, c)];
                return pairs
                    .into_iter()
                    .max_by(|x, y| x.radius.total_cmp(&y.radius));
            }
            let t1 = cross(&v, &w);
            let t2 = cross(&w, &u);
            let uu = dot(&u, &u);
            let vv = dot(&v, &v);
            let offset = [
                (uu * t1[0] + vv * t2[0]) / (2.0 * w2),
                (uu * t1[1] + vv * t2[1]) / (2.0 * w2),
                (uu * t1[2] + vv * t2[2]) / (2.0 * w2),
            ];
            let center = [a[0] + offset[0], a[1] + offset[1], a[2] + offset[2]];
            let radius = [a, b, c]
                .iter()
                .map(|p| distance(&center, p))
                .fold(0.0, f64::max);
            Some(Ball { center, radius })
        }
        [a, b, c, d] => {
            let rows = [sub(b, a), sub(c, a), sub(d, a)];
            let rhs = rows.map(|r| dot(&r, &r) / 2.0);
            let det = dot(&rows[0], &cross(&rows[1], &rows[2]));
            let scale = rows.iter().map(|r| dot(r, r).sqrt()).product::<f64>();
            if det.abs() > 1e-12 * scale {
                // Cramer's rule for rows . x = rhs
                let c12 = cross(&rows[1], &rows[2]);
                let c20 = cross(&rows[2], &rows[0]);
                let c01 = cross(&rows[0], &rows[1]);
                let x = [
                    (rhs[0] * c12[0] + rhs[1] * c20[0] + rhs[2] * c01[0]) / det,
                    (rhs[0] * c12[1] + rhs[1] * c20[1] + rhs[2] * c01[1]) / det,
                    (rhs[0] * c12[2] + rhs[1] * c20[2] + rhs[2] * c01[2]) / det,
                ];
                let center = [a[0] + x[0], a[1] + x[1], a[2] + x[2]];
                let radius = [a, b, c, d]
                    .iter()
                    .map(|p| distance(&center, p))
                    .fold(0.0, f64::max);
                return Some(Ball { center, radius });
            }
            let triples = [[a, b, c], [a, b, d], [a, c, d], [b, c, d]];
            triples
                .iter()
                .filter_map(|t| {
                    let ball = ball_on(&[*t[0], *t[1], *t[2]], slack)?;
                    [a, b, c, d]
                        .iter()
                        .all(|p| ball.contains(p, slack))
                        .then_some(ball)
                })
                .min_by(|x, y| x.radius.total_cmp(&y.radius))
        }
        _ => unreachable!("support never exceeds four points"),
    }
}

fn welzl(points: &[Point], support: &mut Vec<Point>, slack: f64) -> Option<Ball> {
    let mut ball = ball_on(support, slack);
    if support.len() == 4 {
        return ball;
    }
    for i in 0..points.len() {
        let inside = ball.is_some_and(|b| b.contains(&points[i], slack));
        if !inside {
            support.push(points[i]);
            ball = welzl(&points[..i], support, slack);
            support.pop();
        }
    }
    ball
}

/// Exact minimal enclosing ball of a point cloud (Welzl), with points
/// visited in a fixed pseudo-random order.
fn min_enclosing_ball(points: &[Point]) -> Ball {
    let mut shuffled = points.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed_ba11));
    let extent = points
        .iter()
        .flatten()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(1.0);
    let slack = 1e-12 * extent;
    welzl(&shuffled, &mut Vec::with_capacity(4), slack).expect("non-empty point set")
}
