//! Free-space diffusion Green's function, the voxel self-energy and the
//! analytic Born-convergence bound for a ball-shaped support.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Medium;
use crate::Point;

/// Distances below this fraction of the diffuse wavelength are treated as
/// coincident points.
pub(crate) const COINCIDENCE: f64 = 1e-12;

/// Below this argument `sinh(x)/x` is evaluated from its Taylor series.
const SINHC_SERIES_CUTOFF: f64 = 1e-2;

pub(crate) fn distance(r: &Point, rp: &Point) -> f64 {
    let dx = r[0] - rp[0];
    let dy = r[1] - rp[1];
    let dz = r[2] - rp[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// `exp(-k_d d) / (4 pi D0 d)` for a separation `d > 0`. No checks.
#[inline]
pub(crate) fn g_free_at(d: f64, medium: &Medium) -> f64 {
    (-medium.kd() * d).exp() / (4.0 * PI * medium.d0() * d)
}

/// Free-space Green's function of `D0 lap G - alpha0 G = -delta`.
pub fn g_free(r: &Point, rp: &Point, medium: &Medium) -> Result<f64> {
    let d = distance(r, rp);
    if d <= COINCIDENCE * medium.lambda_d() {
        return Err(Error::SingularArguments { distance: d });
    }
    Ok(g_free_at(d, medium))
}

/// `f(x) = 1 - (1 + x) exp(-x)`.
///
/// For `x < 1` the value is assembled from `exp(-x) * sum_{k>=2} x^k / k!`,
/// which avoids the cancellation of the closed form near zero.
pub fn f_shape(x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::NegativeArgument(x));
    }
    if x >= 1.0 {
        return Ok(1.0 - (1.0 + x) * (-x).exp());
    }
    let mut term = x * x / 2.0;
    let mut sum = 0.0;
    let mut k = 2.0;
    while term > f64::EPSILON * 1e-3 * sum || sum == 0.0 {
        sum += term;
        k += 1.0;
        term *= x / k;
        if term == 0.0 {
            break;
        }
    }
    Ok((-x).exp() * sum)
}

/// `sinh(x) / x - 1`
fn sinhc_m1(x: f64) -> f64 {
    if x.abs() < SINHC_SERIES_CUTOFF {
        let x2 = x * x;
        x2 / 6.0 + x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0
    } else {
        x.sinh() / x - 1.0
    }
}

/// Integral of `g_free(r, r')` over `r'` in a ball of radius `a` centered at
/// the origin, as a function of the distance `r` of the field point from
/// the center.
///
/// Points outside the ball (`r > a`) use the exterior closed form, which is
/// continuous with the interior one at `r = a`.
pub fn ball_integral(r: f64, a: f64, medium: &Medium) -> Result<f64> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::NegativeArgument(r));
    }
    if a <= 0.0 || a.is_nan() {
        return Err(Error::InvalidGeometry(format!(
            "ball radius must be positive, got {a}"
        )));
    }
    let k = medium.kd();
    let scale = 1.0 / (medium.d0() * k * k);
    let ka = k * a;
    if r <= a {
        Ok(scale * (f_shape(ka)? - (1.0 + ka) * (-ka).exp() * sinhc_m1(k * r)))
    } else {
        let kr = k * r;
        Ok(scale * (-kr).exp() * (ka * ka.cosh() - ka.sinh()) / kr)
    }
}

/// Radius of the sphere with the same volume as a cube of side `h`.
pub fn equivalent_radius(h: f64) -> f64 {
    (3.0 / (4.0 * PI)).cbrt() * h
}

/// Self-energy `Q_F = f(k_d R_eq) / (k_d^2 D0)` of a cubic voxel of pitch
/// `h` (nondimensional), computed over the equal-volume sphere.
pub fn q_self(h: f64, medium: &Medium) -> f64 {
    let k = medium.kd();
    let x = k * equivalent_radius(h).abs();
    // x >= 0 by construction
    let f = f_shape(x).unwrap_or(0.0);
    f / (k * k * medium.d0())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `k_d a < 0.1`: threshold close to `2 / (k_d a)^2`.
    SmallKa,
    /// `k_d a > 10`: threshold close to 1.
    LargeKa,
    General,
}

/// Sufficient Born-convergence condition for an absorber supported in a
/// ball of radius `a`: `delta_alpha / alpha0 < 1 / f(k_d a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    /// Enclosing radius (nondimensional).
    pub a: f64,
    /// Largest admissible `delta_alpha / alpha0`.
    pub threshold: f64,
    pub regime: Regime,
    /// Contrast amplitude the verdict was checked against, if any.
    pub contrast: Option<f64>,
    pub satisfied: Option<bool>,
}

impl BoundVerdict {
    /// Checks a contrast amplitude `max |delta_alpha| / alpha0` against the
    /// threshold.
    pub fn with_contrast(mut self, contrast: f64) -> Self {
        self.contrast = Some(contrast);
        self.satisfied = Some(contrast.abs() < self.threshold);
        self
    }
}

pub fn born_bound(a: f64, medium: &Medium) -> Result<BoundVerdict> {
    if a <= 0.0 || a.is_nan() {
        return Err(Error::InvalidGeometry(format!(
            "enclosing radius must be positive, got {a}"
        )));
    }
    let ka = medium.kd() * a;
    let regime = if ka < 0.1 {
        Regime::SmallKa
    } else if ka > 10.0 {
        Regime::LargeKa
    } else {
        Regime::General
    };
    Ok(BoundVerdict {
        a,
        threshold: 1.0 / f_shape(ka)?,
        regime,
        contrast: None,
        satisfied: None,
    })
}
