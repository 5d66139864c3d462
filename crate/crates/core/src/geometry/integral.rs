//! Weighted curvature integrals over geodesic balls.
//!
//! I(R) = integral over B_R of |A|^2 e^{|x|^2/4}. The geodesic ball is taken
//! about the profile point nearest the origin, with intrinsic distance along
//! the profile combined with Euclidean distance in flat factors. The flat and
//! rotational fiber factors are separated analytically into one-dimensional
//! quadratures.

use super::{ExpanderSurface, SurfaceKind};
use crate::error::{Error, Result};

/// Exponent above which e^x leaves the double range (with headroom).
const MAX_EXPONENT: f64 = 700.0;

/// Surface area of the unit sphere S^{m-1} in R^m; `sphere_area(1) = 2`,
/// `sphere_area(2) = 2 pi`, `sphere_area(3) = 4 pi`.
pub fn sphere_area(m: usize) -> f64 {
    match m {
        0 => 1.0,
        1 => 2.0,
        2 => std::f64::consts::TAU,
        _ => std::f64::consts::TAU * sphere_area(m - 2) / (m as f64 - 2.0),
    }
}

/// Composite Simpson quadrature of `f` on [0, l].
fn simpson<F: Fn(f64) -> f64>(f: F, l: f64, panels: usize) -> f64 {
    if l <= 0.0 {
        return 0.0;
    }
    let n = panels.max(2) & !1; // even
    let h = l / n as f64;
    let mut acc = f(0.0) + f(l);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// Integral of e^{|y|^2/4} over the ball |y| <= l in R^m (m >= 1);
/// returns 1 for m = 0 (no flat factor).
pub fn flat_ball_weight_integral(m: usize, l: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let panels = ((l * 200.0).ceil() as usize).max(64);
    sphere_area(m) * simpson(|r| r.powi(m as i32 - 1) * (r * r / 4.0).exp(), l, panels)
}

/// I(R) = integral of |A|^2 e^{|x|^2/4} over the geodesic ball of radius R.
///
/// Signals `Overflow` (rather than saturating) when the weight exponent
/// leaves the floating range; the caller must reduce R.
pub fn weighted_a2_integral(surface: &ExpanderSurface, radius: f64) -> Result<f64> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "radius {radius} must be positive"
        )));
    }
    match surface.kind() {
        SurfaceKind::Hyperplane => Ok(0.0),
        SurfaceKind::CurveCylinder | SurfaceKind::Rotational => {
            let profile = surface
                .profile()
                .ok_or_else(|| Error::InvalidConfig("missing profile".into()))?;
            let data = surface.curvature()?;
            let base = profile.nearest_origin_index();
            let s_base = profile.s()[base];
            let reach = (profile.s_end() - s_base).min(s_base - profile.s_start());
            let reach = if surface.kind() == SurfaceKind::Rotational {
                profile.s_end() - s_base
            } else {
                reach
            };
            if radius > reach + 1e-9 {
                return Err(Error::UnderResolved(format!(
                    "profile resolved to geodesic radius {reach:.3}, requested {radius:.3}"
                )));
            }
            if radius * radius / 4.0 > MAX_EXPONENT {
                return Err(Error::Overflow(radius * radius / 4.0));
            }
            let n = surface.dim();
            let ds = profile.ds();
            // per-sample density against arclength
            let density = |i: usize| -> Result<f64> {
                let d = profile.s()[i] - s_base;
                let rem2 = radius * radius - d * d;
                if rem2 <= 0.0 {
                    return Ok(0.0);
                }
                let w = profile.weight_log(i);
                if w > MAX_EXPONENT {
                    return Err(Error::Overflow(w));
                }
                let value = match surface.kind() {
                    SurfaceKind::CurveCylinder => {
                        data.a_norm2[i] * w.exp() * flat_ball_weight_integral(n - 1, rem2.sqrt())
                    }
                    SurfaceKind::Rotational => {
                        let r = profile.positions()[i][0];
                        data.a_norm2[i] * w.exp() * sphere_area(n) * r.powi(n as i32 - 1)
                    }
                    SurfaceKind::Hyperplane => unreachable!(),
                };
                if !value.is_finite() {
                    return Err(Error::Overflow(w));
                }
                Ok(value)
            };
            // trapezoid over samples inside the ball
            let mut acc = 0.0;
            let mut prev: Option<f64> = None;
            for i in 0..profile.len() {
                let d = (profile.s()[i] - s_base).abs();
                if surface.kind() == SurfaceKind::Rotational && profile.s()[i] < s_base {
                    continue;
                }
                if d > radius {
                    prev = None;
                    continue;
                }
                let v = density(i)?;
                if let Some(p) = prev {
                    acc += 0.5 * (p + v) * ds;
                }
                prev = Some(v);
            }
            Ok(acc)
        }
    }
}
