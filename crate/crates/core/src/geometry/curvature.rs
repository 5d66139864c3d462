//! Curvature data and the self-expander residual oracle.
//!
//! The residual oracle recomputes curvature from position samples by finite
//! differences, so it stays independent of whatever equation produced the
//! trajectory. Shooting output is accepted only after passing it.

use super::profile::{dot, rot90, ProfileCurve, MIN_SAMPLES};
use super::{Orientation, SurfaceKind};
use crate::error::{Error, Result};

/// Default residual acceptance tolerance for exactly flat geometries.
pub const TOL_EXPANDER_FLAT: f64 = 1e-8;
/// Default residual acceptance tolerance for shot profiles.
pub const TOL_EXPANDER_SHOT: f64 = 1e-6;

/// Radius below which the rotational curvature sin(phi)/r is replaced by its
/// cap limit.
const CAP_EPS: f64 = 1e-9;

/// Per-sample curvature quantities of a reduced geometry.
///
/// `h` is the scalar mean curvature in the convention that the mean curvature
/// vector equals -H n; `position_normal` is <x, n> under the same orientation.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    pub h: Vec<f64>,
    pub a_norm2: Vec<f64>,
    /// |grad A|^2, defined only for reductions where A has a single
    /// nontrivial entry (curve cylinders).
    pub a_grad_norm2: Option<Vec<f64>>,
    pub position_normal: Vec<f64>,
}

impl CurvatureData {
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn min_h2(&self) -> f64 {
        self.h.iter().map(|h| h * h).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_a(&self) -> f64 {
        self.a_norm2.iter().cloned().fold(0.0, f64::max).sqrt()
    }
}

/// Rotational principal curvature sin(phi)/r from stored samples, with the
/// smooth-cap limit sin(phi)/r -> k at r = 0.
fn rotational_curvature(profile: &ProfileCurve, i: usize) -> Result<f64> {
    let r = profile.positions()[i][0];
    let sin_phi = profile.tangents()[i][1];
    if r.abs() < CAP_EPS {
        if profile.is_cap_start() && i == 0 {
            Ok(profile.curvatures()[0])
        } else {
            Err(Error::AxisTouch(format!(
                "r = {r:.3e} at s = {:.4} without cap compatibility",
                profile.s()[i]
            )))
        }
    } else {
        Ok(sin_phi / r)
    }
}

/// Compute mean curvature, |A|^2, |grad A|^2 and <x, n> per sample for the
/// given reduction kind and orientation.
pub fn curvature_of_profile(
    profile: &ProfileCurve,
    kind: SurfaceKind,
    n: usize,
    orientation: Orientation,
) -> Result<CurvatureData> {
    if profile.len() < MIN_SAMPLES {
        return Err(Error::UnderResolved(format!(
            "{} samples, need at least {MIN_SAMPLES}",
            profile.len()
        )));
    }
    let m = profile.len();
    let eps = orientation.sign();
    // <x, n> with n = -eps N in the profile plane
    let pos_normal = |i: usize| -eps * dot(profile.positions()[i], profile.normals()[i]);

    match kind {
        SurfaceKind::Hyperplane => Ok(CurvatureData {
            h: vec![0.0; m],
            a_norm2: vec![0.0; m],
            a_grad_norm2: Some(vec![0.0; m]),
            position_normal: (0..m).map(pos_normal).collect(),
        }),
        SurfaceKind::CurveCylinder => {
            let k = profile.curvatures();
            let ds = profile.ds();
            // dk/ds by central differences, one-sided at the ends
            let kp: Vec<f64> = (0..m)
                .map(|i| {
                    if i == 0 {
                        (-3.0 * k[0] + 4.0 * k[1] - k[2]) / (2.0 * ds)
                    } else if i == m - 1 {
                        (3.0 * k[m - 1] - 4.0 * k[m - 2] + k[m - 3]) / (2.0 * ds)
                    } else {
                        (k[i + 1] - k[i - 1]) / (2.0 * ds)
                    }
                })
                .collect();
            Ok(CurvatureData {
                h: k.iter().map(|&ki| eps * ki).collect(),
                a_norm2: k.iter().map(|&ki| ki * ki).collect(),
                a_grad_norm2: Some(kp.iter().map(|&d| d * d).collect()),
                position_normal: (0..m).map(pos_normal).collect(),
            })
        }
        SurfaceKind::Rotational => {
            let mut h = Vec::with_capacity(m);
            let mut a2 = Vec::with_capacity(m);
            for i in 0..m {
                let k1 = profile.curvatures()[i];
                let k2 = rotational_curvature(profile, i)?;
                h.push(eps * (k1 + (n as f64 - 1.0) * k2));
                a2.push(k1 * k1 + (n as f64 - 1.0) * k2 * k2);
            }
            Ok(CurvatureData {
                h,
                a_norm2: a2,
                a_grad_norm2: None,
                position_normal: (0..m).map(pos_normal).collect(),
            })
        }
    }
}

/// Residual samples of H + 1/2 <x, n> recomputed from positions by finite
/// differences, with the relative sign between the two terms chosen to
/// minimize the worst sample (shooting may hand back either orientation).
pub fn residual_samples_fd(
    profile: &ProfileCurve,
    kind: SurfaceKind,
    n: usize,
) -> Result<Vec<f64>> {
    if profile.len() < MIN_SAMPLES {
        return Err(Error::UnderResolved(format!(
            "{} samples, need at least {MIN_SAMPLES}",
            profile.len()
        )));
    }
    let m = profile.len();
    let reflect = kind == SurfaceKind::Rotational && profile.is_cap_start();
    let mut principal = Vec::with_capacity(m);
    let mut posn = Vec::with_capacity(m);
    for i in 0..m {
        let k_fd = profile.curvature_fd(i, reflect);
        let t_fd = profile.tangent_fd(i, reflect);
        let n_fd = rot90(t_fd);
        let sum = match kind {
            SurfaceKind::Hyperplane | SurfaceKind::CurveCylinder => k_fd,
            SurfaceKind::Rotational => {
                let r = profile.positions()[i][0];
                if r.abs() < CAP_EPS {
                    n as f64 * k_fd
                } else {
                    k_fd + (n as f64 - 1.0) * t_fd[1] / r
                }
            }
        };
        principal.push(sum);
        posn.push(dot(profile.positions()[i], n_fd));
    }
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let minus: Vec<f64> = principal
        .iter()
        .zip(&posn)
        .map(|(&c, &p)| c - 0.5 * p)
        .collect();
    let plus: Vec<f64> = principal
        .iter()
        .zip(&posn)
        .map(|(&c, &p)| c + 0.5 * p)
        .collect();
    if max_abs(&minus) <= max_abs(&plus) {
        Ok(minus)
    } else {
        Ok(plus)
    }
}

/// Self-expander residual of a surface. Zero (to rounding) exactly on
/// self-expanders; the acceptance decision compares max |r| to a tolerance.
pub fn expander_residual(surface: &super::ExpanderSurface) -> Result<Vec<f64>> {
    surface.orientation()?;
    match surface.kind() {
        SurfaceKind::Hyperplane => {
            let p = surface.check_profile(12.0, 1e-3)?;
            residual_samples_fd(&p, SurfaceKind::Hyperplane, surface.dim())
        }
        kind => {
            let p = surface.profile().ok_or_else(|| {
                Error::InvalidConfig(format!("surface {} has no profile", surface.id()))
            })?;
            residual_samples_fd(p, kind, surface.dim())
        }
    }
}

pub fn max_abs_residual(residual: &[f64]) -> f64 {
    residual.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{circle_profile, line_profile, norm, ExpanderSurface};

    #[test]
    fn hyperplane_residual_is_zero() {
        for n in 1..=3 {
            let s = ExpanderSurface::hyperplane(n).unwrap();
            let r = expander_residual(&s).unwrap();
            assert!(max_abs_residual(&r) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn hyperplane_curvature_is_exactly_zero() {
        let s = ExpanderSurface::hyperplane(2).unwrap();
        let d = s.curvature().unwrap();
        assert!(d.h.iter().all(|&h| h == 0.0));
        assert!(d.a_norm2.iter().all(|&a| a == 0.0));
        assert!(d.position_normal.iter().all(|&p| p.abs() < 1e-14));
    }

    #[test]
    fn unit_circle_residual_is_one_half() {
        // constant-curvature arithmetic: best sign pairing gives |1 - 1/2|
        let p = circle_profile(1.0, 1e-3).unwrap();
        let r = residual_samples_fd(&p, SurfaceKind::CurveCylinder, 2).unwrap();
        let max = max_abs_residual(&r);
        assert!((max - 0.5).abs() < 1e-5, "max residual {max}");
    }

    #[test]
    fn circle_curvature_data() {
        let p = circle_profile(1.0, 1e-3).unwrap();
        let d =
            curvature_of_profile(&p, SurfaceKind::CurveCylinder, 2, Orientation::Positive).unwrap();
        // outward normal convention: H = 1, |A|^2 = 1
        assert!(d.h.iter().all(|&h| (h - 1.0).abs() < 1e-12));
        assert!(d.a_norm2.iter().all(|&a| (a - 1.0).abs() < 1e-12));
        assert!(d.position_normal.iter().all(|&q| (q - 1.0).abs() < 1e-12));
    }

    #[test]
    fn cauchy_schwarz_trace_bound() {
        let p = circle_profile(1.0, 1e-3).unwrap();
        for (kind, n) in [
            (SurfaceKind::CurveCylinder, 2),
            (SurfaceKind::CurveCylinder, 3),
        ] {
            let d = curvature_of_profile(&p, kind, n, Orientation::Positive).unwrap();
            for i in 0..d.len() {
                assert!(n as f64 * d.a_norm2[i] - d.h[i] * d.h[i] >= -1e-10);
            }
        }
    }

    #[test]
    fn flat_disk_profile_is_rotational_fixed_point() {
        // straight ray from the axis: degenerate rotational start reproduces
        // the hyperplane, residual identically zero
        let ds = 1e-3;
        let m = 4000usize;
        let x: Vec<[f64; 2]> = (0..=m).map(|i| [i as f64 * ds, 0.0]).collect();
        let t = vec![[1.0, 0.0]; m + 1];
        let k = vec![0.0; m + 1];
        let p = ProfileCurve::from_samples(0.0, ds, x, t, k).unwrap();
        assert!(p.is_cap_start());
        let r = residual_samples_fd(&p, SurfaceKind::Rotational, 2).unwrap();
        assert!(max_abs_residual(&r) < 1e-10);
    }

    #[test]
    fn orientation_flip_negates_h_and_position_normal() {
        let p = circle_profile(1.0, 1e-2).unwrap();
        let a =
            curvature_of_profile(&p, SurfaceKind::CurveCylinder, 2, Orientation::Positive).unwrap();
        let b =
            curvature_of_profile(&p, SurfaceKind::CurveCylinder, 2, Orientation::Negative).unwrap();
        for i in 0..a.len() {
            assert_eq!(a.h[i], -b.h[i]);
            assert_eq!(a.position_normal[i], -b.position_normal[i]);
            assert_eq!(a.a_norm2[i], b.a_norm2[i]);
        }
    }

    #[test]
    fn line_profile_goes_through_origin() {
        let p = line_profile(2.0, 1e-2).unwrap();
        assert!(p.positions().iter().any(|x| norm(*x) < 1e-12));
    }
}
