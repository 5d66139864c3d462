//! Theorem-level checks on generated geometries.
//!
//! Identity checks apply the reduced drifted Laplacian by central differences
//! along the profile and compare against the predicted right-hand side;
//! spectral checks compare computed bottoms against the inequality bounds
//! with honest truncation accounting (the infimum of H^2 is taken over the
//! resolved profile, and its boundary value is recorded so a reader can judge
//! whether the infimum is attained inside).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::generators::SweepMember;
use crate::geometry::{
    dot, expander_residual, max_abs_residual, weighted_a2_integral, ProfileCurve, SurfaceKind,
    TOL_EXPANDER_FLAT, TOL_EXPANDER_SHOT,
};
use crate::spectral::SpectrumResult;

/// Tolerance for spectral equality/inequality margins.
pub const TOL_SPECTRAL: f64 = 2e-3;
/// Tolerance for finite-difference identity residuals at ds = 1e-3.
pub const TOL_IDENTITY: f64 = 1e-4;
/// Required superquadratic growth factor for I(8) / I(4).
pub const A2_GROWTH_FACTOR: f64 = 40.0;

/// One pass/fail record of the verification report.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub name: String,
    pub surface: String,
    pub measured: BTreeMap<String, f64>,
    pub bound: BTreeMap<String, f64>,
    pub margin: f64,
    pub pass: bool,
    pub tolerance: f64,
    /// Designed negative controls are expected to fail this check.
    pub expected_fail: bool,
    pub error: Option<String>,
}

impl CheckRecord {
    fn new(name: &str, surface: &str) -> Self {
        Self {
            name: name.to_string(),
            surface: surface.to_string(),
            measured: BTreeMap::new(),
            bound: BTreeMap::new(),
            margin: 0.0,
            pass: false,
            tolerance: 0.0,
            expected_fail: false,
            error: None,
        }
    }

    pub fn from_error(name: &str, surface: &str, err: &Error) -> Self {
        let mut rec = Self::new(name, surface);
        rec.error = Some(err.to_string());
        rec
    }

    /// A record is "as designed" when it passes, or fails while being an
    /// expected-fail negative control.
    pub fn as_designed(&self) -> bool {
        self.pass != self.expected_fail && self.error.is_none()
    }
}

/// Both spectra of one surface, computed on the same grid and radius.
#[derive(Debug, Clone)]
pub struct SurfaceSpectra {
    pub drift: SpectrumResult,
    pub stability: SpectrumResult,
}

fn m(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
    entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Interior sample indices for finite-difference residuals: a stencil margin
/// at the ends and, for rotational profiles, a guard strip along the axis.
fn interior_indices(profile: &ProfileCurve, kind: SurfaceKind, margin: usize) -> Vec<usize> {
    let len = profile.len();
    (margin..len - margin)
        .filter(|&i| kind != SurfaceKind::Rotational || profile.positions()[i][0] > 0.05)
        .collect()
}

/// Reduced drifted Laplacian of an s-only function at sample i, by central
/// differences: g'' + [(n-1) r'/r] g' + (<x,T>/2) g'.
fn reduced_drift_laplacian(
    profile: &ProfileCurve,
    kind: SurfaceKind,
    n: usize,
    values: &[f64],
    i: usize,
) -> f64 {
    let ds = profile.ds();
    let gpp = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (ds * ds);
    let gp = (values[i + 1] - values[i - 1]) / (2.0 * ds);
    let x = profile.positions()[i];
    let t = profile.tangents()[i];
    let mut drift = 0.5 * dot(x, t);
    if kind == SurfaceKind::Rotational {
        drift += (n as f64 - 1.0) * t[0] / x[0];
    }
    gpp + drift * gp
}

fn check_tolerance_for(member: &SweepMember) -> f64 {
    if member.surface.kind() == SurfaceKind::Hyperplane {
        TOL_EXPANDER_FLAT
    } else {
        TOL_EXPANDER_SHOT
    }
}

/// Residual acceptance of the self-expander equation itself.
pub fn check_expander_residual(member: &SweepMember) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new("expander_residual", member.surface.id());
    let residual = expander_residual(&member.surface)?;
    let max = max_abs_residual(&residual);
    let tol = check_tolerance_for(member);
    rec.measured = m(&[("max_residual", max)]);
    rec.bound = m(&[("tolerance", tol)]);
    rec.tolerance = tol;
    rec.margin = tol - max;
    rec.pass = max <= tol;
    rec.expected_fail = member.control.is_some();
    Ok(rec)
}

/// Theorem-level lower bounds for the bottom of the drifted Laplacian:
/// lambda_1 >= n/2 with equality only on flat planes, and
/// lambda_1 >= n/2 + inf H^2 for hypersurfaces.
pub fn check_lambda1_lower_bound(
    member: &SweepMember,
    spectra: &SurfaceSpectra,
) -> Result<Vec<CheckRecord>> {
    let surface = &member.surface;
    let n_half = surface.dim() as f64 / 2.0;
    let lambda1 = spectra.drift.bottom();
    let rich = spectra.drift.richardson[0];
    let data = surface.curvature()?;
    let inf_h2 = data.min_h2();
    let boundary_h2 = {
        let h = &data.h;
        let a = h[0] * h[0];
        let b = h[h.len() - 1] * h[h.len() - 1];
        a.min(b)
    };
    let extent = surface.profile().map(|p| p.s_end() - p.s_start());
    let max_abs_a = data.max_abs_a();
    let flat = surface.kind() == SurfaceKind::Hyperplane;

    let mut common = m(&[
        ("lambda1", lambda1),
        ("richardson", rich),
        ("inf_h2", inf_h2),
        ("boundary_h2", boundary_h2),
        ("max_abs_a", max_abs_a),
    ]);
    if let Some(extent) = extent {
        common.insert("profile_extent".into(), extent);
    }

    let mut universal = CheckRecord::new("lambda1_universal", surface.id());
    universal.measured = common.clone();
    universal.bound = m(&[("n_half", n_half)]);
    universal.tolerance = TOL_SPECTRAL;
    universal.margin = lambda1 - n_half;
    universal.pass = universal.margin >= -TOL_SPECTRAL;

    let mut mean_curv = CheckRecord::new("lambda1_mean_curvature", surface.id());
    mean_curv.measured = common.clone();
    mean_curv.bound = m(&[("n_half_plus_inf_h2", n_half + inf_h2)]);
    mean_curv.tolerance = TOL_SPECTRAL;
    mean_curv.margin = lambda1 - (n_half + inf_h2);
    mean_curv.pass = mean_curv.margin >= -TOL_SPECTRAL;

    let mut rigidity = CheckRecord::new("lambda1_rigidity", surface.id());
    rigidity.measured = common;
    rigidity.bound = m(&[("n_half", n_half)]);
    if flat {
        // equality case: lambda_1 = n/2 within tolerance, and the geometry is flat
        rigidity.tolerance = TOL_SPECTRAL;
        rigidity.margin = TOL_SPECTRAL - (lambda1 - n_half).abs();
        rigidity.pass = (lambda1 - n_half).abs() <= TOL_SPECTRAL && max_abs_a <= 1e-12;
    } else {
        // strictness: the gap must exceed the discretization error estimate
        rigidity.tolerance = rich;
        rigidity.margin = (lambda1 - n_half) - rich;
        rigidity.pass = rigidity.margin > 0.0;
    }

    Ok(vec![universal, mean_curv, rigidity])
}

/// mu_1 <= lambda_1 + 1/2 with equality only on hyperplanes; mean convex
/// surfaces are L-stable (mu_1 >= 0, recorded against 1/2 and 1 as well).
pub fn check_mu1_inequality(
    member: &SweepMember,
    spectra: &SurfaceSpectra,
) -> Result<Vec<CheckRecord>> {
    let surface = &member.surface;
    let lambda1 = spectra.drift.bottom();
    let mu1 = spectra.stability.bottom();
    let rich = spectra.drift.richardson[0] + spectra.stability.richardson[0];
    let flat = surface.kind() == SurfaceKind::Hyperplane;
    let common = m(&[
        ("mu1", mu1),
        ("lambda1", lambda1),
        ("gap", lambda1 + 0.5 - mu1),
        ("richardson", rich),
    ]);

    let mut upper = CheckRecord::new("mu1_upper_bound", surface.id());
    upper.measured = common.clone();
    upper.bound = m(&[("lambda1_plus_half", lambda1 + 0.5)]);
    upper.tolerance = TOL_SPECTRAL;
    upper.margin = (lambda1 + 0.5) - mu1;
    upper.pass = upper.margin >= -TOL_SPECTRAL;

    let mut rigidity = CheckRecord::new("mu1_rigidity", surface.id());
    rigidity.measured = common.clone();
    if flat {
        let exact = (surface.dim() as f64 + 1.0) / 2.0;
        rigidity.bound = m(&[("half_n_plus_one", exact)]);
        rigidity.tolerance = TOL_SPECTRAL;
        rigidity.margin = TOL_SPECTRAL - (mu1 - exact).abs();
        rigidity.pass = (mu1 - exact).abs() <= TOL_SPECTRAL;
    } else {
        rigidity.bound = m(&[("strict_gap_over", rich)]);
        rigidity.tolerance = rich;
        rigidity.margin = (lambda1 + 0.5 - mu1) - rich;
        rigidity.pass = rigidity.margin > 0.0;
    }

    let mut out = vec![upper, rigidity];
    if member.mean_convex == Some(true) {
        let mut stable = CheckRecord::new("mu1_mean_convex_stability", surface.id());
        stable.measured = m(&[
            ("mu1", mu1),
            ("margin_vs_zero", mu1),
            ("margin_vs_half", mu1 - 0.5),
            ("margin_vs_one", mu1 - 1.0),
        ]);
        stable.bound = m(&[("zero", 0.0)]);
        stable.tolerance = TOL_SPECTRAL;
        stable.margin = mu1;
        stable.pass = mu1 >= -TOL_SPECTRAL;
        out.push(stable);
    }
    Ok(out)
}

/// Simons-type identities along the reduction:
/// L H + (|A|^2 + 1/2) H = 0, and for rank-one A
/// (1/2) L |A|^2 = |grad A|^2 - |A|^2/2 - |A|^4.
pub fn check_simons_identities(member: &SweepMember) -> Result<Vec<CheckRecord>> {
    let surface = &member.surface;
    let kind = surface.kind();
    let n = surface.dim();
    let profile = surface.check_profile(12.0, 1e-3)?;
    let fd_kind = if kind == SurfaceKind::Hyperplane {
        SurfaceKind::CurveCylinder
    } else {
        kind
    };
    let data = surface.curvature()?;
    let idx = interior_indices(&profile, fd_kind, 4);

    let residual_h = |profile: &ProfileCurve, data_h: &[f64], a2: &[f64]| -> f64 {
        let mut max: f64 = 0.0;
        for &i in &idx {
            let lh = reduced_drift_laplacian(profile, fd_kind, n, data_h, i);
            max = max.max((lh + (a2[i] + 0.5) * data_h[i]).abs());
        }
        max
    };

    let res_h = residual_h(&profile, &data.h, &data.a_norm2);
    // order check on the same trajectory sampled twice as coarsely
    let coarse = subsample(&profile, 2)?;
    let coarse_data =
        crate::geometry::curvature_of_profile(&coarse, kind, n, surface.orientation()?)?;
    let coarse_idx = interior_indices(&coarse, fd_kind, 4);
    let mut res_h_coarse: f64 = 0.0;
    for &i in &coarse_idx {
        let lh = reduced_drift_laplacian(&coarse, fd_kind, n, &coarse_data.h, i);
        res_h_coarse =
            res_h_coarse.max((lh + (coarse_data.a_norm2[i] + 0.5) * coarse_data.h[i]).abs());
    }

    let tol = identity_tolerance(&profile);
    let mut rec_h = CheckRecord::new("simons_mean_curvature", surface.id());
    rec_h.measured = m(&[
        ("max_residual", res_h),
        ("max_residual_coarse", res_h_coarse),
    ]);
    if res_h > 1e-14 {
        rec_h
            .measured
            .insert("refinement_ratio".into(), res_h_coarse / res_h);
    }
    rec_h.bound = m(&[("tolerance", tol)]);
    rec_h.tolerance = tol;
    rec_h.margin = tol - res_h;
    rec_h.pass = res_h <= tol;

    let mut out = vec![rec_h];
    if let Some(a_grad) = &data.a_grad_norm2 {
        // rank-one second fundamental form: |grad A| = |grad |A||
        let a2 = &data.a_norm2;
        let mut res_a: f64 = 0.0;
        for &i in &idx {
            let la2 = reduced_drift_laplacian(&profile, fd_kind, n, a2, i);
            let rhs = a_grad[i] - 0.5 * a2[i] - a2[i] * a2[i];
            res_a = res_a.max((0.5 * la2 - rhs).abs());
        }
        let mut rec_a = CheckRecord::new("simons_second_fundamental_form", surface.id());
        rec_a.measured = m(&[("max_residual", res_a)]);
        rec_a.bound = m(&[("tolerance", tol)]);
        rec_a.tolerance = tol;
        rec_a.margin = tol - res_a;
        rec_a.pass = res_a <= tol;
        out.push(rec_a);
    }
    Ok(out)
}

/// Coordinate functions restricted to a self-expander are eigenfunctions:
/// L x_i - x_i / 2 = 0 (an iff, so the circle control must fail here).
pub fn check_coordinate_eigenfunctions(member: &SweepMember) -> Result<CheckRecord> {
    let surface = &member.surface;
    let kind = surface.kind();
    let n = surface.dim();
    let profile = surface.check_profile(12.0, 1e-3)?;
    let fd_kind = if kind == SurfaceKind::Hyperplane {
        SurfaceKind::CurveCylinder
    } else {
        kind
    };
    let idx = interior_indices(&profile, fd_kind, 4);
    let mut max: f64 = 0.0;
    match fd_kind {
        SurfaceKind::CurveCylinder | SurfaceKind::Hyperplane => {
            for axis in 0..2 {
                let coords: Vec<f64> = profile.positions().iter().map(|p| p[axis]).collect();
                for &i in &idx {
                    let l = reduced_drift_laplacian(&profile, fd_kind, n, &coords, i);
                    max = max.max((l - 0.5 * coords[i]).abs());
                }
            }
        }
        SurfaceKind::Rotational => {
            // axis coordinate z(s) is a function of s alone
            let z: Vec<f64> = profile.positions().iter().map(|p| p[1]).collect();
            for &i in &idx {
                let l = reduced_drift_laplacian(&profile, fd_kind, n, &z, i);
                max = max.max((l - 0.5 * z[i]).abs());
            }
            // radial coordinates r omega_i: the spherical harmonic term
            // contributes -(n-1) r / r^2
            let r: Vec<f64> = profile.positions().iter().map(|p| p[0]).collect();
            let ds = profile.ds();
            for &i in &idx {
                let rpp = (r[i + 1] - 2.0 * r[i] + r[i - 1]) / (ds * ds);
                let rp = (r[i + 1] - r[i - 1]) / (2.0 * ds);
                let x = profile.positions()[i];
                let t = profile.tangents()[i];
                let nf = n as f64;
                let l =
                    rpp + (nf - 1.0) * rp * rp / r[i] - (nf - 1.0) / r[i] + 0.5 * dot(x, t) * rp;
                max = max.max((l - 0.5 * r[i]).abs());
            }
        }
    }
    let tol = identity_tolerance(&profile);
    let mut rec = CheckRecord::new("coordinate_eigenfunctions", surface.id());
    rec.measured = m(&[("max_residual", max)]);
    rec.bound = m(&[("tolerance", tol)]);
    rec.tolerance = tol;
    rec.margin = tol - max;
    rec.pass = max <= tol;
    rec.expected_fail = member.control.is_some();
    Ok(rec)
}

/// The restricted Gaussian v = e^{-|x|^2/4} solves L v + (n/2 + H^2) v = 0 on
/// a self-expander. Separated flat factors are folded in analytically, so the
/// reduced identity reads L_red v + (d_red/2 + H^2) v = 0.
pub fn check_ground_state_equation(member: &SweepMember) -> Result<CheckRecord> {
    let surface = &member.surface;
    let kind = surface.kind();
    let n = surface.dim();
    let profile = surface.check_profile(12.0, 1e-3)?;
    let fd_kind = if kind == SurfaceKind::Hyperplane {
        SurfaceKind::CurveCylinder
    } else {
        kind
    };
    let data = surface.curvature()?;
    let d_red = match fd_kind {
        SurfaceKind::Rotational => n as f64,
        _ => 1.0,
    };
    let v: Vec<f64> = (0..profile.len())
        .map(|i| (-profile.weight_log(i)).exp())
        .collect();
    let idx = interior_indices(&profile, fd_kind, 4);
    let mut max: f64 = 0.0;
    for &i in &idx {
        let l = reduced_drift_laplacian(&profile, fd_kind, n, &v, i);
        let h2 = data.h[i] * data.h[i];
        max = max.max((l + (0.5 * d_red + h2) * v[i]).abs());
    }
    // order check on the doubled step
    let coarse = subsample(&profile, 2)?;
    let coarse_data =
        crate::geometry::curvature_of_profile(&coarse, kind, n, surface.orientation()?)?;
    let v_coarse: Vec<f64> = (0..coarse.len())
        .map(|i| (-coarse.weight_log(i)).exp())
        .collect();
    let mut max_coarse: f64 = 0.0;
    for &i in &interior_indices(&coarse, fd_kind, 4) {
        let l = reduced_drift_laplacian(&coarse, fd_kind, n, &v_coarse, i);
        let h2 = coarse_data.h[i] * coarse_data.h[i];
        max_coarse = max_coarse.max((l + (0.5 * d_red + h2) * v_coarse[i]).abs());
    }
    let tol = identity_tolerance(&profile);
    let mut rec = CheckRecord::new("ground_state_equation", surface.id());
    rec.measured = m(&[("max_residual", max), ("max_residual_coarse", max_coarse)]);
    if max > 1e-14 {
        rec.measured
            .insert("refinement_ratio".into(), max_coarse / max);
    }
    rec.bound = m(&[("tolerance", tol)]);
    rec.tolerance = tol;
    rec.margin = tol - max;
    rec.pass = max <= tol;
    Ok(rec)
}

/// Weighted |A|^2 growth: nonflat mean-convex members must grow faster than
/// quadratically, consistent with the rigidity theorem's contrapositive.
pub fn check_weighted_a2_growth(member: &SweepMember) -> Result<CheckRecord> {
    let surface = &member.surface;
    let radii = [2.0, 4.0, 6.0, 8.0];
    let mut values = Vec::new();
    for &radius in &radii {
        values.push(weighted_a2_integral(surface, radius)?);
    }
    let ratio = values[3] / values[1];
    let mut quad_increasing = true;
    let mut quadlog_increasing = true;
    for w in values.windows(2).zip(radii.windows(2)) {
        let (v, r) = w;
        if v[1] / (r[1] * r[1]) <= v[0] / (r[0] * r[0]) {
            quad_increasing = false;
        }
        let gauge = |x: f64| x * x * x.ln();
        if v[1] / gauge(r[1]) <= v[0] / gauge(r[0]) {
            quadlog_increasing = false;
        }
    }
    let mut rec = CheckRecord::new("weighted_a2_growth", surface.id());
    rec.measured = m(&[
        ("i_2", values[0]),
        ("i_4", values[1]),
        ("i_6", values[2]),
        ("i_8", values[3]),
        ("ratio_8_over_4", ratio),
        ("quad_normalized_increasing", quad_increasing as u8 as f64),
        (
            "quadlog_normalized_increasing",
            quadlog_increasing as u8 as f64,
        ),
    ]);
    rec.bound = m(&[("required_ratio", A2_GROWTH_FACTOR)]);
    rec.tolerance = 0.0;
    rec.margin = ratio - A2_GROWTH_FACTOR;
    rec.pass = ratio > A2_GROWTH_FACTOR && quad_increasing && quadlog_increasing;
    Ok(rec)
}

/// Identity residual tolerance scaled to the profile step (1e-4 at ds = 1e-3,
/// second order).
fn identity_tolerance(profile: &ProfileCurve) -> f64 {
    TOL_IDENTITY * (profile.ds() / 1e-3) * (profile.ds() / 1e-3)
}

/// Every other sample of a profile; doubles the step for order checks.
pub fn subsample(profile: &ProfileCurve, stride: usize) -> Result<ProfileCurve> {
    let x: Vec<[f64; 2]> = profile
        .positions()
        .iter()
        .step_by(stride)
        .cloned()
        .collect();
    let t: Vec<[f64; 2]> = profile.tangents().iter().step_by(stride).cloned().collect();
    let k: Vec<f64> = profile
        .curvatures()
        .iter()
        .step_by(stride)
        .cloned()
        .collect();
    ProfileCurve::from_samples(profile.s_start(), profile.ds() * stride as f64, x, t, k)
}
