//! Generators for self-expander geometries: exact hyperplanes, shot planar
//! curves and their cylinders, shot rotational profiles, and the default
//! verification sweep (including designed negative controls).

mod shooting;

pub use shooting::{
    shoot_expander_curve, shoot_rotational_expander, IntegratorOrder, RotationalStart,
    ShootingConfig,
};

use crate::error::Result;
use crate::geometry::{circle_profile, ExpanderSurface, ProfileCurve};

/// The flat n-plane through the origin; residual is identically zero.
pub fn make_hyperplane(n: usize) -> Result<ExpanderSurface> {
    ExpanderSurface::hyperplane(n)
}

/// Designed negative controls for the verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlKind {
    /// Unit circle about the origin: constant residual 1/2.
    Circle,
    /// A valid expander curve rescaled by c != 1: expander trajectories are
    /// not scale invariant, so this must fail the residual oracle.
    RescaledExpander,
}

impl ControlKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ControlKind::Circle => "circle",
            ControlKind::RescaledExpander => "rescaled_expander",
        }
    }
}

/// One generated geometry plus its provenance metadata.
#[derive(Debug, Clone)]
pub struct SweepMember {
    pub surface: ExpanderSurface,
    /// Resolved generation parameters, echoed into every output file.
    pub config_echo: Vec<(String, String)>,
    pub residual_max: f64,
    pub mean_convex: Option<bool>,
    /// Tangent angles at the resolved profile ends (asymptotic cone data).
    pub cone_angles: Vec<f64>,
    pub control: Option<ControlKind>,
}

impl SweepMember {
    pub fn file_name(&self) -> String {
        format!("{}.json", self.surface.id())
    }
}

fn fmt_param(v: f64) -> String {
    format!("{v}").replace('.', "p").replace('-', "m")
}

fn cone_angles(profile: &ProfileCurve) -> Vec<f64> {
    let t0 = profile.tangents()[0];
    let t1 = profile.tangents()[profile.len() - 1];
    vec![t0[1].atan2(t0[0]), t1[1].atan2(t1[0])]
}

fn echo_shooting(config: &ShootingConfig, kind: &str, n: usize) -> Vec<(String, String)> {
    vec![
        ("generator".into(), kind.into()),
        ("n".into(), n.to_string()),
        ("d0".into(), format!("{:.17e}", config.d0)),
        ("theta0".into(), format!("{:.17e}", config.theta0)),
        ("s_max".into(), format!("{:.17e}", config.s_max)),
        ("ds".into(), format!("{:.17e}", config.ds)),
        (
            "tol_residual".into(),
            format!("{:.17e}", config.tol_residual),
        ),
        (
            "integrator_order".into(),
            config.integrator_order.value().to_string(),
        ),
    ]
}

/// Generate a hyperplane member.
pub fn hyperplane_member(n: usize) -> Result<SweepMember> {
    let surface = make_hyperplane(n)?;
    Ok(SweepMember {
        surface,
        config_echo: vec![
            ("generator".into(), "hyperplane".into()),
            ("n".into(), n.to_string()),
        ],
        residual_max: 0.0,
        mean_convex: Some(true),
        cone_angles: Vec::new(),
        control: None,
    })
}

/// Shoot a planar expander curve and wrap it as curve x R^{n-1}.
pub fn curve_cylinder_member(config: &ShootingConfig, n: usize) -> Result<SweepMember> {
    let curve = shoot_expander_curve(config)?;
    let residual = crate::geometry::residual_samples_fd(
        &curve,
        crate::geometry::SurfaceKind::CurveCylinder,
        n,
    )?;
    let residual_max = crate::geometry::max_abs_residual(&residual);
    let angles = cone_angles(&curve);
    let id = format!("curve_d0_{}", fmt_param(config.d0));
    let surface = ExpanderSurface::curve_cylinder(curve, n, id)?;
    let (surface, mean_convex) = surface.normalize_mean_convex()?;
    Ok(SweepMember {
        surface,
        config_echo: echo_shooting(config, "curve", n),
        residual_max,
        mean_convex,
        cone_angles: angles,
        control: None,
    })
}

/// Shoot a cap-start rotational expander.
pub fn rotational_member(config: &ShootingConfig, n: usize) -> Result<SweepMember> {
    let id = format!("rotational_n{}_h{}", n, fmt_param(config.d0));
    let (surface, mean_convex) = shoot_rotational_expander(config, n, RotationalStart::Cap, id)?;
    let residual = crate::geometry::expander_residual(&surface)?;
    let residual_max = crate::geometry::max_abs_residual(&residual);
    let angles = surface.profile().map(cone_angles).unwrap_or_default();
    Ok(SweepMember {
        surface,
        config_echo: echo_shooting(config, "rotational", n),
        residual_max,
        mean_convex,
        cone_angles: angles,
        control: None,
    })
}

/// Parameters of the default sweep: 3 hyperplanes, 4 shot curve cylinders
/// (d0 in {0.25, 0.5, 1, 2}, perpendicular starts), 2 rotational cap starts.
#[derive(Debug, Clone)]
pub struct SweepParams {
    pub ds: f64,
    pub s_max: f64,
    pub tol_residual: f64,
    pub curve_d0: Vec<f64>,
    pub rotational_heights: Vec<f64>,
    pub hyperplane_dims: Vec<usize>,
    pub n: usize,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            ds: 1e-3,
            s_max: 20.0,
            tol_residual: 1e-6,
            curve_d0: vec![0.25, 0.5, 1.0, 2.0],
            rotational_heights: vec![0.5, 1.0],
            hyperplane_dims: vec![1, 2, 3],
            n: 2,
        }
    }
}

impl SweepParams {
    fn curve_config(&self, d0: f64) -> ShootingConfig {
        ShootingConfig {
            d0,
            theta0: std::f64::consts::FRAC_PI_2,
            s_max: self.s_max,
            ds: self.ds,
            tol_residual: self.tol_residual,
            integrator_order: IntegratorOrder::Four,
        }
    }

    fn rotational_config(&self, height: f64) -> ShootingConfig {
        ShootingConfig {
            d0: height,
            theta0: 0.0,
            s_max: self.s_max,
            ds: self.ds,
            tol_residual: self.tol_residual,
            integrator_order: IntegratorOrder::Four,
        }
    }
}

/// Build the default sweep. Deterministic: same params, same members.
pub fn default_sweep(params: &SweepParams) -> Result<Vec<SweepMember>> {
    let mut members = Vec::new();
    for &n in &params.hyperplane_dims {
        members.push(hyperplane_member(n)?);
    }
    for &d0 in &params.curve_d0 {
        members.push(curve_cylinder_member(&params.curve_config(d0), params.n)?);
    }
    for &h in &params.rotational_heights {
        members.push(rotational_member(&params.rotational_config(h), params.n)?);
    }
    Ok(members)
}

/// Designed negative controls: each must fail its designated checks.
pub fn negative_controls(params: &SweepParams) -> Result<Vec<SweepMember>> {
    let circle = circle_profile(1.0, params.ds)?;
    let circle_residual = crate::geometry::residual_samples_fd(
        &circle,
        crate::geometry::SurfaceKind::CurveCylinder,
        params.n,
    )?;
    let circle_max = crate::geometry::max_abs_residual(&circle_residual);
    let circle_surface = ExpanderSurface::curve_cylinder(circle, params.n, "control_circle")?;

    let base = shoot_expander_curve(&params.curve_config(1.0))?;
    let scale = 1.3;
    let scaled = rescale_curve(&base, scale)?;
    let scaled_residual = crate::geometry::residual_samples_fd(
        &scaled,
        crate::geometry::SurfaceKind::CurveCylinder,
        params.n,
    )?;
    let scaled_max = crate::geometry::max_abs_residual(&scaled_residual);
    let scaled_surface = ExpanderSurface::curve_cylinder(scaled, params.n, "control_rescaled")?;

    Ok(vec![
        SweepMember {
            surface: circle_surface,
            config_echo: vec![
                ("generator".into(), "control_circle".into()),
                ("radius".into(), format!("{:.17e}", 1.0)),
            ],
            residual_max: circle_max,
            mean_convex: Some(true),
            cone_angles: Vec::new(),
            control: Some(ControlKind::Circle),
        },
        SweepMember {
            surface: scaled_surface,
            config_echo: vec![
                ("generator".into(), "control_rescaled".into()),
                ("scale".into(), format!("{scale:.17e}")),
            ],
            residual_max: scaled_max,
            mean_convex: None,
            cone_angles: Vec::new(),
            control: Some(ControlKind::RescaledExpander),
        },
    ])
}

/// Rescale a curve by c: positions and arclength scale by c, curvature by 1/c.
pub fn rescale_curve(curve: &ProfileCurve, c: f64) -> Result<ProfileCurve> {
    let x = curve
        .positions()
        .iter()
        .map(|p| [c * p[0], c * p[1]])
        .collect();
    let t = curve.tangents().to_vec();
    let k = curve.curvatures().iter().map(|ki| ki / c).collect();
    ProfileCurve::from_samples(c * curve.s_start(), c * curve.ds(), x, t, k)
}
