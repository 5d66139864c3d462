//! Candidate expander geometries and their curvature data.
//!
//! Three kinds of geometry are represented: flat hyperplanes through the
//! origin, products of a planar curve with a flat factor, and rotationally
//! symmetric hypersurfaces. The self-expander equation in codimension one
//! reads H = -1/2 <x, n> with the convention that the mean curvature vector
//! is -H n; `expander_residual` measures the pointwise failure of that
//! equation from the sampled trajectory alone.

mod curvature;
mod integral;
mod profile;

pub use curvature::{
    curvature_of_profile, expander_residual, max_abs_residual, residual_samples_fd, CurvatureData,
    TOL_EXPANDER_FLAT, TOL_EXPANDER_SHOT,
};
pub use integral::{flat_ball_weight_integral, sphere_area, weighted_a2_integral};
pub use profile::{dot, norm, rot90, ProfileCurve, MIN_SAMPLES};

use crate::error::{Error, Result};

/// Geometry class of an expander candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    /// Flat n-plane through the origin.
    Hyperplane,
    /// profile x R^(n-1), the profile being a planar curve.
    CurveCylinder,
    /// Surface of revolution about the second profile axis.
    Rotational,
}

impl SurfaceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SurfaceKind::Hyperplane => "hyperplane",
            SurfaceKind::CurveCylinder => "curve_cylinder",
            SurfaceKind::Rotational => "rotational",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "hyperplane" => Ok(SurfaceKind::Hyperplane),
            "curve_cylinder" => Ok(SurfaceKind::CurveCylinder),
            "rotational" => Ok(SurfaceKind::Rotational),
            other => Err(Error::Parse(format!("unknown surface kind {other:?}"))),
        }
    }
}

/// Sign convention for the unit normal.
///
/// `Positive` pairs the scalar mean curvature with the stored profile frame
/// so that H equals the signed profile curvature on a cylinder; `Negative`
/// flips both H and <x, n> simultaneously.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(&self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flipped(&self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Orientation::Positive => "positive",
            Orientation::Negative => "negative",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(Orientation::Positive),
            "negative" => Ok(Orientation::Negative),
            other => Err(Error::Parse(format!("unknown orientation {other:?}"))),
        }
    }
}

/// A tagged expander geometry with its intrinsic dimension and normal
/// convention. Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct ExpanderSurface {
    kind: SurfaceKind,
    profile: Option<ProfileCurve>,
    n: usize,
    orientation: Option<Orientation>,
    id: String,
}

impl ExpanderSurface {
    pub fn hyperplane(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig(format!(
                "hyperplane dimension {n} < 1"
            )));
        }
        Ok(Self {
            kind: SurfaceKind::Hyperplane,
            profile: None,
            n,
            orientation: Some(Orientation::Positive),
            id: format!("hyperplane_{n}"),
        })
    }

    pub fn curve_cylinder(profile: ProfileCurve, n: usize, id: impl Into<String>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "curve cylinder needs n >= 2, got {n}"
            )));
        }
        Ok(Self {
            kind: SurfaceKind::CurveCylinder,
            profile: Some(profile),
            n,
            orientation: Some(Orientation::Positive),
            id: id.into(),
        })
    }

    pub fn rotational(profile: ProfileCurve, n: usize, id: impl Into<String>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "rotational surface needs n >= 2, got {n}"
            )));
        }
        // interior radius must stay positive
        let m = profile.len();
        let start = if profile.is_cap_start() { 1 } else { 0 };
        for i in start..m {
            if profile.positions()[i][0] <= 0.0 {
                return Err(Error::AxisTouch(format!(
                    "r({:.4}) = {:.3e} <= 0 in the interior",
                    profile.s()[i],
                    profile.positions()[i][0]
                )));
            }
        }
        Ok(Self {
            kind: SurfaceKind::Rotational,
            profile: Some(profile),
            n,
            orientation: Some(Orientation::Positive),
            id: id.into(),
        })
    }

    /// Rebuild from parsed parts (deserialization path). `orientation` may be
    /// absent, in which case curvature-convention operations will refuse to run.
    pub fn from_parts(
        kind: SurfaceKind,
        profile: Option<ProfileCurve>,
        n: usize,
        orientation: Option<Orientation>,
        id: impl Into<String>,
    ) -> Self {
        Self {
            kind,
            profile,
            n,
            orientation,
            id: id.into(),
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 1
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn profile(&self) -> Option<&ProfileCurve> {
        self.profile.as_ref()
    }

    pub fn orientation(&self) -> Result<Orientation> {
        self.orientation.ok_or(Error::OrientationUnset)
    }

    pub fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = Some(o);
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Profile used by finite-difference checks: the stored one, or a
    /// synthetic straight line through the origin for hyperplanes.
    pub fn check_profile(&self, s_max: f64, ds: f64) -> Result<ProfileCurve> {
        match (&self.profile, self.kind) {
            (Some(p), _) => Ok(p.clone()),
            (None, SurfaceKind::Hyperplane) => line_profile(s_max, ds),
            (None, _) => Err(Error::InvalidConfig(format!(
                "surface {} has no profile",
                self.id
            ))),
        }
    }

    /// Curvature data under the surface's orientation convention.
    pub fn curvature(&self) -> Result<CurvatureData> {
        match self.kind {
            SurfaceKind::Hyperplane => {
                let p = self.check_profile(12.0, 1e-3)?;
                curvature_of_profile(&p, SurfaceKind::Hyperplane, self.n, self.orientation()?)
            }
            _ => {
                let p = self.profile.as_ref().ok_or_else(|| {
                    Error::InvalidConfig(format!("surface {} has no profile", self.id))
                })?;
                curvature_of_profile(p, self.kind, self.n, self.orientation()?)
            }
        }
    }

    /// Flip the orientation so that the mean curvature is nonnegative where
    /// it has a strict sign. Returns `None` when H changes sign (the surface
    /// is then flagged as not mean convex, which is not an error).
    pub fn normalize_mean_convex(self) -> Result<(Self, Option<bool>)> {
        if self.kind == SurfaceKind::Hyperplane {
            return Ok((self, Some(true)));
        }
        let data = self.curvature()?;
        let tol = 1e-9;
        let any_pos = data.h.iter().any(|&h| h > tol);
        let any_neg = data.h.iter().any(|&h| h < -tol);
        match (any_pos, any_neg) {
            (true, true) => Ok((self, Some(false))),
            (false, true) => {
                let o = self.orientation()?.flipped();
                Ok((self.with_orientation(o), Some(true)))
            }
            _ => Ok((self, Some(true))),
        }
    }
}

/// Straight line through the origin along the first axis, sampled over
/// [-s_max, s_max]. The flat profile used for hyperplane checks.
pub fn line_profile(s_max: f64, ds: f64) -> Result<ProfileCurve> {
    let m = (s_max / ds).round() as usize;
    let total = 2 * m + 1;
    let mut x = Vec::with_capacity(total);
    for i in 0..total {
        let s = -s_max + i as f64 * ds;
        x.push([s, 0.0]);
    }
    let t = vec![[1.0, 0.0]; total];
    let k = vec![0.0; total];
    ProfileCurve::from_samples(-s_max, ds, x, t, k)
}

/// Unit circle of given radius about the origin, counterclockwise. Not a
/// self-expander; used as a designed negative control.
pub fn circle_profile(radius: f64, ds: f64) -> Result<ProfileCurve> {
    let m = (std::f64::consts::TAU * radius / ds).round() as usize + 1;
    let mut x = Vec::with_capacity(m);
    let mut t = Vec::with_capacity(m);
    let mut k = Vec::with_capacity(m);
    for i in 0..m {
        let a = i as f64 * ds / radius;
        x.push([radius * a.cos(), radius * a.sin()]);
        t.push([-a.sin(), a.cos()]);
        k.push(1.0 / radius);
    }
    ProfileCurve::from_samples(0.0, ds, x, t, k)
}
