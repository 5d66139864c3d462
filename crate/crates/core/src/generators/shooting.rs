//! Construction of expander geometries by ODE shooting.
//!
//! The planar expander curve solves the arclength system
//!     x' = T,   T' = k N,   k = 1/2 <x, N>,   N = rot90(T),
//! which is the curve case of the self-expander equation in vector form.
//! Rotational profiles in the (r, z) half-plane solve
//!     k = 1/2 (z cos(phi) - r sin(phi)) - (n - 1) sin(phi) / r,
//! with the removable axis singularity replaced by its analytic limit
//!     k = (z cos(phi) - r sin(phi)) / (2 n)   at r = 0.
//! Every returned geometry must pass the finite-difference residual oracle;
//! the derivation is never trusted on its own.

use crate::error::{Error, Result};
use crate::geometry::{
    dot, residual_samples_fd, rot90, ExpanderSurface, ProfileCurve, SurfaceKind,
};

/// Hard bound on |x| before the trajectory is declared divergent.
const BLOWUP_BOUND: f64 = 1e6;

/// One-step integrator order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorOrder {
    Two,
    Four,
}

impl IntegratorOrder {
    pub fn value(&self) -> u32 {
        match self {
            IntegratorOrder::Two => 2,
            IntegratorOrder::Four => 4,
        }
    }

    pub fn parse(v: u32) -> Result<Self> {
        match v {
            2 => Ok(IntegratorOrder::Two),
            4 => Ok(IntegratorOrder::Four),
            other => Err(Error::InvalidConfig(format!(
                "integrator order must be 2 or 4, got {other}"
            ))),
        }
    }
}

/// Shooting parameters: initial distance from the origin, initial tangent
/// angle, integration length and step, and the residual acceptance tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootingConfig {
    pub d0: f64,
    pub theta0: f64,
    pub s_max: f64,
    pub ds: f64,
    pub tol_residual: f64,
    pub integrator_order: IntegratorOrder,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            d0: 1.0,
            theta0: std::f64::consts::FRAC_PI_2,
            s_max: 20.0,
            ds: 1e-3,
            tol_residual: 1e-6,
            integrator_order: IntegratorOrder::Four,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.ds.is_finite() || self.ds <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "ds = {} must be > 0",
                self.ds
            )));
        }
        if self.s_max < 100.0 * self.ds {
            return Err(Error::InvalidConfig(format!(
                "s_max = {} must be at least 100 ds = {}",
                self.s_max,
                100.0 * self.ds
            )));
        }
        if !self.tol_residual.is_finite() || self.tol_residual <= 0.0 {
            return Err(Error::InvalidConfig("tol_residual must be > 0".into()));
        }
        if self.d0 < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "d0 = {} must be >= 0",
                self.d0
            )));
        }
        if self.s_max / self.ds > 5e7 {
            return Err(Error::InvalidConfig("s_max / ds exceeds 5e7 steps".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.s_max / self.ds).round() as usize
    }
}

/// Start position for a rotational profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationalStart {
    /// On the axis at height d0, meeting it perpendicularly (smooth cap).
    Cap,
    /// At (r, z) = (d0, 0) with tangent angle theta0.
    OffAxis,
}

type State = ([f64; 2], [f64; 2]);

#[inline]
fn axpy(a: f64, v: [f64; 2], w: [f64; 2]) -> [f64; 2] {
    [w[0] + a * v[0], w[1] + a * v[1]]
}

fn step<F: Fn(State) -> State>(rhs: &F, y: State, h: f64, order: IntegratorOrder) -> State {
    let (x, t) = y;
    let next = match order {
        IntegratorOrder::Two => {
            // explicit midpoint
            let (dx1, dt1) = rhs(y);
            let mid = (axpy(0.5 * h, dx1, x), axpy(0.5 * h, dt1, t));
            let (dx2, dt2) = rhs(mid);
            (axpy(h, dx2, x), axpy(h, dt2, t))
        }
        IntegratorOrder::Four => {
            let (dx1, dt1) = rhs(y);
            let y2 = (axpy(0.5 * h, dx1, x), axpy(0.5 * h, dt1, t));
            let (dx2, dt2) = rhs(y2);
            let y3 = (axpy(0.5 * h, dx2, x), axpy(0.5 * h, dt2, t));
            let (dx3, dt3) = rhs(y3);
            let y4 = (axpy(h, dx3, x), axpy(h, dt3, t));
            let (dx4, dt4) = rhs(y4);
            let c = h / 6.0;
            (
                [
                    x[0] + c * (dx1[0] + 2.0 * dx2[0] + 2.0 * dx3[0] + dx4[0]),
                    x[1] + c * (dx1[1] + 2.0 * dx2[1] + 2.0 * dx3[1] + dx4[1]),
                ],
                [
                    t[0] + c * (dt1[0] + 2.0 * dt2[0] + 2.0 * dt3[0] + dt4[0]),
                    t[1] + c * (dt1[1] + 2.0 * dt2[1] + 2.0 * dt3[1] + dt4[1]),
                ],
            )
        }
    };
    // keep the tangent on the unit circle
    let (x, t) = next;
    let sp = t[0].hypot(t[1]);
    (x, [t[0] / sp, t[1] / sp])
}

fn integrate<F: Fn(State) -> State>(
    rhs: &F,
    start: State,
    steps: usize,
    ds: f64,
    order: IntegratorOrder,
) -> Result<Vec<State>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(start);
    let mut y = start;
    for i in 0..steps {
        y = step(rhs, y, ds, order);
        let p = y.0;
        if !p[0].is_finite() || !p[1].is_finite() || p[0].hypot(p[1]) > BLOWUP_BOUND {
            return Err(Error::BlowUp {
                s: (i + 1) as f64 * ds,
                bound: BLOWUP_BOUND,
            });
        }
        out.push(y);
    }
    Ok(out)
}

fn curve_rhs(y: State) -> State {
    let (x, t) = y;
    let n = rot90(t);
    let k = 0.5 * dot(x, n);
    (t, [k * n[0], k * n[1]])
}

/// Pointwise curvature of the curve equation, k = 1/2 <x, N>.
fn curve_k(x: [f64; 2], t: [f64; 2]) -> f64 {
    0.5 * dot(x, rot90(t))
}

/// Merge a backward and a forward branch shot from the same point into one
/// curve parametrized over [-s_max, s_max], with pointwise curvature `k_of`.
fn merge_branches(
    backward: &[State],
    forward: &[State],
    ds: f64,
    s_max: f64,
    k_of: impl Fn([f64; 2], [f64; 2]) -> f64,
) -> Result<ProfileCurve> {
    let m = backward.len() - 1;
    debug_assert_eq!(forward.len(), m + 1);
    let total = 2 * m + 1;
    let mut x = Vec::with_capacity(total);
    let mut t = Vec::with_capacity(total);
    let mut k = Vec::with_capacity(total);
    for i in 0..total {
        let (xi, ti) = if i < m {
            let (xb, tb) = backward[m - i];
            (xb, [-tb[0], -tb[1]])
        } else {
            forward[i - m]
        };
        x.push(xi);
        t.push(ti);
        k.push(k_of(xi, ti));
    }
    ProfileCurve::from_samples(-s_max, ds, x, t, k)
}

/// Shoot a planar expander curve from distance d0 and tangent angle theta0,
/// integrating both directions. The returned curve has passed the residual
/// oracle at `tol_residual`.
pub fn shoot_expander_curve(config: &ShootingConfig) -> Result<ProfileCurve> {
    config.validate()?;
    let steps = config.steps();
    let x0 = [config.d0, 0.0];
    let t0 = [config.theta0.cos(), config.theta0.sin()];
    let forward = integrate(
        &curve_rhs,
        (x0, t0),
        steps,
        config.ds,
        config.integrator_order,
    )?;
    let backward = integrate(
        &curve_rhs,
        (x0, [-t0[0], -t0[1]]),
        steps,
        config.ds,
        config.integrator_order,
    )?;
    let curve = merge_branches(&backward, &forward, config.ds, config.s_max, curve_k)?;
    let residual = residual_samples_fd(&curve, SurfaceKind::CurveCylinder, 2)?;
    let max = crate::geometry::max_abs_residual(&residual);
    if max > config.tol_residual {
        return Err(Error::ResidualExceeded {
            max,
            tol: config.tol_residual,
        });
    }
    Ok(curve)
}

fn rotational_rhs(n: usize) -> impl Fn(State) -> State {
    let nf = n as f64;
    move |y: State| {
        let (x, t) = y;
        let (r, z) = (x[0], x[1]);
        let (tr, tz) = (t[0], t[1]);
        let normal_coeff = 0.5 * (z * tr - r * tz);
        let k = if r.abs() < 1e-14 {
            normal_coeff / nf
        } else {
            normal_coeff - (nf - 1.0) * tz / r
        };
        let nvec = rot90(t);
        (t, [k * nvec[0], k * nvec[1]])
    }
}

fn rotational_k(n: usize) -> impl Fn([f64; 2], [f64; 2]) -> f64 {
    let nf = n as f64;
    move |x: [f64; 2], t: [f64; 2]| {
        let coeff = 0.5 * (x[1] * t[0] - x[0] * t[1]);
        if x[0].abs() < 1e-14 {
            coeff / nf
        } else {
            coeff - (nf - 1.0) * t[1] / x[0]
        }
    }
}

/// Shoot a rotationally symmetric expander profile. Cap starts integrate one
/// arm from the axis; off-axis starts integrate both directions. The surface
/// is orientation-normalized so H >= 0 where it has a strict sign.
pub fn shoot_rotational_expander(
    config: &ShootingConfig,
    n: usize,
    start: RotationalStart,
    id: impl Into<String>,
) -> Result<(ExpanderSurface, Option<bool>)> {
    config.validate()?;
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "rotational surface needs n >= 2, got {n}"
        )));
    }
    let steps = config.steps();
    let rhs = rotational_rhs(n);
    let profile = match start {
        RotationalStart::Cap => {
            if config.theta0.abs() > 1e-12 {
                return Err(Error::AxisSingularity(format!(
                    "cap start requires a radial tangent (theta0 = 0), got {}",
                    config.theta0
                )));
            }
            let states = integrate(
                &rhs,
                ([0.0, config.d0], [1.0, 0.0]),
                steps,
                config.ds,
                config.integrator_order,
            )?;
            for (i, (x, _)) in states.iter().enumerate().skip(1) {
                if x[0] <= 0.0 {
                    return Err(Error::AxisSingularity(format!(
                        "r <= 0 at s = {:.4}",
                        i as f64 * config.ds
                    )));
                }
            }
            let k_of = rotational_k(n);
            let mut xs = Vec::with_capacity(states.len());
            let mut ts = Vec::with_capacity(states.len());
            let mut ks = Vec::with_capacity(states.len());
            for (x, t) in &states {
                xs.push(*x);
                ts.push(*t);
                ks.push(k_of(*x, *t));
            }
            ProfileCurve::from_samples(0.0, config.ds, xs, ts, ks)?
        }
        RotationalStart::OffAxis => {
            if config.d0 <= 0.0 {
                return Err(Error::InvalidConfig(
                    "off-axis rotational start needs d0 > 0".into(),
                ));
            }
            let x0 = [config.d0, 0.0];
            let t0 = [config.theta0.cos(), config.theta0.sin()];
            let forward = integrate(&rhs, (x0, t0), steps, config.ds, config.integrator_order)?;
            let backward = integrate(
                &rhs,
                (x0, [-t0[0], -t0[1]]),
                steps,
                config.ds,
                config.integrator_order,
            )?;
            for (i, (x, _)) in forward.iter().chain(backward.iter()).enumerate() {
                if x[0] <= 0.0 {
                    return Err(Error::AxisSingularity(format!(
                        "r <= 0 reached away from a cap (sample {i})"
                    )));
                }
            }
            merge_branches(
                &backward,
                &forward,
                config.ds,
                config.s_max,
                rotational_k(n),
            )?
        }
    };
    let residual = residual_samples_fd(&profile, SurfaceKind::Rotational, n)?;
    let max = crate::geometry::max_abs_residual(&residual);
    if max > config.tol_residual {
        return Err(Error::ResidualExceeded {
            max,
            tol: config.tol_residual,
        });
    }
    let surface = ExpanderSurface::rotational(profile, n, id)?;
    let (surface, mean_convex) = surface.normalize_mean_convex()?;
    Ok((surface, mean_convex))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::max_abs_residual;

    #[test]
    fn zero_curvature_start_stays_flat() {
        // k = 0 initial data is a fixed point of the ODE
        let config = ShootingConfig {
            d0: 0.0,
            theta0: 0.0,
            s_max: 2.0,
            ds: 1e-3,
            ..Default::default()
        };
        let curve = shoot_expander_curve(&config).unwrap();
        assert!(curve.curvatures().iter().all(|k| k.abs() < 1e-13));
        let r = residual_samples_fd(&curve, SurfaceKind::CurveCylinder, 2).unwrap();
        assert!(max_abs_residual(&r) < 1e-12);
    }

    #[test]
    fn perpendicular_start_curve_passes_oracle() {
        let config = ShootingConfig::default(); // d0 = 1, theta0 = pi/2
        let curve = shoot_expander_curve(&config).unwrap();
        // k(0) = -1/2 <x, N> sign aside: |k(0)| = d0 / 2
        let mid = curve.len() / 2;
        assert!((curve.curvatures()[mid].abs() - 0.5).abs() < 1e-12);
        let r = residual_samples_fd(&curve, SurfaceKind::CurveCylinder, 2).unwrap();
        assert!(max_abs_residual(&r) <= 1e-6);
    }

    #[test]
    fn curvature_never_vanishes_on_shot_curves() {
        // k' = -k <x, T> / 2, so the sign of k is constant along the curve
        for d0 in [0.25, 2.0] {
            let config = ShootingConfig {
                d0,
                s_max: 6.0,
                ..Default::default()
            };
            let curve = shoot_expander_curve(&config).unwrap();
            assert!(curve.curvatures().iter().all(|&k| k < 0.0));
        }
    }

    #[test]
    fn integrator_order_measured_by_richardson() {
        for (order, expected) in [(IntegratorOrder::Two, 2.0), (IntegratorOrder::Four, 4.0)] {
            let run = |ds: f64| {
                let config = ShootingConfig {
                    ds,
                    s_max: 5.0,
                    tol_residual: 1.0, // order study, not acceptance
                    integrator_order: order,
                    ..Default::default()
                };
                shoot_expander_curve(&config).unwrap()
            };
            let coarse = run(4e-3);
            let mid = run(2e-3);
            let fine = run(1e-3);
            let diff = |a: &ProfileCurve, b: &ProfileCurve, stride: usize| {
                let mut max: f64 = 0.0;
                for (i, xa) in a.positions().iter().enumerate() {
                    let xb = b.positions()[i * stride];
                    max = max.max((xa[0] - xb[0]).abs() + (xa[1] - xb[1]).abs());
                }
                max
            };
            let e1 = diff(&coarse, &mid, 2);
            let e2 = diff(&mid, &fine, 2);
            let p = (e1 / e2).log2();
            assert!(
                (p - expected).abs() <= 0.3,
                "measured order {p:.2}, expected {expected}"
            );
        }
    }

    #[test]
    fn rotational_cap_passes_oracle_and_is_mean_convex() {
        let config = ShootingConfig {
            d0: 1.0,
            theta0: 0.0,
            s_max: 6.0,
            ..Default::default()
        };
        let (surface, mean_convex) =
            shoot_rotational_expander(&config, 2, RotationalStart::Cap, "rot_test").unwrap();
        assert_eq!(mean_convex, Some(true));
        let data = surface.curvature().unwrap();
        assert!(data.h.iter().all(|&h| h >= 0.0));
    }

    #[test]
    fn degenerate_cap_reproduces_flat_disk() {
        let config = ShootingConfig {
            d0: 0.0,
            theta0: 0.0,
            s_max: 4.0,
            tol_residual: 1e-8,
            ..Default::default()
        };
        let (surface, mean_convex) =
            shoot_rotational_expander(&config, 2, RotationalStart::Cap, "rot_flat").unwrap();
        assert_eq!(mean_convex, Some(true));
        let data = surface.curvature().unwrap();
        assert!(data.h.iter().all(|&h| h.abs() < 1e-10));
    }

    #[test]
    fn off_axis_rotational_start_passes_oracle() {
        // two-sided profile through (d0, 0) with a vertical tangent: the
        // catenoid-like expander asymptotic to a double cone
        let config = ShootingConfig {
            d0: 1.0,
            s_max: 4.0,
            ..Default::default()
        };
        let (surface, _) =
            shoot_rotational_expander(&config, 2, RotationalStart::OffAxis, "rot_offaxis")
                .unwrap();
        let profile = surface.profile().unwrap();
        assert!(profile.positions().iter().all(|p| p[0] > 0.0));
        // symmetric under z -> -z
        let mid = profile.len() / 2;
        for off in [100usize, 1000] {
            let a = profile.positions()[mid - off];
            let b = profile.positions()[mid + off];
            assert!((a[0] - b[0]).abs() < 1e-9 && (a[1] + b[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = ShootingConfig {
            ds: -1.0,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        let short = ShootingConfig {
            s_max: 0.05,
            ..Default::default()
        };
        assert!(matches!(short.validate(), Err(Error::InvalidConfig(_))));
    }
}
