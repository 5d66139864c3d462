//! One-dimensional Sturm-Liouville reductions of the drifted Laplacian
//! L = Delta + 1/2 <x, grad .> and the stability operator L + |A|^2 - 1/2.
//!
//! The reduction carries the log of the reduced weighted measure,
//! psi = log(rho), with rho = e^{|x|^2/4} on flat and cylinder factors and
//! rho = r^{n-1} e^{|x|^2/4} on rotational meridians. The ground-state
//! (unitary) transform turns -(L + q) into -d^2/ds^2 + V with
//! V = psi'^2/4 + psi''/2 - q, which for the flat line is exactly
//! s^2/16 + 1/4. The discrete operator is assembled in flux form on a
//! half-step lattice: it agrees with central differences of -d^2/ds^2 + V to
//! O(h^2), makes the transformed and weighted Rayleigh quotients agree to
//! rounding, and handles the rotational axis cap through rho(0) = 0.
//!
//! Separated flat factors are not discretized: each contributes exactly 1/2
//! to every reported eigenvalue (the flat ground state), recorded in
//! `flat_shift`.

use crate::error::{Error, Result};
use crate::geometry::{dot, ExpanderSurface, ProfileCurve, SurfaceKind};

/// Which potential rides on the reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    /// q = 0: the drifted Laplacian itself.
    DriftOnly,
    /// q = |A|^2 - 1/2: the stability operator.
    Stability,
}

impl PotentialKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PotentialKind::DriftOnly => "drift",
            PotentialKind::Stability => "stability",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// Dirichlet walls at +-domain_radius (two-sided reductions).
    DirichletTruncated,
    /// Natural Neumann condition at the rotation-axis cap (measure vanishes),
    /// Dirichlet at the outer truncation.
    NeumannCap,
}

impl BoundaryCondition {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryCondition::DirichletTruncated => "dirichlet_truncated",
            BoundaryCondition::NeumannCap => "neumann_cap",
        }
    }
}

/// Resolution of the assembled matrix; `Coarse` doubles the node spacing on
/// the same lattice, giving the second resolution for Richardson estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridLevel {
    Fine,
    Coarse,
}

/// Discretization request for a reduction.
#[derive(Debug, Clone, Copy)]
pub struct ReductionConfig {
    pub grid_size: usize,
    pub domain_radius: f64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        Self {
            grid_size: 4001,
            domain_radius: 12.0,
        }
    }
}

/// A transformed 1-d operator -d^2/ds^2 + V together with the data that
/// produced it (weight, reduced measure, raw potential, boundary condition).
#[derive(Debug, Clone)]
pub struct WeightedOperator1D {
    bc: BoundaryCondition,
    domain_radius: f64,
    grid_size: usize,
    h: f64,
    flat_shift: f64,
    potential_kind: PotentialKind,
    surface_id: String,
    // lattice arrays at half-node spacing (nodes and faces interleaved)
    lattice_pos: Vec<f64>,
    lattice_psi: Vec<f64>,
    lattice_q: Vec<f64>,
    // node-level views
    grid: Vec<f64>,
    weight_log: Vec<f64>,
    measure_log: Vec<f64>,
    potential: Vec<f64>,
    transformed_potential: Vec<f64>,
}

impl WeightedOperator1D {
    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    /// Number of interior nodes of the fine grid (matrix dimension).
    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn node_spacing(&self) -> f64 {
        self.h
    }

    pub fn flat_shift(&self) -> f64 {
        self.flat_shift
    }

    pub fn potential_kind(&self) -> PotentialKind {
        self.potential_kind
    }

    pub fn surface_id(&self) -> &str {
        &self.surface_id
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn weight_log(&self) -> &[f64] {
        &self.weight_log
    }

    pub fn measure_log(&self) -> &[f64] {
        &self.measure_log
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// V = psi'^2/4 + psi''/2 - q at the fine nodes.
    pub fn transformed_potential(&self) -> &[f64] {
        &self.transformed_potential
    }

    /// psi at the face between fine nodes i and i+1.
    pub fn face_measure_log(&self, i: usize, _j: usize) -> f64 {
        match self.bc {
            BoundaryCondition::DirichletTruncated => self.lattice_psi[2 * i + 3],
            BoundaryCondition::NeumannCap => self.lattice_psi[2 * i + 2],
        }
    }

    /// psi at the face before the first node (a Dirichlet wall midpoint, or
    /// the cap where the measure vanishes).
    pub fn first_face_measure_log(&self) -> f64 {
        match self.bc {
            BoundaryCondition::DirichletTruncated => self.lattice_psi[1],
            BoundaryCondition::NeumannCap => self.lattice_psi[0],
        }
    }

    /// psi at the face after the last node.
    pub fn last_face_measure_log(&self) -> f64 {
        let len = self.lattice_psi.len();
        match self.bc {
            BoundaryCondition::DirichletTruncated => self.lattice_psi[len - 2],
            BoundaryCondition::NeumannCap => self.lattice_psi[len - 1],
        }
    }

    fn node_lattice_indices(&self, level: GridLevel) -> Vec<usize> {
        let n = self.grid_size;
        match (self.bc, level) {
            (BoundaryCondition::DirichletTruncated, GridLevel::Fine) => {
                (1..=n).map(|i| 2 * i).collect()
            }
            (BoundaryCondition::DirichletTruncated, GridLevel::Coarse) => {
                (1..=(n - 1) / 2).map(|i| 4 * i).collect()
            }
            (BoundaryCondition::NeumannCap, GridLevel::Fine) => (0..n).map(|i| 2 * i + 1).collect(),
            (BoundaryCondition::NeumannCap, GridLevel::Coarse) => {
                (0..n / 2).map(|i| 4 * i + 2).collect()
            }
        }
    }

    pub fn node_positions(&self, level: GridLevel) -> Vec<f64> {
        self.node_lattice_indices(level)
            .iter()
            .map(|&j| self.lattice_pos[j])
            .collect()
    }

    /// Assemble the symmetric tridiagonal for -(L + q) at the given level.
    pub fn assemble(&self, level: GridLevel) -> (Vec<f64>, Vec<f64>) {
        let f = match level {
            GridLevel::Fine => 1usize,
            GridLevel::Coarse => 2usize,
        };
        let step = f as f64 * self.h;
        let inv_h2 = 1.0 / (step * step);
        let nodes = self.node_lattice_indices(level);
        let mut diag = Vec::with_capacity(nodes.len());
        let mut off = Vec::with_capacity(nodes.len().saturating_sub(1));
        for (i, &nj) in nodes.iter().enumerate() {
            let psi_n = self.lattice_psi[nj];
            let a_minus = (self.lattice_psi[nj - f] - psi_n).exp();
            let a_plus = (self.lattice_psi[nj + f] - psi_n).exp();
            diag.push((a_minus + a_plus) * inv_h2 - self.lattice_q[nj]);
            if i + 1 < nodes.len() {
                let nj2 = nodes[i + 1];
                let exponent = self.lattice_psi[nj + f] - 0.5 * (psi_n + self.lattice_psi[nj2]);
                off.push(-exponent.exp() * inv_h2);
            }
        }
        (diag, off)
    }
}

/// Per-kind scalar fields sampled along the reduction parameter.
struct ReductionFields {
    psi: Box<dyn Fn(f64) -> f64>,
    weight: Box<dyn Fn(f64) -> f64>,
    q: Box<dyn Fn(f64) -> f64>,
    v_drift: Box<dyn Fn(f64) -> f64>,
}

/// Component-wise views of the profile fields, shared by the interpolation
/// closures below.
#[derive(Clone)]
struct ProfileComponents {
    profile: ProfileCurve,
    x0: std::sync::Arc<Vec<f64>>,
    x1: std::sync::Arc<Vec<f64>>,
    t0: std::sync::Arc<Vec<f64>>,
    t1: std::sync::Arc<Vec<f64>>,
    k: std::sync::Arc<Vec<f64>>,
    a2: std::sync::Arc<Vec<f64>>,
}

impl ProfileComponents {
    fn new(profile: &ProfileCurve, a_norm2: Vec<f64>) -> Self {
        Self {
            profile: profile.clone(),
            x0: std::sync::Arc::new(profile.positions().iter().map(|p| p[0]).collect()),
            x1: std::sync::Arc::new(profile.positions().iter().map(|p| p[1]).collect()),
            t0: std::sync::Arc::new(profile.tangents().iter().map(|t| t[0]).collect()),
            t1: std::sync::Arc::new(profile.tangents().iter().map(|t| t[1]).collect()),
            k: std::sync::Arc::new(profile.curvatures().to_vec()),
            a2: std::sync::Arc::new(a_norm2),
        }
    }

    fn position(&self, s: f64) -> [f64; 2] {
        [
            self.profile.interp(&self.x0, s).expect("in range"),
            self.profile.interp(&self.x1, s).expect("in range"),
        ]
    }

    fn unit_tangent(&self, s: f64) -> [f64; 2] {
        let t = [
            self.profile.interp(&self.t0, s).expect("in range"),
            self.profile.interp(&self.t1, s).expect("in range"),
        ];
        let sp = t[0].hypot(t[1]);
        [t[0] / sp, t[1] / sp]
    }

    fn curvature(&self, s: f64) -> f64 {
        self.profile.interp(&self.k, s).expect("in range")
    }

    fn a_norm2(&self, s: f64) -> f64 {
        self.profile.interp(&self.a2, s).expect("in range")
    }
}

/// Build the transformed 1-d operator whose spectrum bottom equals the bottom
/// of -(L + q) on the reduced factor.
pub fn ground_state_transform(
    surface: &ExpanderSurface,
    potential_kind: PotentialKind,
    config: &ReductionConfig,
) -> Result<WeightedOperator1D> {
    let radius = config.domain_radius;
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "domain radius {radius} must be positive"
        )));
    }
    if config.grid_size < 16 {
        return Err(Error::InvalidConfig(format!(
            "grid size {} too small",
            config.grid_size
        )));
    }
    let n = surface.dim();
    let nf = n as f64;

    let (bc, flat_shift, fields): (BoundaryCondition, f64, ReductionFields) = match surface.kind() {
        SurfaceKind::Hyperplane => {
            let q_val = match potential_kind {
                PotentialKind::DriftOnly => 0.0,
                PotentialKind::Stability => -0.5,
            };
            (
                BoundaryCondition::DirichletTruncated,
                (nf - 1.0) * 0.5,
                ReductionFields {
                    psi: Box::new(|s| s * s / 4.0),
                    weight: Box::new(|s| s * s / 4.0),
                    q: Box::new(move |_| q_val),
                    v_drift: Box::new(|s| s * s / 16.0 + 0.25),
                },
            )
        }
        SurfaceKind::CurveCylinder => {
            let profile = surface.profile().ok_or(Error::ReductionUnavailable)?;
            if profile.s_start() > -radius - 1e-9 || profile.s_end() < radius - 1e-9 {
                return Err(Error::UnderResolved(format!(
                    "profile covers [{:.2}, {:.2}], reduction needs [-{radius}, {radius}]",
                    profile.s_start(),
                    profile.s_end()
                )));
            }
            let data = surface.curvature()?;
            let comp = ProfileComponents::new(profile, data.a_norm2);
            let q_shift = match potential_kind {
                PotentialKind::DriftOnly => None,
                PotentialKind::Stability => Some(-0.5),
            };
            let (c_psi, c_w, c_q, c_v) = (comp.clone(), comp.clone(), comp.clone(), comp);
            (
                BoundaryCondition::DirichletTruncated,
                (nf - 1.0) * 0.5,
                ReductionFields {
                    psi: Box::new(move |s| {
                        let x = c_psi.position(s);
                        dot(x, x) / 4.0
                    }),
                    weight: Box::new(move |s| {
                        let x = c_w.position(s);
                        dot(x, x) / 4.0
                    }),
                    q: Box::new(move |s| match q_shift {
                        None => 0.0,
                        Some(shift) => c_q.a_norm2(s) + shift,
                    }),
                    v_drift: Box::new(move |s| {
                        let x = c_v.position(s);
                        let t = c_v.unit_tangent(s);
                        let k = c_v.curvature(s);
                        let wp = dot(x, t) / 2.0;
                        // <x, N> with N = rot90(T)
                        let xn = x[1] * t[0] - x[0] * t[1];
                        let wpp = (1.0 + k * xn) / 2.0;
                        0.25 * wp * wp + 0.5 * wpp
                    }),
                },
            )
        }
        SurfaceKind::Rotational => {
            let profile = surface.profile().ok_or(Error::ReductionUnavailable)?;
            let cap = profile.is_cap_start();
            if cap {
                if profile.s_end() < radius - 1e-9 {
                    return Err(Error::UnderResolved(format!(
                        "profile reaches s = {:.2}, reduction needs {radius}",
                        profile.s_end()
                    )));
                }
            } else if profile.s_start() > -radius - 1e-9 || profile.s_end() < radius - 1e-9 {
                return Err(Error::UnderResolved(
                    "off-axis rotational profile does not cover the requested radius".into(),
                ));
            }
            let data = surface.curvature()?;
            let comp = ProfileComponents::new(profile, data.a_norm2);
            let q_shift = match potential_kind {
                PotentialKind::DriftOnly => None,
                PotentialKind::Stability => Some(-0.5),
            };
            let bc = if cap {
                BoundaryCondition::NeumannCap
            } else {
                BoundaryCondition::DirichletTruncated
            };
            let (c_psi, c_w, c_q, c_v) = (comp.clone(), comp.clone(), comp.clone(), comp);
            (
                bc,
                0.0,
                ReductionFields {
                    psi: Box::new(move |s| {
                        let x = c_psi.position(s);
                        let r = x[0].max(0.0);
                        (nf - 1.0) * r.ln() + dot(x, x) / 4.0
                    }),
                    weight: Box::new(move |s| {
                        let x = c_w.position(s);
                        dot(x, x) / 4.0
                    }),
                    q: Box::new(move |s| match q_shift {
                        None => 0.0,
                        Some(shift) => c_q.a_norm2(s) + shift,
                    }),
                    v_drift: Box::new(move |s| {
                        let x = c_v.position(s);
                        let t = c_v.unit_tangent(s);
                        let k = c_v.curvature(s);
                        let r = x[0];
                        let wp = dot(x, t) / 2.0;
                        let xn = x[1] * t[0] - x[0] * t[1];
                        let wpp = (1.0 + k * xn) / 2.0;
                        let psi_p = (nf - 1.0) * t[0] / r + wp;
                        let psi_pp = (nf - 1.0) * (-k * t[1] * r - t[0] * t[0]) / (r * r) + wpp;
                        0.25 * psi_p * psi_p + 0.5 * psi_pp
                    }),
                },
            )
        }
    };

    // normalize grid parity so the coarse level nests in the lattice
    let mut grid_size = config.grid_size;
    match bc {
        BoundaryCondition::DirichletTruncated => {
            if grid_size.is_multiple_of(2) {
                grid_size += 1;
            }
        }
        BoundaryCondition::NeumannCap => {
            if !grid_size.is_multiple_of(2) {
                grid_size += 1;
            }
        }
    }

    let (h, lattice_len, start) = match bc {
        BoundaryCondition::DirichletTruncated => {
            let h = 2.0 * radius / (grid_size as f64 + 1.0);
            (h, 2 * grid_size + 3, -radius)
        }
        BoundaryCondition::NeumannCap => {
            let h = radius / grid_size as f64;
            (h, 2 * grid_size + 1, 0.0)
        }
    };

    let mut lattice_pos = Vec::with_capacity(lattice_len);
    let mut lattice_psi = Vec::with_capacity(lattice_len);
    let mut lattice_q = Vec::with_capacity(lattice_len);
    for j in 0..lattice_len {
        let p = start + j as f64 * h / 2.0;
        lattice_pos.push(p);
        lattice_psi.push((fields.psi)(p));
        lattice_q.push((fields.q)(p));
    }

    let mut op = WeightedOperator1D {
        bc,
        domain_radius: radius,
        grid_size,
        h,
        flat_shift,
        potential_kind,
        surface_id: surface.id().to_string(),
        lattice_pos,
        lattice_psi,
        lattice_q,
        grid: Vec::new(),
        weight_log: Vec::new(),
        measure_log: Vec::new(),
        potential: Vec::new(),
        transformed_potential: Vec::new(),
    };
    let nodes = op.node_lattice_indices(GridLevel::Fine);
    op.grid = nodes.iter().map(|&j| op.lattice_pos[j]).collect();
    op.weight_log = op.grid.iter().map(|&s| (fields.weight)(s)).collect();
    op.measure_log = nodes.iter().map(|&j| op.lattice_psi[j]).collect();
    op.potential = nodes.iter().map(|&j| op.lattice_q[j]).collect();
    op.transformed_potential = op
        .grid
        .iter()
        .zip(&op.potential)
        .map(|(&s, &q)| (fields.v_drift)(s) - q)
        .collect();
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_line_transform_is_exact() {
        let surface = ExpanderSurface::hyperplane(1).unwrap();
        let cfg = ReductionConfig {
            grid_size: 201,
            domain_radius: 10.0,
        };
        let op = ground_state_transform(&surface, PotentialKind::DriftOnly, &cfg).unwrap();
        assert_eq!(op.bc(), BoundaryCondition::DirichletTruncated);
        assert_eq!(op.flat_shift(), 0.0);
        for (s, v) in op.grid().iter().zip(op.transformed_potential()) {
            assert!((v - (s * s / 16.0 + 0.25)).abs() < 1e-14);
        }
        for (s, w) in op.grid().iter().zip(op.weight_log()) {
            assert!((w - s * s / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stability_potential_shifts_by_one_half_on_flat_space() {
        let surface = ExpanderSurface::hyperplane(2).unwrap();
        let cfg = ReductionConfig {
            grid_size: 101,
            domain_radius: 8.0,
        };
        let drift = ground_state_transform(&surface, PotentialKind::DriftOnly, &cfg).unwrap();
        let stab = ground_state_transform(&surface, PotentialKind::Stability, &cfg).unwrap();
        assert_eq!(drift.flat_shift(), 0.5);
        for i in 0..drift.grid_size() {
            assert!(
                (stab.transformed_potential()[i] - drift.transformed_potential()[i] - 0.5).abs()
                    < 1e-14
            );
        }
    }

    #[test]
    fn coarse_nodes_nest_in_the_lattice() {
        let surface = ExpanderSurface::hyperplane(1).unwrap();
        let cfg = ReductionConfig {
            grid_size: 101,
            domain_radius: 6.0,
        };
        let op = ground_state_transform(&surface, PotentialKind::DriftOnly, &cfg).unwrap();
        let fine = op.node_positions(GridLevel::Fine);
        let coarse = op.node_positions(GridLevel::Coarse);
        assert_eq!(coarse.len(), (fine.len() - 1) / 2);
        // every coarse node is a lattice point two fine steps apart
        for (i, c) in coarse.iter().enumerate() {
            let expect = fine[0] + op.node_spacing() * (2 * i + 1) as f64;
            assert!((c - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn assembled_matrix_matches_plain_scheme_to_second_order() {
        // flux-form entries agree with the central-difference form of
        // -d^2/ds^2 + V up to O(h^2) row sums on smooth data
        let surface = ExpanderSurface::hyperplane(1).unwrap();
        let cfg = ReductionConfig {
            grid_size: 801,
            domain_radius: 8.0,
        };
        let op = ground_state_transform(&surface, PotentialKind::DriftOnly, &cfg).unwrap();
        let (diag, off) = op.assemble(GridLevel::Fine);
        let h = op.node_spacing();
        let v: Vec<f64> = op.grid().iter().map(|&s| (-s * s / 8.0).exp()).collect();
        let n = op.grid_size();
        let mut max_dev: f64 = 0.0;
        for i in 1..n - 1 {
            let flux = diag[i] * v[i] + off[i - 1] * v[i - 1] + off[i] * v[i + 1];
            let plain = -(v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h)
                + op.transformed_potential()[i] * v[i];
            max_dev = max_dev.max((flux - plain).abs());
        }
        assert!(
            max_dev < 5.0 * h * h,
            "deviation {max_dev:.3e} vs h^2 = {:.3e}",
            h * h
        );
    }
}
