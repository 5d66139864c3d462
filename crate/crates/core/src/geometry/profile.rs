//! Arclength-sampled planar profile curves.
//!
//! A [`ProfileCurve`] carries position, unit tangent, unit normal and signed
//! curvature samples on a uniform arclength grid. The normal convention is
//! fixed once: N is T rotated by +90 degrees, and k = <T', N>. Everything
//! downstream (cylinders, surfaces of revolution, spectral reductions) reads
//! these samples.

use crate::error::{Error, Result};

/// Minimum number of samples below which curvature evaluation is refused.
pub const MIN_SAMPLES: usize = 16;

#[inline]
pub fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Rotate a plane vector by +90 degrees (counterclockwise).
#[inline]
pub fn rot90(v: [f64; 2]) -> [f64; 2] {
    [-v[1], v[0]]
}

#[inline]
pub fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

#[inline]
fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Planar curve (or radial profile) sampled at uniform arclength steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    s: Vec<f64>,
    x: Vec<[f64; 2]>,
    t: Vec<[f64; 2]>,
    n: Vec<[f64; 2]>,
    k: Vec<f64>,
    ds: f64,
}

impl ProfileCurve {
    /// Build a curve from samples, deriving N = rot90(T) and validating the
    /// frame invariants (|T| = 1, uniform step).
    pub fn from_samples(
        s0: f64,
        ds: f64,
        x: Vec<[f64; 2]>,
        t: Vec<[f64; 2]>,
        k: Vec<f64>,
    ) -> Result<Self> {
        let m = x.len();
        if m < MIN_SAMPLES {
            return Err(Error::UnderResolved(format!(
                "{m} samples, need at least {MIN_SAMPLES}"
            )));
        }
        if t.len() != m || k.len() != m {
            return Err(Error::InvalidConfig(format!(
                "field lengths disagree: x {m}, T {}, k {}",
                t.len(),
                k.len()
            )));
        }
        if !ds.is_finite() || ds <= 0.0 {
            return Err(Error::InvalidConfig(format!("nonpositive step ds = {ds}")));
        }
        for (i, ti) in t.iter().enumerate() {
            let err = (norm(*ti) - 1.0).abs();
            if err > 1e-10 {
                return Err(Error::InvalidConfig(format!(
                    "tangent at sample {i} is not unit: | |T| - 1 | = {err:.3e}"
                )));
            }
        }
        let s: Vec<f64> = (0..m).map(|i| s0 + i as f64 * ds).collect();
        let n: Vec<[f64; 2]> = t.iter().map(|&ti| rot90(ti)).collect();
        Ok(Self { s, x, t, n, k, ds })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.x
    }

    pub fn tangents(&self) -> &[[f64; 2]] {
        &self.t
    }

    pub fn normals(&self) -> &[[f64; 2]] {
        &self.n
    }

    pub fn curvatures(&self) -> &[f64] {
        &self.k
    }

    pub fn s_start(&self) -> f64 {
        self.s[0]
    }

    pub fn s_end(&self) -> f64 {
        *self.s.last().unwrap()
    }

    /// Restriction of the ambient weight exponent to the curve: |x(s)|^2 / 4.
    pub fn weight_log(&self, i: usize) -> f64 {
        let p = self.x[i];
        dot(p, p) / 4.0
    }

    /// True when the first sample sits on the rotation axis (r = 0) with a
    /// radial tangent, i.e. a smooth cap for a surface of revolution.
    pub fn is_cap_start(&self) -> bool {
        self.x[0][0].abs() < 1e-9 && self.t[0][1].abs() < 1e-6
    }

    /// Position sample with even reflection through a cap at index 0,
    /// (r, z)(-s) = (-r, z)(s). Only meaningful for cap-start profiles.
    fn position_reflected(&self, i: isize) -> [f64; 2] {
        if i >= 0 {
            self.x[i as usize]
        } else {
            let p = self.x[(-i) as usize];
            [-p[0], p[1]]
        }
    }

    /// First and second position derivatives at sample `i` by second-order
    /// differences (one-sided at the ends, or reflected through a cap).
    pub fn position_derivatives_fd(&self, i: usize, reflect_cap: bool) -> ([f64; 2], [f64; 2]) {
        let m = self.len();
        let h = self.ds;
        let at = |j: isize| -> [f64; 2] {
            if reflect_cap {
                self.position_reflected(j)
            } else {
                self.x[j as usize]
            }
        };
        let i = i as isize;
        let last = (m - 1) as isize;
        let (d1, d2);
        if (i > 0 || reflect_cap) && i < last {
            let (a, b, c) = (at(i - 1), at(i), at(i + 1));
            d1 = [(c[0] - a[0]) / (2.0 * h), (c[1] - a[1]) / (2.0 * h)];
            d2 = [
                (c[0] - 2.0 * b[0] + a[0]) / (h * h),
                (c[1] - 2.0 * b[1] + a[1]) / (h * h),
            ];
        } else if i == 0 {
            let (a, b, c, d) = (at(0), at(1), at(2), at(3));
            d1 = [
                (-3.0 * a[0] + 4.0 * b[0] - c[0]) / (2.0 * h),
                (-3.0 * a[1] + 4.0 * b[1] - c[1]) / (2.0 * h),
            ];
            d2 = [
                (2.0 * a[0] - 5.0 * b[0] + 4.0 * c[0] - d[0]) / (h * h),
                (2.0 * a[1] - 5.0 * b[1] + 4.0 * c[1] - d[1]) / (h * h),
            ];
        } else {
            let (a, b, c, d) = (at(last), at(last - 1), at(last - 2), at(last - 3));
            d1 = [
                (3.0 * a[0] - 4.0 * b[0] + c[0]) / (2.0 * h),
                (3.0 * a[1] - 4.0 * b[1] + c[1]) / (2.0 * h),
            ];
            d2 = [
                (2.0 * a[0] - 5.0 * b[0] + 4.0 * c[0] - d[0]) / (h * h),
                (2.0 * a[1] - 5.0 * b[1] + 4.0 * c[1] - d[1]) / (h * h),
            ];
        }
        (d1, d2)
    }

    /// Signed curvature recomputed from positions only,
    /// k = (x' x x'') / |x'|^3, consistent with the N = rot90(T) convention.
    pub fn curvature_fd(&self, i: usize, reflect_cap: bool) -> f64 {
        let (d1, d2) = self.position_derivatives_fd(i, reflect_cap);
        let speed = norm(d1);
        cross(d1, d2) / (speed * speed * speed)
    }

    /// Unit tangent recomputed from positions only.
    pub fn tangent_fd(&self, i: usize, reflect_cap: bool) -> [f64; 2] {
        let (d1, _) = self.position_derivatives_fd(i, reflect_cap);
        let sp = norm(d1);
        [d1[0] / sp, d1[1] / sp]
    }

    /// Linear interpolation of per-sample `values` at arclength `s`.
    /// `s` must lie within the sampled range.
    pub fn interp(&self, values: &[f64], s: f64) -> Result<f64> {
        debug_assert_eq!(values.len(), self.len());
        let rel = (s - self.s[0]) / self.ds;
        if rel < -1e-9 || rel > (self.len() - 1) as f64 + 1e-9 {
            return Err(Error::UnderResolved(format!(
                "arclength {s:.4} outside sampled range [{:.4}, {:.4}]",
                self.s_start(),
                self.s_end()
            )));
        }
        let i = (rel.floor().max(0.0) as usize).min(self.len() - 2);
        let frac = rel - i as f64;
        Ok(values[i] * (1.0 - frac) + values[i + 1] * frac)
    }

    /// Index of the sample closest to the origin in the ambient plane.
    pub fn nearest_origin_index(&self) -> usize {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.x.iter().enumerate() {
            let d = dot(*p, *p);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}
