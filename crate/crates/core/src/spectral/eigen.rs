//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the lowest
//! eigenvalues, inverse iteration for eigenvectors, and a dense cyclic Jacobi
//! solver kept as the small-instance brute-force oracle.

use crate::error::{Error, Result};

const PIVOT_GUARD: f64 = 1e-300;
pub const MAX_BISECT_ITER: usize = 200;

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) strictly
/// below `lambda`, via the count of negative pivots in the LDL^T recurrence.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0usize;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < PIVOT_GUARD {
            if q >= 0.0 {
                PIVOT_GUARD
            } else {
                -PIVOT_GUARD
            }
        } else {
            q
        };
        q = (diag[i] - lambda) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin enclosure of the whole spectrum.
pub fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo - 1.0, hi + 1.0)
}

/// The `m` lowest eigenvalues by bisection with Sturm counting, ascending.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], m: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if m == 0 || m > n {
        return Err(Error::InvalidConfig(format!(
            "requested {m} eigenvalues of a {n}x{n} matrix"
        )));
    }
    let (lo, hi) = gershgorin_bounds(diag, off);
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let mut a = lo;
        let mut b = hi;
        let mut converged = false;
        for _ in 0..MAX_BISECT_ITER {
            let mid = 0.5 * (a + b);
            if b - a < 4.0 * f64::EPSILON * scale {
                converged = true;
                break;
            }
            if sturm_count(diag, off, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        if !converged && b - a >= 1e-9 * scale {
            return Err(Error::NotConverged(format!(
                "bisection bracket for eigenvalue {k} stalled at width {:.3e}",
                b - a
            )));
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

/// Solve (T - shift I) x = b for tridiagonal T by LU with partial pivoting.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut dd: Vec<f64> = diag.iter().map(|d| d - shift).collect();
    let mut cc: Vec<f64> = if n > 1 { off.to_vec() } else { Vec::new() };
    cc.push(0.0);
    let mut ff = vec![0.0; n];
    let mut x = b.to_vec();
    for i in 0..n.saturating_sub(1) {
        let mut sub = off[i];
        if sub.abs() > dd[i].abs() {
            // swap rows i and i+1
            std::mem::swap(&mut dd[i], &mut sub);
            let (head, tail) = cc.split_at_mut(i + 1);
            std::mem::swap(&mut head[i], &mut dd[i + 1]);
            std::mem::swap(&mut ff[i], &mut tail[0]);
            x.swap(i, i + 1);
        }
        let pivot = if dd[i].abs() < PIVOT_GUARD {
            PIVOT_GUARD.copysign(dd[i])
        } else {
            dd[i]
        };
        let mult = sub / pivot;
        dd[i + 1] -= mult * cc[i];
        cc[i + 1] -= mult * ff[i];
        let xi = x[i];
        x[i + 1] -= mult * xi;
    }
    // back substitution
    for i in (0..n).rev() {
        let mut v = x[i];
        if i + 1 < n {
            v -= cc[i] * x[i + 1];
        }
        if i + 2 < n {
            v -= ff[i] * x[i + 2];
        }
        let pivot = if dd[i].abs() < PIVOT_GUARD {
            PIVOT_GUARD.copysign(dd[i])
        } else {
            dd[i]
        };
        x[i] = v / pivot;
    }
    x
}

/// Eigenvector for an already-converged eigenvalue by inverse iteration,
/// orthogonalized against previously found vectors.
pub fn eigenvector(diag: &[f64], off: &[f64], lambda: f64, prior: &[Vec<f64>]) -> Vec<f64> {
    let n = diag.len();
    // deterministic start vector with no accidental symmetry
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((1.9 * i as f64) + 0.7).sin())
        .collect();
    normalize(&mut v);
    for _ in 0..4 {
        let mut y = solve_shifted(diag, off, lambda, &v);
        for p in prior {
            let proj: f64 = y.iter().zip(p).map(|(a, b)| a * b).sum();
            for (yi, pi) in y.iter_mut().zip(p) {
                *yi -= proj * pi;
            }
        }
        normalize(&mut y);
        v = y;
    }
    // fix the overall sign: nonnegative mass
    if v.iter().sum::<f64>() < 0.0 {
        for vi in &mut v {
            *vi = -*vi;
        }
    }
    v
}

fn normalize(v: &mut [f64]) {
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Dense symmetric eigenvalues by cyclic Jacobi rotations; the brute-force
/// oracle for small instances. `a` is row-major n x n and is consumed.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-15 * frob.max(1.0);
    for _sweep in 0..50 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= tol * 1e-2 / (n as f64) {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p * n + i];
                    let aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
            }
        }
    }
    let mut evs: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    evs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    evs
}

/// Expand a symmetric tridiagonal into a dense row-major matrix.
pub fn dense_from_tridiagonal(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = diag[i];
        if i + 1 < n {
            a[i * n + i + 1] = off[i];
            a[(i + 1) * n + i] = off[i];
        }
    }
    a
}
