//! Exact spectrum of the drifted Laplacian on flat space.
//!
//! On R^n the weighted eigenvalues are n/2 + (k_1 + ... + k_n)/2 over
//! nonnegative integer multi-indices, with eigenfunctions
//! prod_i H_{k_i}(x_i / 2) e^{-|x|^2/4}. The polynomial convention is pinned
//! by H_k(t/2) solving u'' - (t/2) u' = -(k/2) u, so the k = 1 eigenfunction
//! is linear.

/// Exact eigenvalue n/2 + |k|/2 for the multi-index `k` on R^n.
pub fn hermite_eigenvalue(n: usize, k: &[usize]) -> f64 {
    debug_assert_eq!(k.len(), n);
    let total: usize = k.iter().sum();
    0.5 * (n + total) as f64
}

/// Hermite polynomial H_k by the three-term recurrence
/// H_{k+1}(y) = 2 y H_k(y) - 2 k H_{k-1}(y).
pub fn hermite_polynomial(k: usize, y: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 2.0 * y;
    for j in 1..k {
        let next = 2.0 * y * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// 1-d eigenfunction H_k(t/2) e^{-t^2/4} sampled at `points`.
pub fn hermite_eigenfunction_1d(k: usize, points: &[f64]) -> Vec<f64> {
    points
        .iter()
        .map(|&t| hermite_polynomial(k, t / 2.0) * (-t * t / 4.0).exp())
        .collect()
}

/// Product eigenfunction on R^n sampled at `points` (each point a coordinate
/// vector of length n = k.len()).
pub fn hermite_eigenfunction(k: &[usize], points: &[Vec<f64>]) -> Vec<f64> {
    points
        .iter()
        .map(|p| {
            debug_assert_eq!(p.len(), k.len());
            let mut v = 1.0;
            let mut norm2 = 0.0;
            for (ki, xi) in k.iter().zip(p) {
                v *= hermite_polynomial(*ki, xi / 2.0);
                norm2 += xi * xi;
            }
            v * (-norm2 / 4.0).exp()
        })
        .collect()
}

/// All multi-indices of length `n` with |k| <= max_total, in lexicographic
/// order of (|k|, digits). Used by the CLI table.
pub fn multi_indices(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    for total in 0..=max_total {
        emit(n, total, 0, &mut cur, &mut out);
    }
    return out;

    fn emit(
        n: usize,
        remaining: usize,
        pos: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == n - 1 {
            cur[pos] = remaining;
            out.push(cur.clone());
            return;
        }
        for v in (0..=remaining).rev() {
            cur[pos] = v;
            emit(n, remaining - v, pos + 1, cur, out);
        }
    }
}
