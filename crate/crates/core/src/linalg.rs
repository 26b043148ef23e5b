//! Small dense helpers shared by the solvers.

pub type Matrix = Vec<Vec<f64>>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `A v`
pub fn mat_vec(a: &Matrix, v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| dot(row, v)).collect()
}

/// `Aᵀ u`
pub fn mat_t_vec(a: &Matrix, u: &[f64]) -> Vec<f64> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = vec![0.0; cols];
    for (ui, row) in u.iter().zip(a) {
        if *ui == 0.0 {
            continue;
        }
        for (o, aij) in out.iter_mut().zip(row) {
            *o += ui * aij;
        }
    }
    out
}

/// `uᵀ A v`
pub fn bilinear(u: &[f64], a: &Matrix, v: &[f64]) -> f64 {
    dot(u, &mat_vec(a, v))
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Lowest index attaining the maximum.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Indices within `tol` of the maximum.
pub fn suppmax(v: &[f64], tol: f64) -> Vec<usize> {
    let m = max(v);
    (0..v.len()).filter(|&i| v[i] >= m - tol).collect()
}

/// Indices within `tol` of the minimum.
pub fn suppmin(v: &[f64], tol: f64) -> Vec<usize> {
    let m = min(v);
    (0..v.len()).filter(|&i| v[i] <= m + tol).collect()
}

/// `(1 - t) a + t b`
pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when `A` is numerically singular.
pub fn solve_dense(mut a: Matrix, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-13 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_and_supports() {
        let v = [0.5, 1.0, 1.0 - 1e-12, 0.2];
        assert_eq!(argmax(&v), 1);
        assert_eq!(suppmax(&v, 1e-9), vec![1, 2]);
        assert_eq!(suppmin(&v, 1e-9), vec![3]);
        assert_eq!(argmax(&[2.0, 2.0]), 0);
    }

    #[test]
    fn dense_solve() {
        let x = solve_dense(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
        assert!(solve_dense(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_none());
    }
}
