//! Small dense linear algebra on `Vec<f64>` rows.
//!
//! Dimensions here are the rank of an abelianization, so everything is tiny
//! and written for determinism rather than speed.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_scaled(a: &[f64], k: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| k * x).collect()
}

/// Returns `None` for the zero vector.
pub fn normalize(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n == 0.0 || !n.is_finite() {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Angle between two unit vectors, accurate for nearly parallel inputs.
pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    let d = norm(&sub(a, b));
    let s = norm(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>());
    d.atan2(s) * 2.0
}

fn max_abs(rows: &[Vec<f64>]) -> f64 {
    rows.iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Row-reduces `rows` (each of length `n`) with partial pivoting. Returns the
/// reduced rows and the pivot column of each. Entries below `tol * scale`
/// are treated as zero, where `scale` is the largest input magnitude.
fn rref(rows: &[Vec<f64>], n: usize, tol: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let thresh = tol * max_abs(rows).max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m.len() {
            break;
        }
        let (best, val) = (r..m.len())
            .map(|i| (i, m[i][col].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= thresh {
            continue;
        }
        m.swap(r, best);
        let p = m[r][col];
        for x in m[r].iter_mut() {
            *x /= p;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            let f = row[col];
            if i != r && f != 0.0 {
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<f64>], n: usize, tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(rows, n, tol).1.len()
}

/// Orthonormal basis of `{x : row . x = 0 for every row}`.
pub fn kernel(rows: &[Vec<f64>], n: usize, tol: f64) -> Vec<Vec<f64>> {
    let (m, pivots) = if rows.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        rref(rows, n, tol)
    };
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0.0; n];
        x[free] = 1.0;
        for (row, &pc) in m.iter().zip(&pivots) {
            x[pc] = -row[free];
        }
        basis.push(x);
    }
    orthonormalize(&basis, tol)
}

/// Modified Gram-Schmidt; drops vectors that are dependent at tolerance `tol`.
pub fn orthonormalize(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let scale0 = norm(v);
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let k = dot(&w, q);
                w = add_scaled(&w, -k, q);
            }
        }
        let nw = norm(&w);
        if nw > tol * scale0.max(f64::MIN_POSITIVE) {
            out.push(scale(&w, 1.0 / nw));
        }
    }
    out
}

/// Orthogonal projection of `v` onto the span of an orthonormal `basis`.
pub fn project(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for q in basis {
        out = add_scaled(&out, dot(v, q), q);
    }
    out
}

/// Solves `a x = b` for symmetric positive definite `a`. `None` if the
/// factorization breaks down.
pub fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= 0.0 || !d.is_finite() {
                    return None;
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i][k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k][i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i][i];
    }
    Some(x)
}

/// Numerically stable `log(sum(exp(x)))`; `-inf` for an empty slice.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}
