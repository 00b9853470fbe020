//! Small dense and tridiagonal symmetric eigenvalue kernels.
//!
//! Everything here is sized for spectral matrices of a few hundred rows, so
//! the routines favour clarity over blocking.

use crate::error::{Error, Result};

/// Dense square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest |A_ij - A_ji| relative to the largest entry.
    pub fn symmetry_residual(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst / scale
    }

    /// Replaces the matrix by its symmetric part.
    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = avg;
                self[(j, i)] = avg;
            }
        }
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// Number of nonzero super-diagonals, treating |a| <= tol as zero.
    pub fn bandwidth(&self, tol: f64) -> usize {
        let mut bw = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self[(i, j)].abs() > tol {
                    bw = bw.max(j - i);
                }
            }
        }
        bw
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// All eigenvalues of the symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `off` (`off[i]` couples rows `i` and `i + 1`), ascending.
///
/// Implicit QL with Wilkinson shifts, eigenvalues only.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::LengthMismatch { expected: n - 1, actual: off.len() });
    }
    const MAX_SWEEPS: usize = 60;

    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence { what: "tridiagonal QL", iterations: MAX_SWEEPS });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0_f64, 1.0_f64, 0.0_f64);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns `(diag, off)` of a similar tridiagonal matrix.
pub fn householder_tridiagonal(a: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.size();
    let mut m = a.clone();
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let alpha_sq: f64 = (k + 1..n).map(|i| m[(i, k)] * m[(i, k)]).sum();
        if alpha_sq == 0.0 {
            continue;
        }
        let alpha = -alpha_sq.sqrt().copysign(m[(k + 1, k)]);
        v.iter_mut().for_each(|x| *x = 0.0);
        v[k + 1] = m[(k + 1, k)] - alpha;
        for i in k + 2..n {
            v[i] = m[(i, k)];
        }
        let vnorm_sq: f64 = v[k + 1..].iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // A <- H A H with H = I - 2 v v^T / (v^T v)
        for i in k..n {
            p[i] = (k + 1..n).map(|j| m[(i, j)] * v[j]).sum::<f64>() * 2.0 / vnorm_sq;
        }
        let kappa: f64 = (k + 1..n).map(|i| v[i] * p[i]).sum::<f64>() / vnorm_sq;
        for i in k..n {
            p[i] -= kappa * v[i];
        }
        for i in k..n {
            for j in k..n {
                m[(i, j)] -= v[i] * p[j] + p[i] * v[j];
            }
        }
    }
    let diag = (0..n).map(|i| m[(i, i)]).collect();
    let off = (0..n.saturating_sub(1)).map(|i| m[(i + 1, i)]).collect();
    (diag, off)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0_f64;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { coupling / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `index`-th smallest eigenvalue of a symmetric tridiagonal matrix by
/// Sturm-sequence bisection, converged to relative width `tol`.
pub fn tridiagonal_eigenvalue_bisect(diag: &[f64], off: &[f64], index: usize, tol: f64) -> f64 {
    let n = diag.len();
    assert!(index < n);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let radius = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= tol * lo.abs().max(hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Lower Cholesky factor of an SPD matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: DenseMatrix,
    band: usize,
}

impl Cholesky {
    /// Factors `a`; entries beyond `a.bandwidth(0)` are known zero and skipped.
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        let n = a.size();
        let band = a.bandwidth(0.0);
        let mut l = DenseMatrix::zeros(n);
        for j in 0..n {
            let start = j.saturating_sub(band);
            let mut s = a[(j, j)];
            for k in start..j {
                s -= l[(j, k)] * l[(j, k)];
            }
            if !(s > 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            let ljj = s.sqrt();
            l[(j, j)] = ljj;
            for i in j + 1..(j + band + 1).min(n) {
                let mut s = a[(i, j)];
                for k in i.saturating_sub(band).max(start)..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { l, band })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.l.size();
        for i in 0..n {
            let mut s = b[i];
            for k in i.saturating_sub(self.band)..i {
                s -= self.l[(i, k)] * b[k];
            }
            b[i] = s / self.l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..(i + self.band + 1).min(n) {
                s -= self.l[(k, i)] * b[k];
            }
            b[i] = s / self.l[(i, i)];
        }
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn start_vector(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.7548776662).fract()).collect();
    normalize(&mut v);
    v
}

/// Extremal eigenvalues `(min, max)` of an SPD matrix by inverse iteration
/// (Cholesky) and power iteration, each stopped when the eigen-residual
/// `|A v - lambda v|` falls below `tol * lambda`.
pub fn extremal_eigenvalues_iterative(a: &DenseMatrix, tol: f64, max_iter: usize) -> Result<(f64, f64)> {
    let n = a.size();
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let mut av = vec![0.0; n];

    let mut v = start_vector(n);
    let mut lambda_max = f64::NAN;
    let mut converged = false;
    for _ in 0..max_iter {
        a.mul_vec(&v, &mut av);
        lambda_max = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        let residual = av.iter().zip(&v).map(|(y, x)| (y - lambda_max * x).powi(2)).sum::<f64>().sqrt();
        if residual <= tol * lambda_max.abs() {
            converged = true;
            break;
        }
        v.copy_from_slice(&av);
        normalize(&mut v);
    }
    if !converged {
        return Err(Error::NoConvergence { what: "power iteration", iterations: max_iter });
    }

    let chol = Cholesky::factor(a)?;
    let mut v = start_vector(n);
    let mut lambda_min = f64::NAN;
    converged = false;
    for _ in 0..max_iter {
        a.mul_vec(&v, &mut av);
        lambda_min = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        let residual = av.iter().zip(&v).map(|(y, x)| (y - lambda_min * x).powi(2)).sum::<f64>().sqrt();
        if residual <= tol * lambda_min.abs() {
            converged = true;
            break;
        }
        chol.solve_in_place(&mut v);
        normalize(&mut v);
    }
    if !converged {
        return Err(Error::NoConvergence { what: "inverse iteration", iterations: max_iter });
    }
    Ok((lambda_min, lambda_max))
}
