//! Bases that diagonalize the Robin and Dirichlet bilinear forms
//!
//! ```text
//! A_{gamma,mu}(u, v) = mu u(0) v(0) + (u', v') + gamma (u, v)
//! A_gamma(u, v)      = (u', v') + gamma (u, v)
//! ```
//!
//! Both are tridiagonal on `{l_k^{-1,beta}}`, so a two-term recurrence
//! `R_k = l_k - d_{k-1} R_{k-1}` (Robin, `k >= 0`) or
//! `S_k = l_k - d_{k-1} S_{k-1}` (Dirichlet, `k >= 1`) yields an orthogonal
//! family. Members are never evaluated through that recurrence; coefficients
//! are converted to the `l^{-1,beta}` basis first.

use crate::error::{invalid, Error, Result};
use crate::laguerre::{eval_fun_all, LaguerreIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Robin,
    Dirichlet,
}

impl BasisKind {
    /// First index of the basis: 0 for Robin, 1 for Dirichlet.
    pub fn first(self) -> usize {
        match self {
            BasisKind::Robin => 0,
            BasisKind::Dirichlet => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Robin => "robin",
            BasisKind::Dirichlet => "dirichlet",
        }
    }
}

impl std::fmt::Display for BasisKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "robin" => Ok(BasisKind::Robin),
            "dirichlet" => Ok(BasisKind::Dirichlet),
            other => Err(invalid(format!("unknown problem kind `{other}`"))),
        }
    }
}

/// A diagonalizing basis of degree `n`, indexed `first..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalBasis {
    kind: BasisKind,
    gamma: f64,
    mu: f64,
    beta: f64,
    n: usize,
    /// `d[k - first] = d_k` for `k = first..n`
    d: Vec<f64>,
    /// `diag[k - first]` is `rho_k` or `varrho_k`
    diag: Vec<f64>,
    /// `R_k(0)`; empty for Dirichlet, whose members all vanish at 0
    r_at_zero: Vec<f64>,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid(format!("beta must be finite and > 0, got {beta}")));
    }
    Ok(())
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(invalid(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

/// `(d, diag)` from the first pivot, running the common recurrence up to `n`.
fn run_recurrence(first: usize, pivot: f64, gamma: f64, beta: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let off = beta / 4.0 - gamma / beta;
    let on = beta / 2.0 + 2.0 * gamma / beta;
    let mut diag = Vec::with_capacity(n + 1 - first);
    let mut d = Vec::with_capacity(n - first);
    if !(pivot > 0.0) {
        return Err(Error::Coercivity { index: first, value: pivot });
    }
    diag.push(pivot);
    for k in first + 1..=n {
        let prev = diag[diag.len() - 1];
        let dk = off / prev;
        let rho = -dk * dk * prev + on;
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Coercivity { index: k, value: rho });
        }
        d.push(dk);
        diag.push(rho);
    }
    Ok((d, diag))
}

/// Robin basis `{R_k}_{k=0..=n}` for `A_{gamma,mu}`.
pub fn build_robin_basis(gamma: f64, mu: f64, beta: f64, n: usize) -> Result<DiagonalBasis> {
    check_nonneg("gamma", gamma)?;
    check_nonneg("mu", mu)?;
    check_beta(beta)?;
    let rho0 = mu + beta / 4.0 + gamma / beta;
    let (d, diag) = run_recurrence(0, rho0, gamma, beta, n)?;
    let mut r_at_zero = Vec::with_capacity(n + 1);
    r_at_zero.push(1.0);
    for k in 1..=n {
        r_at_zero.push(-d[k - 1] * r_at_zero[k - 1]);
    }
    Ok(DiagonalBasis { kind: BasisKind::Robin, gamma, mu, beta, n, d, diag, r_at_zero })
}

/// Dirichlet basis `{S_k}_{k=1..=n}` for `A_gamma`.
pub fn build_dirichlet_basis(gamma: f64, beta: f64, n: usize) -> Result<DiagonalBasis> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(invalid(format!("gamma must be finite and > 0 for the Dirichlet problem, got {gamma}")));
    }
    check_beta(beta)?;
    if n < 1 {
        return Err(invalid("the Dirichlet basis needs N >= 1"));
    }
    let rho1 = (4.0 * gamma + beta * beta) / (2.0 * beta);
    let (d, diag) = run_recurrence(1, rho1, gamma, beta, n)?;
    Ok(DiagonalBasis { kind: BasisKind::Dirichlet, gamma, mu: 0.0, beta, n, d, diag, r_at_zero: Vec::new() })
}

impl DiagonalBasis {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn first(&self) -> usize {
        self.kind.first()
    }

    /// Number of members, `n + 1 - first`.
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn index(&self) -> LaguerreIndex {
        LaguerreIndex { alpha: -1.0, beta: self.beta }
    }

    /// `d_k` for `first <= k < n`.
    pub fn d(&self, k: usize) -> f64 {
        self.d[k - self.first()]
    }

    pub fn d_values(&self) -> &[f64] {
        &self.d
    }

    /// `rho_k` (Robin) or `varrho_k` (Dirichlet).
    pub fn diag(&self, k: usize) -> f64 {
        self.diag[k - self.first()]
    }

    pub fn diag_values(&self) -> &[f64] {
        &self.diag
    }

    /// `R_k(0)`; zero for every Dirichlet member.
    pub fn value_at_zero(&self, k: usize) -> f64 {
        match self.kind {
            BasisKind::Robin => self.r_at_zero[k],
            BasisKind::Dirichlet => 0.0,
        }
    }

    pub fn r_at_zero(&self) -> &[f64] {
        &self.r_at_zero
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: len });
        }
        Ok(())
    }

    /// Coefficients `v_0..=v_n` in `{l_k^{-1,beta}}` of `sum_k u_hat[k - first] B_k`.
    pub fn to_laguerre(&self, u_hat: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u_hat.len())?;
        let first = self.first();
        let mut v = vec![0.0; self.n + 1];
        v[self.n] = u_hat[self.n - first];
        for k in (first..self.n).rev() {
            v[k] = u_hat[k - first] - self.d(k) * v[k + 1];
        }
        Ok(v)
    }

    /// Maps `(g, l_k)` for `k = 0..=n` to `(g, B_k)` for `k = first..=n`.
    /// Works for any bilinear pairing, not only the L2 product.
    pub fn adjoint_from_laguerre(&self, products: &[f64]) -> Result<Vec<f64>> {
        if products.len() != self.n + 1 {
            return Err(Error::LengthMismatch { expected: self.n + 1, actual: products.len() });
        }
        let first = self.first();
        let mut b = Vec::with_capacity(self.len());
        b.push(products[first]);
        for k in first + 1..=self.n {
            let prev = b[b.len() - 1];
            b.push(products[k] - self.d(k - 1) * prev);
        }
        Ok(b)
    }

    /// `l^{-1,beta}` coefficients of the single member `B_k`.
    pub fn member_coefficients(&self, k: usize) -> Result<Vec<f64>> {
        if k < self.first() || k > self.n {
            return Err(invalid(format!("member index {k} outside {}..={}", self.first(), self.n)));
        }
        let mut unit = vec![0.0; self.len()];
        unit[k - self.first()] = 1.0;
        self.to_laguerre(&unit)
    }
}

/// Limit of the pivot sequence, `beta/4 + gamma/beta + sqrt(gamma)`.
pub fn pivot_limit(gamma: f64, beta: f64) -> f64 {
    beta / 4.0 + gamma / beta + gamma.sqrt()
}

/// Degree of a lifting function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftDegree {
    Finite(usize),
    Infinite,
}

/// Unit-endpoint function A_gamma-orthogonal to the homogeneous trial space.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftFunction {
    gamma: f64,
    beta: f64,
    degree: LiftDegree,
    z: f64,
    coeffs: Vec<f64>,
}

/// Lift coefficients in `{l_m^{-1,beta}}`. For a finite degree `n`
/// `s_m = (z^m - z^{2n+2-m}) / (1 - z^{2n+2})`, `m = 0..=n`; for the infinite
/// lift `s_m = z^m`, truncated once `|z|^m < tol`.
pub fn build_lift(gamma: f64, beta: f64, degree: LiftDegree, tol: f64) -> Result<LiftFunction> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(invalid(format!("gamma must be finite and > 0 for a lift, got {gamma}")));
    }
    check_beta(beta)?;
    let root = 2.0 * gamma.sqrt();
    let z = (root - beta) / (root + beta);
    let coeffs = match degree {
        LiftDegree::Finite(n) => {
            let top = 2 * n + 2;
            let denom = 1.0 - pow(z, top);
            (0..=n).map(|m| (pow(z, m) - pow(z, top - m)) / denom).collect()
        }
        LiftDegree::Infinite => {
            if !(tol > 0.0) || tol >= 1.0 {
                return Err(invalid(format!("lift truncation tolerance must lie in (0, 1), got {tol}")));
            }
            let mut out = vec![1.0];
            let mut term = 1.0;
            loop {
                term *= z;
                if term.abs() < tol {
                    break;
                }
                out.push(term);
            }
            out
        }
    };
    Ok(LiftFunction { gamma, beta, degree, z, coeffs })
}

fn pow(z: f64, m: usize) -> f64 {
    if m == 0 {
        1.0
    } else if m > i32::MAX as usize {
        0.0
    } else {
        z.powi(m as i32)
    }
}

impl LiftFunction {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn degree(&self) -> LiftDegree {
        self.degree
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let l = eval_fun_all(LaguerreIndex { alpha: -1.0, beta: self.beta }, self.coeffs.len() - 1, x)?;
        Ok(self.coeffs.iter().zip(&l).map(|(c, v)| c * v).sum())
    }
}
