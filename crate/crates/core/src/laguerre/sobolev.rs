//! Sobolev inner products `a_n^{alpha,beta}` and the orthogonal projection
//! onto `span{l_k^{alpha,beta}}_{k <= N}`.
//!
//! ```text
//! a_n(u, v) = sum_{nu=0}^{n} C(n, nu) (beta/2)^{2n - 2nu} (D^nu u, D^nu v)_{x^{alpha+n}}
//! ```

use super::{eval_fun_derivatives, gamma_table, DerivativeScratch, LaguerreIndex};
use crate::error::{invalid, Error, Result};
use crate::linalg::DenseMatrix;
use crate::quadrature::QuadratureRule;

/// A function that can report its derivatives pointwise.
pub trait Differentiable {
    /// Highest derivative order available.
    fn max_order(&self) -> usize;

    /// `D^order f(x)`.
    fn derivative(&self, order: usize, x: f64) -> f64;

    fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }
}

/// Adapts a closure `(order, x) -> D^order f(x)`.
#[derive(Clone)]
pub struct FnDerivatives<F> {
    max_order: usize,
    f: F,
}

impl<F: Fn(usize, f64) -> f64> FnDerivatives<F> {
    pub fn new(max_order: usize, f: F) -> Self {
        Self { max_order, f }
    }
}

impl<F: Fn(usize, f64) -> f64> Differentiable for FnDerivatives<F> {
    fn max_order(&self) -> usize {
        self.max_order
    }

    fn derivative(&self, order: usize, x: f64) -> f64 {
        (self.f)(order, x)
    }
}

/// A single basis member `l_k^{alpha,beta}`.
#[derive(Debug, Clone, Copy)]
pub struct LaguerreFunction {
    pub index: LaguerreIndex,
    pub k: usize,
}

impl Differentiable for LaguerreFunction {
    fn max_order(&self) -> usize {
        usize::MAX
    }

    fn derivative(&self, order: usize, x: f64) -> f64 {
        eval_fun_derivatives(self.index, self.k, x, order).map(|d| d[order][self.k]).unwrap_or(f64::NAN)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `C(n, nu) (beta/2)^{2(n - nu)}` for `nu = 0..=n`.
fn form_coefficients(n: usize, beta: f64) -> Vec<f64> {
    (0..=n).map(|nu| binomial(n, nu) * (0.5 * beta).powi(2 * (n - nu) as i32)).collect()
}

fn check_weight(index: LaguerreIndex, n: usize) -> Result<f64> {
    let exponent = index.alpha + n as f64;
    if !(exponent > -1.0) {
        return Err(invalid(format!("alpha + n = {exponent} must exceed -1 for the weight to be integrable")));
    }
    Ok(exponent)
}

fn check_order(f: &dyn Differentiable, n: usize) -> Result<()> {
    if f.max_order() < n {
        return Err(Error::InsufficientDerivatives { required: n, available: f.max_order() });
    }
    Ok(())
}

/// `a_n^{alpha,beta}(u, v)` evaluated on the quadrature nodes.
pub fn sobolev_inner_product(
    n: usize,
    index: LaguerreIndex,
    u: &dyn Differentiable,
    v: &dyn Differentiable,
    rule: &QuadratureRule,
) -> Result<f64> {
    let exponent = check_weight(index, n)?;
    check_order(u, n)?;
    check_order(v, n)?;
    let coef = form_coefficients(n, index.beta);
    let total = rule
        .points()
        .map(|(x, w)| {
            let inner: f64 = coef.iter().enumerate().map(|(nu, c)| c * u.derivative(nu, x) * v.derivative(nu, x)).sum();
            w * x.powf(exponent) * inner
        })
        .sum();
    Ok(total)
}

/// Gram matrix `a_n(l_j, l_k)` for `j, k = 0..=k_max`.
pub fn sobolev_gram(n: usize, index: LaguerreIndex, k_max: usize, rule: &QuadratureRule) -> Result<DenseMatrix> {
    let exponent = check_weight(index, n)?;
    let coef = form_coefficients(n, index.beta);
    let size = k_max + 1;
    let mut gram = DenseMatrix::zeros(size);
    let mut scratch = DerivativeScratch::default();
    for (x, w) in rule.points() {
        scratch.fill(index, k_max, x, n);
        let weight = w * x.powf(exponent);
        for (nu, c) in coef.iter().enumerate() {
            let d = scratch.get(nu);
            let scale = weight * c;
            for j in 0..size {
                let dj = scale * d[j];
                if dj == 0.0 {
                    continue;
                }
                for k in j..size {
                    gram[(j, k)] += dj * d[k];
                }
            }
        }
    }
    for j in 0..size {
        for k in 0..j {
            gram[(j, k)] = gram[(k, j)];
        }
    }
    Ok(gram)
}

/// Coefficients of a truncated expansion in `l_k^{alpha,beta}`, together with
/// the Sobolev order `n` used to compute them.
#[derive(Debug, Clone, PartialEq)]
pub struct SobolevCoefficients {
    pub index: LaguerreIndex,
    pub order: usize,
    pub coeffs: Vec<f64>,
}

impl SobolevCoefficients {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `D^order` of the expansion at `x`.
    pub fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        let table = eval_fun_derivatives(self.index, self.degree(), x, order)?;
        Ok(table[order].iter().zip(&self.coeffs).map(|(l, c)| l * c).sum())
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.derivative(0, x)
    }

    /// `||.||_{s,alpha,beta}` of the expansion restricted to `k >= start`,
    /// from the closed-form norms `beta^{s-alpha-1} gamma_{k,s}^alpha`.
    ///
    /// For `alpha = -m` a tail with `start >= m` is accepted at any `s`, since
    /// those members vanish to order `m` at the origin.
    pub fn tail_norm(&self, s: usize, start: usize) -> Result<f64> {
        let vanishing = self.index.negative_integer().is_some_and(|m| start >= m);
        if !vanishing {
            check_weight(self.index, s)?;
        }
        let table = gamma_table(self.index.alpha, s, self.degree())?;
        let scale = self.index.beta.powf(s as f64 - self.index.alpha - 1.0);
        let sum: f64 = (start..self.coeffs.len()).map(|k| table.get(k) * self.coeffs[k].powi(2)).sum();
        Ok((scale * sum).sqrt())
    }
}

/// The projection `pi_N^{alpha,beta} u` with respect to `a_n^{alpha,beta}`:
///
/// ```text
/// u_k = a_n(u, l_k) / (beta^{n-alpha-1} gamma_{k,n}^alpha),   k = 0..=N
/// ```
///
/// Numerators use the quadrature rule; denominators are closed form. For
/// `alpha = -n` the projection interpolates `u` and its first `n - 1`
/// derivatives at the origin.
pub fn project(
    n: usize,
    index: LaguerreIndex,
    degree: usize,
    u: &dyn Differentiable,
    rule: &QuadratureRule,
) -> Result<SobolevCoefficients> {
    if n == 0 && index.alpha <= -1.0 {
        return Err(invalid("order 0 projection needs alpha > -1"));
    }
    let exponent = check_weight(index, n)?;
    if degree < n {
        return Err(invalid(format!("degree {degree} must be at least the Sobolev order {n}")));
    }
    check_order(u, n)?;
    let coef = form_coefficients(n, index.beta);
    let mut numer = vec![0.0; degree + 1];
    let mut scratch = DerivativeScratch::default();
    for (x, w) in rule.points() {
        scratch.fill(index, degree, x, n);
        let weight = w * x.powf(exponent);
        for (nu, c) in coef.iter().enumerate() {
            let du = weight * c * u.derivative(nu, x);
            for (acc, l) in numer.iter_mut().zip(scratch.get(nu)) {
                *acc += du * l;
            }
        }
    }
    let norms = gamma_table(index.alpha, n, degree)?;
    let scale = index.beta.powf(n as f64 - index.alpha - 1.0);
    let coeffs = numer.iter().enumerate().map(|(k, a)| a / (scale * norms.get(k))).collect();
    Ok(SobolevCoefficients { index, order: n, coeffs })
}
