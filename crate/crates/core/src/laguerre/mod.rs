//! Generalized Laguerre polynomials `L_k^alpha` and functions
//! `l_k^{alpha,beta}(x) = exp(-beta x / 2) L_k^alpha(beta x)` for any real
//! `alpha`, together with their Sobolev inner products and the orthogonal
//! projection built on them.

mod eval;
mod sobolev;
mod tables;

pub use eval::{
    eval_fun_all, eval_fun_derivative_all, eval_fun_derivatives, eval_poly_all, negative_index_relation_check,
};
pub(crate) use eval::{fun_values_into, DerivativeScratch};
pub use sobolev::{
    project, sobolev_gram, sobolev_inner_product, Differentiable, FnDerivatives, LaguerreFunction, SobolevCoefficients,
};
pub use tables::{base_gamma, gamma_table, lambda_table, EigenTable, NormTable};

use crate::error::{invalid, Result};

/// The `(alpha, beta)` pair selecting a Laguerre function family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreIndex {
    pub alpha: f64,
    pub beta: f64,
}

impl LaguerreIndex {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(invalid(format!("alpha must be finite, got {alpha}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(invalid(format!("beta must be finite and > 0, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    /// `Some(m)` when `alpha = -m` for a positive integer `m`.
    pub fn negative_integer(&self) -> Option<usize> {
        negative_integer(self.alpha)
    }
}

pub(crate) fn negative_integer(a: f64) -> Option<usize> {
    (a < 0.0 && a.fract() == 0.0).then(|| (-a) as usize)
}

/// Membership in the set of negative integers united with `(-1, inf)`.
pub fn is_admissible(a: f64) -> bool {
    a > -1.0 || negative_integer(a).is_some()
}

/// `chi_n(alpha)`: `-alpha` when `alpha + n` is a negative integer, else 0.
pub fn chi_n(alpha: f64, n: usize) -> usize {
    match negative_integer(alpha + n as f64) {
        Some(_) => (-alpha) as usize,
        None => 0,
    }
}

/// `chi(alpha) = chi_0(alpha)`.
pub fn chi(alpha: f64) -> usize {
    chi_n(alpha, 0)
}
