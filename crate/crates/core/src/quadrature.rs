//! Gauss-Laguerre quadrature in "plain" form.
//!
//! A rule built for decay rate `beta` approximates
//!
//! ```text
//! int_0^inf f(x) dx  ~  sum_j W_j f(x_j),   x_j = t_j / beta,   W_j = w_j exp(t_j) / beta,
//! ```
//!
//! where `(t_j, w_j)` is the standard rule for the weight `exp(-t)`. It is
//! exact whenever `f(x) exp(beta x)` is a polynomial of degree `< 2M`.
//! Nodes come from the eigenvalues of the Jacobi matrix, refined by Newton
//! steps on the rescaled three-term recurrence; weights are evaluated in
//! log space so that `W_j` stays finite for rules with a thousand nodes.
//!
//! Integrands carrying `1/x` weights are sampled at the nodes directly; Gauss
//! nodes never include the origin.

use crate::error::{invalid, Error, Result};
use crate::linalg::tridiagonal_eigenvalues;

const RESCALE: f64 = 3.273390607896142e150;
const LN_RESCALE: f64 = 500.0 * std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    beta: f64,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(x_j, W_j)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `sum_j W_j f_j` for samples aligned with the nodes.
    pub fn integrate(&self, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: samples.len() });
        }
        Ok(self.weights.iter().zip(samples).map(|(w, f)| w * f).sum())
    }

    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points().map(|(x, w)| w * f(x)).sum()
    }
}

/// `L_n^alpha(t)` as `(mantissa, log_scale)`, value `= mantissa * exp(log_scale)`.
fn laguerre_scaled(alpha: f64, n: usize, t: f64) -> (f64, f64) {
    let mut prev = 1.0_f64;
    let mut cur = 1.0 + alpha - t;
    let mut log_scale = 0.0;
    if n == 0 {
        return (prev, log_scale);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + alpha + 1.0 - t) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += LN_RESCALE;
        }
    }
    (cur, log_scale)
}

/// Builds the `m`-node rule scaled for decay rate `beta`.
pub fn build_rule(m: usize, beta: f64) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(invalid("quadrature needs at least one node"));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid(format!("beta must be finite and > 0, got {beta}")));
    }
    let diag: Vec<f64> = (0..m).map(|k| 2.0 * k as f64 + 1.0).collect();
    let off: Vec<f64> = (1..m).map(|k| k as f64).collect();
    let mut roots = tridiagonal_eigenvalues(&diag, &off)?;

    let mut weights = Vec::with_capacity(m);
    for t in roots.iter_mut() {
        // L_M' = -L_{M-1}^1; the alpha = 1 recurrence avoids the cancellation
        // that L_{M-1}^0 suffers near the smallest nodes
        for _ in 0..20 {
            let (pm, sm) = laguerre_scaled(0.0, m, *t);
            let (dm, sd) = laguerre_scaled(1.0, m - 1, *t);
            if dm == 0.0 {
                break;
            }
            let step = pm / dm * (sm - sd).exp();
            *t += step;
            if step.abs() <= 4.0 * f64::EPSILON * t.abs() {
                break;
            }
        }
        if !(*t > 0.0) {
            return Err(Error::NoConvergence { what: "Gauss-Laguerre node refinement", iterations: 20 });
        }
        // W = exp(t) / (t L_M'(t)^2) / beta
        let (dm, sd) = laguerre_scaled(1.0, m - 1, *t);
        let log_d = dm.abs().ln() + sd;
        let log_w = *t - t.ln() - 2.0 * log_d - beta.ln();
        weights.push(log_w.exp());
    }
    for pair in roots.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::NoConvergence { what: "Gauss-Laguerre node separation", iterations: 20 });
        }
    }
    let nodes = roots.into_iter().map(|t| t / beta).collect();
    Ok(QuadratureRule { nodes, weights, beta })
}
