//! Recurrence-based evaluation of generalized Laguerre polynomials and
//! functions for arbitrary real `alpha`.

use super::LaguerreIndex;
use crate::error::{invalid, Result};

/// Rescale threshold for the running recurrence: `2^500`.
const RESCALE: f64 = 3.273390607896142e150;
const LN_RESCALE: f64 = 500.0 * std::f64::consts::LN_2;

/// `L_k^alpha(x)` for `k = 0..=n` by the three-term recurrence
///
/// ```text
/// L_0 = 1,  L_1 = alpha + 1 - x,
/// (k + 1) L_{k+1} = (2k + alpha + 1 - x) L_k - (k + alpha) L_{k-1}.
/// ```
pub fn eval_poly_all(alpha: f64, n: usize, x: f64) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(invalid(format!("evaluation point must be finite, got {x}")));
    }
    if !alpha.is_finite() {
        return Err(invalid(format!("alpha must be finite, got {alpha}")));
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return Ok(out);
    }
    out.push(alpha + 1.0 - x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + alpha + 1.0 - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    Ok(out)
}

/// Runs the polynomial recurrence at `t` with periodic rescaling and writes
/// `exp(log_factor) * L_k^alpha(t)` for `k = 0..=n` into `out`.
///
/// The running mantissas never overflow; the exponential factor is applied
/// in log space when it would otherwise underflow.
pub(crate) fn scaled_recurrence(alpha: f64, n: usize, t: f64, log_factor: f64, out: &mut Vec<f64>) {
    out.clear();
    let mut log_scale = log_factor;
    let emit = |p: f64, log_scale: f64| -> f64 {
        if log_scale > -600.0 && log_scale < 600.0 {
            p * log_scale.exp()
        } else if p == 0.0 {
            0.0
        } else {
            (p.abs().ln() + log_scale).exp().copysign(p)
        }
    };
    let mut prev = 1.0_f64;
    out.push(emit(prev, log_scale));
    if n == 0 {
        return;
    }
    let mut cur = alpha + 1.0 - t;
    out.push(emit(cur, log_scale));
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
        out.push(emit(cur, log_scale));
    }
}

/// `l_k^{alpha,beta}(x) = exp(-beta x / 2) L_k^alpha(beta x)` into `out`.
pub(crate) fn fun_values_into(index: LaguerreIndex, n: usize, x: f64, out: &mut Vec<f64>) {
    let t = index.beta * x;
    scaled_recurrence(index.alpha, n, t, -0.5 * t, out);
}

/// `l_k^{alpha,beta}(x)` for `k = 0..=n`.
///
/// The exponential is folded into the recurrence seed, so values stay
/// representable well past the point where `L_k^alpha(beta x)` alone would
/// overflow.
pub fn eval_fun_all(index: LaguerreIndex, n: usize, x: f64) -> Result<Vec<f64>> {
    check_point(x)?;
    let mut out = Vec::with_capacity(n + 1);
    fun_values_into(index, n, x, &mut out);
    Ok(out)
}

/// `d/dx l_k^{alpha,beta}(x)` for `k = 0..=n`, from
/// `-beta l_{k-1}^{alpha+1,beta} - (beta/2) l_k^{alpha,beta}`.
pub fn eval_fun_derivative_all(index: LaguerreIndex, n: usize, x: f64) -> Result<Vec<f64>> {
    let mut table = eval_fun_derivatives(index, n, x, 1)?;
    Ok(table.swap_remove(1))
}

/// Derivative table `d[nu][k] = d^nu/dx^nu l_k^{alpha,beta}(x)` for
/// `nu = 0..=order`, `k = 0..=n`.
///
/// Higher derivatives repeat the first-order identity with shifted `alpha`:
/// `D^nu l_k^a = -beta D^{nu-1} l_{k-1}^{a+1} - (beta/2) D^{nu-1} l_k^a`.
pub fn eval_fun_derivatives(index: LaguerreIndex, n: usize, x: f64, order: usize) -> Result<Vec<Vec<f64>>> {
    check_point(x)?;
    let mut scratch = DerivativeScratch::default();
    scratch.fill(index, n, x, order);
    Ok(scratch.take(order))
}

/// Reusable buffers for derivative tables at many points.
#[derive(Debug, Default)]
pub(crate) struct DerivativeScratch {
    /// `levels[a][nu]` holds `D^nu l^{alpha+a}` for `a + nu <= order`.
    levels: Vec<Vec<Vec<f64>>>,
}

impl DerivativeScratch {
    pub(crate) fn fill(&mut self, index: LaguerreIndex, n: usize, x: f64, order: usize) {
        let beta = index.beta;
        self.levels.resize_with(order + 1, Vec::new);
        for a in 0..=order {
            let level = &mut self.levels[a];
            level.resize_with(order + 1 - a, Vec::new);
            let shifted = LaguerreIndex { alpha: index.alpha + a as f64, beta };
            fun_values_into(shifted, n, x, &mut level[0]);
        }
        for nu in 1..=order {
            for a in 0..=order - nu {
                let (lower, upper) = self.levels.split_at_mut(a + 1);
                let mut col = std::mem::take(&mut lower[a][nu]);
                let this_prev = &lower[a][nu - 1];
                let next_prev = &upper[0][nu - 1];
                col.clear();
                col.extend((0..=n).map(|k| {
                    let shifted = if k == 0 { 0.0 } else { next_prev[k - 1] };
                    -beta * shifted - 0.5 * beta * this_prev[k]
                }));
                lower[a][nu] = col;
            }
        }
    }

    pub(crate) fn get(&self, nu: usize) -> &[f64] {
        &self.levels[0][nu]
    }

    fn take(mut self, order: usize) -> Vec<Vec<f64>> {
        let mut base = std::mem::take(&mut self.levels[0]);
        base.truncate(order + 1);
        base
    }
}

fn check_point(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid(format!("evaluation point must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// Residual `|lhs - rhs|` of the negative-index relation
///
/// ```text
/// l_k^{alpha,beta}(x) = (-beta x)^{-alpha} (k + alpha)! / k! l_{k+alpha}^{-alpha,beta}(x)
/// ```
///
/// for a negative integer `alpha` and `k >= -alpha`. The two sides are
/// evaluated by separate recurrences.
pub fn negative_index_relation_check(index: LaguerreIndex, k: usize, x: f64) -> Result<f64> {
    let m = index
        .negative_integer()
        .ok_or_else(|| invalid(format!("alpha must be a negative integer, got {}", index.alpha)))?;
    if k < m {
        return Err(invalid(format!("k = {k} is below the first admissible index {m}")));
    }
    let lhs = eval_fun_all(index, k, x)?[k];
    let mirrored = LaguerreIndex { alpha: m as f64, beta: index.beta };
    let inner = eval_fun_all(mirrored, k - m, x)?[k - m];
    // (k - m)! / k! = 1 / (k (k-1) ... (k-m+1))
    let falling: f64 = (k - m + 1..=k).map(|j| j as f64).product();
    let rhs = (-index.beta * x).powi(m as i32) / falling * inner;
    Ok((lhs - rhs).abs())
}
