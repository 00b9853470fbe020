//! Eigenvalue and normalization tables of the high-order Sturm-Liouville
//! problems satisfied by `l_k^{alpha,beta}`.

use super::{chi, chi_n, is_admissible, negative_integer};
use crate::error::{invalid, Result};

/// `lambda_{k,n}^alpha` for `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenTable {
    pub alpha: f64,
    pub order: usize,
    values: Vec<f64>,
}

impl EigenTable {
    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `gamma_{k,n}^alpha` for `k = 0..=K`. Entries below [`NormTable::first_valid`]
/// are outside the orthogonality range and stored as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct NormTable {
    pub alpha: f64,
    pub order: usize,
    first_valid: usize,
    values: Vec<f64>,
}

impl NormTable {
    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `chi_n(alpha)`: the first index with a meaningful entry.
    pub fn first_valid(&self) -> usize {
        self.first_valid
    }
}

/// Fills `lambda_{k,n}^alpha` from `lambda_{k,0} = 1` and
/// `lambda_{k,n}^a = (k + a + 1) lambda_{k,n-1}^{a+1} + k lambda_{k-1,n-1}^{a+1}`.
pub fn lambda_table(alpha: f64, n: usize, k_max: usize) -> Result<EigenTable> {
    if !alpha.is_finite() {
        return Err(invalid("alpha must be finite"));
    }
    // layer j holds lambda_{., j}^{alpha + n - j}
    let mut layer = vec![1.0; k_max + 1];
    for j in 1..=n {
        let a = alpha + (n - j) as f64;
        let mut next = vec![0.0; k_max + 1];
        for k in 0..=k_max {
            let kf = k as f64;
            let lower = if k == 0 { 0.0 } else { kf * layer[k - 1] };
            next[k] = (kf + a + 1.0) * layer[k] + lower;
        }
        layer = next;
    }
    Ok(EigenTable { alpha, order: n, values: layer })
}

/// `gamma_k^alpha = Gamma(k + alpha + 1) / k!` for `k = 0..=K` and admissible
/// `alpha` (a negative integer or `alpha > -1`), by the ratio recurrence
/// `gamma_{k+1} = gamma_k (k + alpha + 1) / (k + 1)` started at `chi(alpha)`.
/// Entries below `chi(alpha)` are zero.
pub fn base_gamma(alpha: f64, k_max: usize) -> Result<Vec<f64>> {
    if !is_admissible(alpha) {
        return Err(invalid(format!("alpha = {alpha} is neither a negative integer nor > -1")));
    }
    let start = chi(alpha);
    let mut out = vec![0.0; k_max + 1];
    if start > k_max {
        return Ok(out);
    }
    let seed = match negative_integer(alpha) {
        // Gamma(1) / m!
        Some(m) => 1.0 / (1..=m).map(|j| j as f64).product::<f64>(),
        None if alpha.fract() == 0.0 => (1..=alpha as u64).map(|j| j as f64).product(),
        None => libm::tgamma(alpha + 1.0),
    };
    out[start] = seed;
    for k in start..k_max {
        out[k + 1] = out[k] * (k as f64 + alpha + 1.0) / (k as f64 + 1.0);
    }
    Ok(out)
}

/// Fills `gamma_{k,n}^alpha` from `gamma_{k,0}^{alpha+n} = gamma_k^{alpha+n}` and
/// `gamma_{k,n}^a = (gamma_{k,n-1}^{a+1} + gamma_{k-1,n-1}^{a+1}) / 2`, with
/// entries at negative `k` taken as zero. Requires `alpha + n` admissible.
pub fn gamma_table(alpha: f64, n: usize, k_max: usize) -> Result<NormTable> {
    if !alpha.is_finite() {
        return Err(invalid("alpha must be finite"));
    }
    let top = alpha + n as f64;
    if !is_admissible(top) {
        return Err(invalid(format!("alpha + n = {top} is neither a negative integer nor > -1")));
    }
    let mut layer = base_gamma(top, k_max)?;
    for _ in 1..=n {
        let mut next = vec![0.0; k_max + 1];
        for k in 0..=k_max {
            let lower = if k == 0 { 0.0 } else { layer[k - 1] };
            next[k] = 0.5 * (layer[k] + lower);
        }
        layer = next;
    }
    let first_valid = chi_n(alpha, n);
    for v in layer.iter_mut().take(first_valid.min(k_max + 1)) {
        *v = 0.0;
    }
    Ok(NormTable { alpha, order: n, first_valid, values: layer })
}
