//! Discrete error norms on a quadrature rule.

use crate::error::{invalid, Error, Result};
use crate::laguerre::Differentiable;
use crate::quadrature::QuadratureRule;
use crate::solver::SpectralSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Norm {
    L2,
    H1,
    /// `L^2` with weight `1/x`
    L2Winv,
    /// `L^2` with weight `1/(1+x)`
    L2OnePlusWinv,
}

impl Norm {
    pub const ALL: [Norm; 4] = [Norm::L2, Norm::H1, Norm::L2Winv, Norm::L2OnePlusWinv];

    pub fn name(self) -> &'static str {
        match self {
            Norm::L2 => "L2",
            Norm::H1 => "H1",
            Norm::L2Winv => "L2_winv",
            Norm::L2OnePlusWinv => "L2_1pwinv",
        }
    }

    fn needs_derivative(self) -> bool {
        self == Norm::H1
    }
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Norm::ALL
            .into_iter()
            .find(|n| n.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown norm `{s}` (expected L2, H1, L2_winv or L2_1pwinv)")))
    }
}

/// Norms of `e = e0` and `e' = e1` sampled on the rule nodes. Weights with
/// `1/x` are evaluated at the nodes, which never include the origin.
pub fn norms_from_samples(rule: &QuadratureRule, e0: &[f64], e1: Option<&[f64]>, norms: &[Norm]) -> Result<Vec<f64>> {
    if e0.len() != rule.len() {
        return Err(Error::LengthMismatch { expected: rule.len(), actual: e0.len() });
    }
    if let Some(e1) = e1 {
        if e1.len() != rule.len() {
            return Err(Error::LengthMismatch { expected: rule.len(), actual: e1.len() });
        }
    }
    norms
        .iter()
        .map(|&norm| {
            let mut acc = 0.0;
            for (j, (x, w)) in rule.points().enumerate() {
                let e2 = e0[j] * e0[j];
                acc += w * match norm {
                    Norm::L2 => e2,
                    Norm::H1 => {
                        let d = e1.ok_or(Error::InsufficientDerivatives { required: 1, available: 0 })?[j];
                        e2 + d * d
                    }
                    Norm::L2Winv => e2 / x,
                    Norm::L2OnePlusWinv => e2 / (1.0 + x),
                };
            }
            Ok(acc.max(0.0).sqrt())
        })
        .collect()
}

/// `||u_N - u||` in each requested norm.
pub fn error_norms(
    solution: &SpectralSolution<'_>,
    exact: &dyn Differentiable,
    rule: &QuadratureRule,
    norms: &[Norm],
) -> Result<Vec<f64>> {
    let want_derivative = norms.iter().any(|n| n.needs_derivative());
    if want_derivative && exact.max_order() < 1 {
        return Err(Error::InsufficientDerivatives { required: 1, available: exact.max_order() });
    }
    let mut e0 = Vec::with_capacity(rule.len());
    let mut e1 = Vec::with_capacity(if want_derivative { rule.len() } else { 0 });
    for &x in rule.nodes() {
        e0.push(solution.value(x)? - exact.value(x));
        if want_derivative {
            e1.push(solution.derivative(x)? - exact.derivative(1, x));
        }
    }
    norms_from_samples(rule, &e0, want_derivative.then_some(e1.as_slice()), norms)
}
