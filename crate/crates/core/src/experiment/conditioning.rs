//! Condition numbers of the classical and diagonalized stiffness matrices.

use rayon::prelude::*;

use super::{fit_line, LineFit};
use crate::basis::{build_dirichlet_basis, build_robin_basis};
use crate::classical::{assemble_classical, condition_number, diagonalized_gram, ClassicalKind};
use crate::error::{invalid, Result};
use crate::quadrature::build_rule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionMethod {
    Classical,
    Diagonalized,
}

impl ConditionMethod {
    pub fn name(self) -> &'static str {
        match self {
            ConditionMethod::Classical => "classical",
            ConditionMethod::Diagonalized => "diagonalized",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRecord {
    pub kind: ClassicalKind,
    pub method: ConditionMethod,
    pub gamma: f64,
    pub mu: f64,
    pub beta: f64,
    pub n: usize,
    pub condition: f64,
}

/// Slope of `ln kappa` against `ln N` over the whole N-list.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionFit {
    pub kind: ClassicalKind,
    pub beta: f64,
    pub fit: Option<LineFit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditioningReport {
    pub records: Vec<ConditionRecord>,
    pub fits: Vec<ConditionFit>,
}

fn cell(
    kind: ClassicalKind,
    method: ConditionMethod,
    gamma: f64,
    mu: f64,
    beta: f64,
    n: usize,
    tol: f64,
) -> Result<f64> {
    let rule = build_rule(2 * n + 1, beta)?;
    let matrix = match method {
        ConditionMethod::Classical => assemble_classical(kind, gamma, mu, beta, n, &rule)?.entries,
        ConditionMethod::Diagonalized => {
            let basis = match kind {
                ClassicalKind::RobinClassical => build_robin_basis(gamma, mu, beta, n)?,
                ClassicalKind::DirichletClassical => build_dirichlet_basis(gamma, beta, n)?,
            };
            diagonalized_gram(&basis, &rule)?
        }
    };
    condition_number(&matrix, tol)
}

/// Every `(kind, method, beta, N)` cell, computed in parallel and returned in
/// the nested order of the arguments.
pub fn run_conditioning_sweep(
    kinds: &[ClassicalKind],
    gamma: f64,
    mu: f64,
    betas: &[f64],
    ns: &[usize],
    tol: f64,
) -> Result<ConditioningReport> {
    if kinds.is_empty() || betas.is_empty() || ns.is_empty() {
        return Err(invalid("kinds, beta-list and N-list must be non-empty"));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("N-list must be strictly ascending"));
    }
    let methods = [ConditionMethod::Classical, ConditionMethod::Diagonalized];
    let mut cells = Vec::new();
    for &kind in kinds {
        for method in methods {
            for &beta in betas {
                for &n in ns {
                    cells.push((kind, method, beta, n));
                }
            }
        }
    }
    let values: Vec<f64> =
        cells.par_iter().map(|&(k, m, b, n)| cell(k, m, gamma, mu, b, n, tol)).collect::<Result<_>>()?;
    let records: Vec<ConditionRecord> = cells
        .iter()
        .zip(values)
        .map(|(&(kind, method, beta, n), condition)| ConditionRecord { kind, method, gamma, mu, beta, n, condition })
        .collect();

    let mut fits = Vec::new();
    for &kind in kinds {
        for &beta in betas {
            let pts: Vec<(f64, f64)> = records
                .iter()
                .filter(|r| r.kind == kind && r.method == ConditionMethod::Classical && r.beta == beta)
                .map(|r| ((r.n as f64).ln(), r.condition.ln()))
                .collect();
            fits.push(ConditionFit { kind, beta, fit: fit_line(&pts) });
        }
    }
    Ok(ConditioningReport { records, fits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{DIRICHLET_REFERENCE, ROBIN_REFERENCE};

    #[test]
    fn reference_cells() {
        let r = run_conditioning_sweep(
            &[ClassicalKind::DirichletClassical, ClassicalKind::RobinClassical],
            1.0,
            1.0,
            &[2.0, 3.0],
            &[30, 50],
            1e-10,
        )
        .unwrap();
        let find = |kind, method, beta, n| {
            r.records
                .iter()
                .find(|c| c.kind == kind && c.method == method && c.beta == beta && c.n == n)
                .unwrap()
                .condition
        };
        let d = find(ClassicalKind::DirichletClassical, ConditionMethod::Classical, 2.0, 30);
        assert!((d / DIRICHLET_REFERENCE[1].1[1] - 1.0).abs() < 1e-4, "{d}");
        let rb = find(ClassicalKind::RobinClassical, ConditionMethod::Classical, 3.0, 50);
        assert!((rb / ROBIN_REFERENCE[2].1[2] - 1.0).abs() < 1e-4, "{rb}");
        for c in r.records.iter().filter(|c| c.method == ConditionMethod::Diagonalized) {
            assert!((c.condition - 1.0).abs() <= 1e-8, "{c:?}");
        }
        assert_eq!(r.records.len(), 16);
        assert_eq!(r.fits.len(), 4);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(run_conditioning_sweep(&[], 1.0, 1.0, &[1.0], &[10], 1e-8).is_err());
        assert!(run_conditioning_sweep(&[ClassicalKind::RobinClassical], 1.0, 1.0, &[1.0], &[10, 5], 1e-8).is_err());
    }
}
