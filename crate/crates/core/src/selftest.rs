//! Quick internal consistency checks, run by `halfline selftest`.

use crate::basis::{build_dirichlet_basis, build_robin_basis, BasisKind};
use crate::classical::{condition_number, diagonalized_gram};
use crate::error::Result;
use crate::experiment::{run_cell, ExperimentSpec, Family, Norm};
use crate::laguerre::{gamma_table, sobolev_gram, LaguerreIndex};
use crate::quadrature::build_rule;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, value: f64, limit: f64) -> Check {
    Check { name, passed: value.is_finite() && value <= limit, detail: format!("{value:.3e} (limit {limit:.0e})") }
}

fn quadrature_moments() -> Result<f64> {
    let mut worst = 0.0_f64;
    for beta in [0.5, 1.0, 4.0] {
        let rule = build_rule(64, beta)?;
        let m0 = rule.integrate_fn(|x| (-beta * x).exp());
        let m1 = rule.integrate_fn(|x| x * (-beta * x).exp());
        worst = worst.max((m0 * beta - 1.0).abs()).max((m1 * beta * beta - 1.0).abs());
    }
    Ok(worst)
}

fn sobolev_diagonal() -> Result<f64> {
    let mut worst = 0.0_f64;
    for (alpha, n) in [(0.0, 0), (-1.0, 1), (-2.0, 2)] {
        let beta = 2.0;
        let k_max = 16;
        let rule = build_rule(40, beta)?;
        let gram = sobolev_gram(n, LaguerreIndex::new(alpha, beta)?, k_max, &rule)?;
        let gamma = gamma_table(alpha, n, k_max)?;
        let scale = beta.powf(n as f64 - alpha - 1.0);
        for j in 0..=k_max {
            for k in 0..=k_max {
                let expected = if j == k { scale * gamma.get(k) } else { 0.0 };
                worst = worst.max((gram[(j, k)] - expected).abs() / (1.0 + expected.abs()));
            }
        }
    }
    Ok(worst)
}

fn diagonalized_condition() -> Result<f64> {
    let rule = build_rule(81, 2.0)?;
    let robin = build_robin_basis(1.0, 1.0, 2.0, 40)?;
    let dirichlet = build_dirichlet_basis(1.0, 2.0, 40)?;
    let a = condition_number(&diagonalized_gram(&robin, &rule)?, 1e-12)?;
    let b = condition_number(&diagonalized_gram(&dirichlet, &rule)?, 1e-12)?;
    Ok((a - 1.0).abs().max((b - 1.0).abs()))
}

fn spectral_accuracy() -> Result<f64> {
    let mut spec = ExperimentSpec::new(BasisKind::Dirichlet, Family::ExpOsc);
    spec.norms = vec![Norm::L2];
    let d = run_cell(&spec, 4.0, 64)?[0];
    let spec = ExperimentSpec { norms: vec![Norm::L2], ..ExperimentSpec::new(BasisKind::Robin, Family::ExpOscRobin) };
    let r = run_cell(&spec, 4.0, 64)?[0];
    Ok(d.max(r))
}

/// Runs every check; an `Err` means a check could not even be evaluated.
pub fn run_selftest() -> Result<Vec<Check>> {
    Ok(vec![
        check("quadrature moments", quadrature_moments()?, 1e-12),
        check("sobolev gram diagonal", sobolev_diagonal()?, 1e-10),
        check("diagonalized condition number", diagonalized_condition()?, 1e-8),
        check("exponential solution accuracy", spectral_accuracy()?, 1e-9),
    ])
}
