//! Convergence and conditioning experiments over manufactured solutions.

mod conditioning;
mod families;
mod norms;
mod output;

pub use conditioning::{run_conditioning_sweep, ConditionFit, ConditionMethod, ConditionRecord, ConditioningReport};
pub use families::{manufactured_rhs, Family, Manufactured};
pub use norms::{error_norms, norms_from_samples, Norm};
pub use output::{write_conditioning_csv, write_convergence_csv, write_plot_files, CSV_FLOAT_DIGITS};

use std::time::Instant;

use rayon::prelude::*;

use crate::basis::{build_dirichlet_basis, build_lift, build_robin_basis, BasisKind, LiftDegree};
use crate::error::{invalid, Result};
use crate::quadrature::build_rule;
use crate::solver::{solve_dirichlet, solve_robin, EllipticProblem};

/// Fits with `R^2` below this are reported but flagged as rejected.
pub const MIN_R2: f64 = 0.98;

/// Errors below this are treated as saturated and left out of fits.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: BasisKind,
    pub family: Family,
    pub h: f64,
    pub gamma: f64,
    pub mu: f64,
    /// Free constant in the Dirichlet families; the boundary datum itself is
    /// always derived from the exact solution.
    pub eta: f64,
    pub betas: Vec<f64>,
    pub ns: Vec<usize>,
    pub norms: Vec<Norm>,
    /// Error norms use `oversample * (2N + 1)` nodes.
    pub oversample: usize,
    pub timing: bool,
}

impl ExperimentSpec {
    /// Defaults: `gamma = 1`, `eta = 1` (Dirichlet) or `mu = 1` (Robin),
    /// `beta in {1, 2, 4}`, `h = 2.5`.
    pub fn new(kind: BasisKind, family: Family) -> Self {
        let norms = match kind {
            BasisKind::Dirichlet => vec![Norm::L2, Norm::H1, Norm::L2Winv],
            BasisKind::Robin => vec![Norm::L2, Norm::H1, Norm::L2OnePlusWinv],
        };
        Self {
            kind,
            family,
            h: 2.5,
            gamma: 1.0,
            mu: if kind == BasisKind::Robin { 1.0 } else { 0.0 },
            eta: 1.0,
            betas: vec![1.0, 2.0, 4.0],
            ns: vec![16, 32, 48, 64, 96, 128, 192, 256],
            norms,
            oversample: 1,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Manufactured::new(self.family, self.h, self.eta)?;
        if self.ns.is_empty() || self.betas.is_empty() || self.norms.is_empty() {
            return Err(invalid("N-list, beta-list and norm list must be non-empty"));
        }
        if self.ns.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("N-list must be strictly ascending"));
        }
        if self.kind == BasisKind::Dirichlet && self.ns[0] < 1 {
            return Err(invalid("the Dirichlet problem needs N >= 1"));
        }
        if let Some(b) = self.betas.iter().find(|b| !(**b > 0.0) || !b.is_finite()) {
            return Err(invalid(format!("beta must be finite and > 0, got {b}")));
        }
        if self.oversample == 0 {
            return Err(invalid("oversampling factor must be >= 1"));
        }
        match self.kind {
            BasisKind::Dirichlet if !(self.gamma > 0.0) => Err(invalid("the Dirichlet problem needs gamma > 0")),
            _ if !(self.gamma >= 0.0) || !self.gamma.is_finite() => Err(invalid("gamma must be finite and >= 0")),
            _ if !(self.mu >= 0.0) || !self.mu.is_finite() => Err(invalid("mu must be finite and >= 0")),
            _ => Ok(()),
        }
    }

    pub fn exact(&self) -> Manufactured {
        Manufactured { family: self.family, h: self.h, eta: self.eta }
    }

    /// Fit model: algebraic families fit against `ln(beta N)`, exponential ones against `N`.
    pub fn fit_model(&self) -> FitModel {
        if self.family.is_algebraic() {
            FitModel::Algebraic
        } else {
            FitModel::Exponential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `ln(error)` against `ln(beta N)`
    Algebraic,
    /// `ln(error)` against `N`
    Exponential,
}

impl FitModel {
    pub fn abscissa(self, beta: f64, n: usize) -> f64 {
        match self {
            FitModel::Algebraic => (beta * n as f64).ln(),
            FitModel::Exponential => n as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub beta: f64,
    pub n: usize,
    /// Aligned with `ExperimentSpec::norms`.
    pub errors: Vec<f64>,
    /// Slope against the previous N for the same beta, per norm.
    pub local_slopes: Vec<Option<f64>>,
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

impl LineFit {
    pub fn accepted(&self) -> bool {
        self.r2 >= MIN_R2
    }
}

/// Least-squares line through `(x, y)`; `None` with fewer than two distinct abscissae.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LineFit { slope, intercept, r2, points: n })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub beta: f64,
    pub norm: Norm,
    pub model: FitModel,
    pub fit: Option<LineFit>,
}

/// Fit over the largest half of `(n, error)` pairs, skipping errors below
/// [`NOISE_FLOOR`].
pub fn fit_tail(model: FitModel, beta: f64, data: &[(usize, f64)]) -> Option<LineFit> {
    let start = data.len() / 2;
    let pts: Vec<(f64, f64)> = data[start..]
        .iter()
        .filter(|(_, e)| *e >= NOISE_FLOOR && e.is_finite())
        .map(|&(n, e)| (model.abscissa(beta, n), e.ln()))
        .collect();
    fit_line(&pts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub spec: ExperimentSpec,
    /// Sorted by `(beta, N)` in spec order.
    pub records: Vec<ErrorRecord>,
    pub fits: Vec<SlopeFit>,
}

/// Solves one `(beta, N)` cell and measures its errors.
pub fn run_cell(spec: &ExperimentSpec, beta: f64, n: usize) -> Result<Vec<f64>> {
    let exact = spec.exact();
    let eta = exact.boundary_datum(spec.kind, spec.mu);
    let rule = build_rule(2 * n + 1, beta)?;
    let error_rule = if spec.oversample == 1 { rule.clone() } else { build_rule(spec.oversample * (2 * n + 1), beta)? };
    let gamma = spec.gamma;
    let f = move |x: f64| exact.rhs(gamma, x);
    match spec.kind {
        BasisKind::Robin => {
            let basis = build_robin_basis(spec.gamma, spec.mu, beta, n)?;
            let problem = EllipticProblem::robin(spec.gamma, spec.mu, eta, f)?;
            let sol = solve_robin(&problem, &basis, &rule)?;
            error_norms(&sol, &exact, &error_rule, &spec.norms)
        }
        BasisKind::Dirichlet => {
            let basis = build_dirichlet_basis(spec.gamma, beta, n)?;
            let lift = build_lift(spec.gamma, beta, LiftDegree::Finite(n), 0.0)?;
            let problem = EllipticProblem::dirichlet(spec.gamma, eta, f)?;
            let sol = solve_dirichlet(&problem, &basis, &lift, &rule)?;
            error_norms(&sol, &exact, &error_rule, &spec.norms)
        }
    }
}

/// Runs every `(beta, N)` cell (in parallel) and fits slopes per `(beta, norm)`.
pub fn run_convergence(spec: &ExperimentSpec) -> Result<ConvergenceReport> {
    spec.validate()?;
    let cells: Vec<(f64, usize)> = spec.betas.iter().flat_map(|&b| spec.ns.iter().map(move |&n| (b, n))).collect();
    let results: Vec<(Vec<f64>, Option<f64>)> = cells
        .par_iter()
        .map(|&(beta, n)| {
            let start = spec.timing.then(Instant::now);
            let errors = run_cell(spec, beta, n)?;
            Ok((errors, start.map(|t| t.elapsed().as_secs_f64())))
        })
        .collect::<Result<_>>()?;

    let model = spec.fit_model();
    let mut records: Vec<ErrorRecord> = Vec::with_capacity(cells.len());
    for (&(beta, n), (errors, seconds)) in cells.iter().zip(results) {
        let prev = records.last().filter(|r| r.beta == beta);
        let local_slopes = errors
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                prev.and_then(|p| {
                    let (e0, e1) = (p.errors[i], e);
                    (e0 > 0.0 && e1 > 0.0)
                        .then(|| (e1.ln() - e0.ln()) / (model.abscissa(beta, n) - model.abscissa(beta, p.n)))
                })
            })
            .collect();
        records.push(ErrorRecord { beta, n, errors, local_slopes, seconds });
    }

    let mut fits = Vec::new();
    for &beta in &spec.betas {
        for (i, &norm) in spec.norms.iter().enumerate() {
            let data: Vec<(usize, f64)> =
                records.iter().filter(|r| r.beta == beta).map(|r| (r.n, r.errors[i])).collect();
            fits.push(SlopeFit { beta, norm, model, fit: fit_tail(model, beta, &data) });
        }
    }
    Ok(ConvergenceReport { spec: spec.clone(), records, fits })
}
