//! Diagonal Galerkin solves of
//!
//! ```text
//! -u'' + gamma u = f on (0, inf),   -u'(0) + mu u(0) = eta   (Robin)
//!                                    u(0) = eta              (Dirichlet)
//! ```
//!
//! Each coefficient is an explicit quotient; no linear system is formed.
//! Right-hand sides are sampled at the quadrature nodes, projected onto
//! `{l_j^{-1,beta}}` in one pass and mapped to the diagonal basis.

use crate::basis::{BasisKind, DiagonalBasis, LiftDegree, LiftFunction};
use crate::error::{invalid, Result};
use crate::laguerre::{eval_fun_all, eval_fun_derivative_all, fun_values_into, LaguerreIndex};
use crate::quadrature::QuadratureRule;

/// Problem data. `f` is sampled at quadrature nodes only.
#[derive(Debug, Clone)]
pub struct EllipticProblem<F> {
    pub kind: BasisKind,
    pub gamma: f64,
    pub mu: f64,
    pub eta: f64,
    pub f: F,
}

impl<F: Fn(f64) -> f64> EllipticProblem<F> {
    pub fn robin(gamma: f64, mu: f64, eta: f64, f: F) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(invalid(format!("gamma must be finite and >= 0, got {gamma}")));
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(invalid(format!("mu must be finite and >= 0, got {mu}")));
        }
        if !eta.is_finite() {
            return Err(invalid("eta must be finite"));
        }
        Ok(Self { kind: BasisKind::Robin, gamma, mu, eta, f })
    }

    pub fn dirichlet(gamma: f64, eta: f64, f: F) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(invalid(format!("gamma must be finite and > 0 for the Dirichlet problem, got {gamma}")));
        }
        if !eta.is_finite() {
            return Err(invalid("eta must be finite"));
        }
        Ok(Self { kind: BasisKind::Dirichlet, gamma, mu: 0.0, eta, f })
    }
}

/// Discrete solution. `laguerre_coeffs` always includes the lift.
#[derive(Debug, Clone)]
pub struct SpectralSolution<'a> {
    basis: &'a DiagonalBasis,
    u_hat: Vec<f64>,
    lift: Option<(f64, &'a LiftFunction)>,
    laguerre_coeffs: Vec<f64>,
}

impl<'a> SpectralSolution<'a> {
    pub fn basis(&self) -> &'a DiagonalBasis {
        self.basis
    }

    /// Coefficients in the diagonal basis, indexed from `basis.first()`.
    pub fn coefficients(&self) -> &[f64] {
        &self.u_hat
    }

    pub fn lift(&self) -> Option<(f64, &'a LiftFunction)> {
        self.lift
    }

    /// Coefficients of the full solution in `{l_k^{-1,beta}}`, `k = 0..=N`.
    pub fn laguerre_coeffs(&self) -> &[f64] {
        &self.laguerre_coeffs
    }

    fn index(&self) -> LaguerreIndex {
        self.basis.index()
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let l = eval_fun_all(self.index(), self.basis.degree(), x)?;
        Ok(dot(&self.laguerre_coeffs, &l))
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let dl = eval_fun_derivative_all(self.index(), self.basis.degree(), x)?;
        Ok(dot(&self.laguerre_coeffs, &dl))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sum_k c_k l_k^{-1,beta}(x)` at each point.
pub fn evaluate(solution: &SpectralSolution<'_>, points: &[f64]) -> Result<Vec<f64>> {
    points.iter().map(|&x| solution.value(x)).collect()
}

/// `sum_k c_k d/dx l_k^{-1,beta}(x)` at each point.
pub fn evaluate_derivative(solution: &SpectralSolution<'_>, points: &[f64]) -> Result<Vec<f64>> {
    points.iter().map(|&x| solution.derivative(x)).collect()
}

/// `(g, l_j^{-1,beta})` for `j = 0..=n` from samples at the rule nodes.
pub fn laguerre_products(rule: &QuadratureRule, beta: f64, n: usize, g: impl Fn(f64) -> f64) -> Vec<f64> {
    let index = LaguerreIndex { alpha: -1.0, beta };
    let mut out = vec![0.0; n + 1];
    let mut l = Vec::with_capacity(n + 1);
    for (x, w) in rule.points() {
        let gw = g(x) * w;
        if gw == 0.0 {
            continue;
        }
        fun_values_into(index, n, x, &mut l);
        for (o, v) in out.iter_mut().zip(&l) {
            *o += gw * v;
        }
    }
    out
}

fn check_match<F>(problem: &EllipticProblem<F>, basis: &DiagonalBasis, rule: &QuadratureRule) -> Result<()> {
    if problem.kind != basis.kind() {
        return Err(invalid(format!("a {} problem cannot use a {} basis", problem.kind, basis.kind())));
    }
    if problem.gamma != basis.gamma() || problem.mu != basis.mu() {
        return Err(invalid("problem and basis parameters differ"));
    }
    let wanted = 2 * basis.degree() + 1;
    if rule.len() < wanted {
        log::warn!("quadrature rule has {} nodes; {wanted} are needed for exact Galerkin products", rule.len());
    }
    Ok(())
}

/// Robin solve: `u_k = [(f, R_k) + eta R_k(0)] / rho_k`.
pub fn solve_robin<'a, F: Fn(f64) -> f64>(
    problem: &EllipticProblem<F>,
    basis: &'a DiagonalBasis,
    rule: &QuadratureRule,
) -> Result<SpectralSolution<'a>> {
    check_match(problem, basis, rule)?;
    let n = basis.degree();
    let products = laguerre_products(rule, basis.beta(), n, &problem.f);
    let b = basis.adjoint_from_laguerre(&products)?;
    let u_hat: Vec<f64> = (0..=n).map(|k| (b[k] + problem.eta * basis.value_at_zero(k)) / basis.diag(k)).collect();
    let laguerre_coeffs = basis.to_laguerre(&u_hat)?;
    Ok(SpectralSolution { basis, u_hat, lift: None, laguerre_coeffs })
}

/// Dirichlet solve: `u_N = eta S_{0,N} + sum_k u_k S_k` with `u_k = (f, S_k) / varrho_k`.
pub fn solve_dirichlet<'a, F: Fn(f64) -> f64>(
    problem: &EllipticProblem<F>,
    basis: &'a DiagonalBasis,
    lift: &'a LiftFunction,
    rule: &QuadratureRule,
) -> Result<SpectralSolution<'a>> {
    check_match(problem, basis, rule)?;
    let n = basis.degree();
    if lift.degree() != LiftDegree::Finite(n) || lift.gamma() != basis.gamma() || lift.beta() != basis.beta() {
        return Err(invalid("lift must be built with the basis' gamma, beta and N"));
    }
    let products = laguerre_products(rule, basis.beta(), n, &problem.f);
    let b = basis.adjoint_from_laguerre(&products)?;
    let u_hat: Vec<f64> = (1..=n).map(|k| b[k - 1] / basis.diag(k)).collect();
    let mut laguerre_coeffs = basis.to_laguerre(&u_hat)?;
    for (c, s) in laguerre_coeffs.iter_mut().zip(lift.coeffs()) {
        *c += problem.eta * s;
    }
    Ok(SpectralSolution { basis, u_hat, lift: Some((problem.eta, lift)), laguerre_coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_dirichlet_basis, build_lift, build_robin_basis};
    use crate::laguerre::eval_fun_derivatives;
    use crate::quadrature::build_rule;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// `(u, u', u'')` of `sum c_k l_k^{-1,beta}`.
    fn expansion(beta: f64, c: &[f64], x: f64) -> [f64; 3] {
        let index = LaguerreIndex::new(-1.0, beta).unwrap();
        let t = eval_fun_derivatives(index, c.len() - 1, x, 2).unwrap();
        [dot(c, &t[0]), dot(c, &t[1]), dot(c, &t[2])]
    }

    fn exp_osc(x: f64) -> [f64; 3] {
        let (s, c) = (2.0 * x).sin_cos();
        let e = (-x).exp();
        // e^{-x}(sin 2x + cos 2x)
        [e * (s + c), e * (c - 3.0 * s), e * (4.0 * s - 2.0 * c)]
    }

    #[test]
    fn null_data_gives_zero() {
        let rule = build_rule(33, 2.0).unwrap();
        let basis = build_robin_basis(1.0, 1.0, 2.0, 16).unwrap();
        let p = EllipticProblem::robin(1.0, 1.0, 0.0, |_| 0.0).unwrap();
        let sol = solve_robin(&p, &basis, &rule).unwrap();
        assert!(sol.coefficients().iter().all(|&u| u == 0.0));
        assert!(evaluate(&sol, &[0.0, 1.0, 7.5]).unwrap().iter().all(|&u| u == 0.0));
        assert!(evaluate_derivative(&sol, &[0.0, 3.0]).unwrap().iter().all(|&u| u == 0.0));

        let basis = build_dirichlet_basis(1.0, 2.0, 16).unwrap();
        let lift = build_lift(1.0, 2.0, LiftDegree::Finite(16), 0.0).unwrap();
        let p = EllipticProblem::dirichlet(1.0, 0.0, |_| 0.0).unwrap();
        let sol = solve_dirichlet(&p, &basis, &lift, &rule).unwrap();
        assert!(sol.laguerre_coeffs().iter().all(|&u| u == 0.0));
    }

    #[test]
    fn robin_reproduces_basis_members() {
        let n = 20;
        for &(gamma, mu, beta) in &[(1.0, 1.0, 2.0), (0.25, 0.0, 1.0), (4.0, 2.0, 4.0)] {
            let basis = build_robin_basis(gamma, mu, beta, n).unwrap();
            let rule = build_rule(2 * n + 1, beta).unwrap();
            for j in [0usize, 1, 7, n] {
                let c = basis.member_coefficients(j).unwrap();
                let u0 = expansion(beta, &c, 0.0);
                let eta = -u0[1] + mu * u0[0];
                let p = EllipticProblem::robin(gamma, mu, eta, |x| {
                    let u = expansion(beta, &c, x);
                    -u[2] + gamma * u[0]
                })
                .unwrap();
                let sol = solve_robin(&p, &basis, &rule).unwrap();
                for (k, &u) in sol.coefficients().iter().enumerate() {
                    let expected = if k == j { 1.0 } else { 0.0 };
                    assert!((u - expected).abs() < 1e-10, "j={j} k={k}: {u}");
                }
            }
        }
    }

    #[test]
    fn dirichlet_reproduces_basis_members_and_lift() {
        let n = 18;
        for &(gamma, beta, eta) in &[(1.0, 2.0, 0.0), (1.0, 4.0, 1.5), (0.5, 1.0, -2.0)] {
            let basis = build_dirichlet_basis(gamma, beta, n).unwrap();
            let lift = build_lift(gamma, beta, LiftDegree::Finite(n), 0.0).unwrap();
            let rule = build_rule(2 * n + 1, beta).unwrap();
            for j in [1usize, 5, n] {
                let mut c = basis.member_coefficients(j).unwrap();
                for (v, s) in c.iter_mut().zip(lift.coeffs()) {
                    *v += eta * s;
                }
                let p = EllipticProblem::dirichlet(gamma, eta, |x| {
                    let u = expansion(beta, &c, x);
                    -u[2] + gamma * u[0]
                })
                .unwrap();
                let sol = solve_dirichlet(&p, &basis, &lift, &rule).unwrap();
                for (i, &u) in sol.coefficients().iter().enumerate() {
                    let expected = if i + 1 == j { 1.0 } else { 0.0 };
                    assert!((u - expected).abs() < 1e-10, "j={j} k={}: {u}", i + 1);
                }
                for (a, b) in sol.laguerre_coeffs().iter().zip(&c) {
                    assert!((a - b).abs() < 1e-10);
                }
                assert!((sol.value(0.0).unwrap() - eta).abs() <= 1e-13 * (1.0 + eta.abs()));
            }
        }
    }

    #[test]
    fn dirichlet_first_member_pointwise() {
        // u = l_1^{-1,beta} = -beta x exp(-beta x / 2)
        let (gamma, beta, n) = (1.0, 2.0, 12);
        let u = |x: f64| -beta * x * (-beta * x / 2.0).exp();
        let upp = |x: f64| -beta * (-beta * x / 2.0).exp() * (beta * beta * x / 4.0 - beta);
        let basis = build_dirichlet_basis(gamma, beta, n).unwrap();
        let lift = build_lift(gamma, beta, LiftDegree::Finite(n), 0.0).unwrap();
        let rule = build_rule(2 * n + 1, beta).unwrap();
        let p = EllipticProblem::dirichlet(gamma, 0.0, |x| -upp(x) + gamma * u(x)).unwrap();
        let sol = solve_dirichlet(&p, &basis, &lift, &rule).unwrap();
        let xs: Vec<f64> = (0..50).map(|i| i as f64 * 0.3).collect();
        for (x, v) in xs.iter().zip(evaluate(&sol, &xs).unwrap()) {
            assert!((v - u(*x)).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn homogeneous_dirichlet_converges_to_exponential() {
        for beta in [2.0, 4.0, 1.0] {
            let (gamma, n) = (1.0, 64);
            let basis = build_dirichlet_basis(gamma, beta, n).unwrap();
            let lift = build_lift(gamma, beta, LiftDegree::Finite(n), 0.0).unwrap();
            let rule = build_rule(2 * n + 1, beta).unwrap();
            let p = EllipticProblem::dirichlet(gamma, 1.0, |_| 0.0).unwrap();
            let sol = solve_dirichlet(&p, &basis, &lift, &rule).unwrap();
            let err2 = rule.integrate_fn(|x| (sol.value(x).unwrap() - (-x).exp()).powi(2));
            assert!(err2.sqrt() <= 1e-6, "beta={beta}: {}", err2.sqrt());
        }
    }

    #[test]
    fn robin_boundary_condition_is_approached() {
        let (gamma, mu, beta, n) = (1.0, 1.0, 2.0, 64);
        let basis = build_robin_basis(gamma, mu, beta, n).unwrap();
        let rule = build_rule(2 * n + 1, beta).unwrap();
        let u0 = exp_osc(0.0);
        let eta = -u0[1] + mu * u0[0];
        let p = EllipticProblem::robin(gamma, mu, eta, |x| {
            let u = exp_osc(x);
            -u[2] + gamma * u[0]
        })
        .unwrap();
        let sol = solve_robin(&p, &basis, &rule).unwrap();
        let residual = -sol.derivative(0.0).unwrap() + mu * sol.value(0.0).unwrap() - eta;
        assert!(residual.abs() < 1e-8, "{residual}");
    }

    #[test]
    fn galerkin_residual_and_mesh_independence() {
        let (gamma, mu, beta, n) = (1.0, 1.0, 2.0, 24);
        let basis = build_robin_basis(gamma, mu, beta, n).unwrap();
        let u0 = exp_osc(0.0);
        let eta = -u0[1] + mu * u0[0];
        let f = |x: f64| {
            let u = exp_osc(x);
            -u[2] + gamma * u[0]
        };
        let p = EllipticProblem::robin(gamma, mu, eta, f).unwrap();
        let rule = build_rule(2 * n + 1, beta).unwrap();
        let sol = solve_robin(&p, &basis, &rule).unwrap();

        // A(u_N, R_k) = (u_N', R_k') + gamma (u_N, R_k) + mu u_N(0) R_k(0), and the
        // Galerkin equations make it equal (f, R_k) + eta R_k(0)
        let c = sol.laguerre_coeffs();
        let index = basis.index();
        let mut form = vec![0.0; n + 1];
        for (x, w) in rule.points() {
            let t = eval_fun_derivatives(index, n, x, 1).unwrap();
            let (u, du) = (dot(c, &t[0]), dot(c, &t[1]));
            for j in 0..=n {
                form[j] += w * (du * t[1][j] + gamma * u * t[0][j]);
            }
        }
        form[0] += mu * sol.value(0.0).unwrap();
        let a = basis.adjoint_from_laguerre(&form).unwrap();
        for k in 0..=n {
            let recomputed = a[k] / basis.diag(k);
            let u = sol.coefficients()[k];
            assert!((recomputed - u).abs() <= 1e-9 * u.abs().max(1e-3), "k={k}: {recomputed} {u}");
        }

        let fine = build_rule(4 * n + 2, beta).unwrap();
        let sol2 = solve_robin(&p, &basis, &fine).unwrap();
        let scale = sol.coefficients().iter().fold(0.0f64, |m, u| m.max(u.abs()));
        for (a, b) in sol.coefficients().iter().zip(sol2.coefficients()) {
            assert!((a - b).abs() <= 1e-11 * scale, "{a} {b}");
        }
    }

    #[test]
    fn parameter_mismatch_rejected() {
        let rule = build_rule(21, 1.0).unwrap();
        let robin = build_robin_basis(1.0, 1.0, 1.0, 10).unwrap();
        let dir = build_dirichlet_basis(1.0, 1.0, 10).unwrap();
        let lift = build_lift(1.0, 1.0, LiftDegree::Finite(9), 0.0).unwrap();
        let p = EllipticProblem::robin(1.0, 0.5, 0.0, |_| 0.0).unwrap();
        assert!(solve_robin(&p, &robin, &rule).is_err());
        let p = EllipticProblem::dirichlet(1.0, 0.0, |_| 0.0).unwrap();
        assert!(solve_robin(&p, &robin, &rule).is_err());
        assert!(solve_dirichlet(&p, &dir, &lift, &rule).is_err());
        assert!(EllipticProblem::dirichlet(0.0, 0.0, |_| 0.0).is_err());
        assert!(EllipticProblem::robin(1.0, -1.0, 0.0, |_| 0.0).is_err());
        let sol = solve_robin(&EllipticProblem::robin(1.0, 1.0, 1.0, |_| 0.0).unwrap(), &robin, &rule).unwrap();
        assert!(evaluate(&sol, &[-1.0]).is_err());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let (gamma, beta, n) = (1.0, 4.0, 32);
        let basis = build_dirichlet_basis(gamma, beta, n).unwrap();
        let lift = build_lift(gamma, beta, LiftDegree::Finite(n), 0.0).unwrap();
        let rule = build_rule(2 * n + 1, beta).unwrap();
        let p = EllipticProblem::dirichlet(gamma, 1.0, |x| {
            let u = exp_osc(x);
            -u[2] + gamma * u[0]
        })
        .unwrap();
        let sol = solve_dirichlet(&p, &basis, &lift, &rule).unwrap();
        for x in [0.1, 0.5, 1.3, 4.0] {
            let mut errs = Vec::new();
            for h in [1e-2, 5e-3] {
                let fd = (sol.value(x + h).unwrap() - sol.value(x - h).unwrap()) / (2.0 * h);
                errs.push((fd - sol.derivative(x).unwrap()).abs());
            }
            // halving h cuts a second-order error by ~4
            assert!(errs[1] < 0.3 * errs[0] || errs[1] < 1e-12, "{errs:?}");
        }
    }

    proptest! {
        #[test]
        fn evaluation_matches_member_summation(
            u in proptest::collection::vec(-1.0f64..1.0, 13),
            gamma in 0.1f64..3.0,
            beta in 0.5f64..4.0,
        ) {
            let n = 12;
            let basis = build_robin_basis(gamma, 1.0, beta, n).unwrap();
            let sol = SpectralSolution {
                basis: &basis,
                u_hat: u.clone(),
                lift: None,
                laguerre_coeffs: basis.to_laguerre(&u).unwrap(),
            };
            for i in 0..20 {
                let x = i as f64 * 0.4 / beta;
                let l = eval_fun_all(basis.index(), n, x).unwrap();
                let mut member = l[0];
                let mut direct = u[0] * member;
                for k in 1..=n {
                    member = l[k] - basis.d(k - 1) * member;
                    direct += u[k] * member;
                }
                let v = sol.value(x).unwrap();
                prop_assert!((v - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
            }
        }
    }

    #[test]
    fn value_at_origin_is_eta() {
        let (gamma, beta, n) = (1.0, 1.0, 40);
        let basis = build_dirichlet_basis(gamma, beta, n).unwrap();
        let lift = build_lift(gamma, beta, LiftDegree::Finite(n), 0.0).unwrap();
        let rule = build_rule(2 * n + 1, beta).unwrap();
        for eta in [1.0, -0.3, 7.0] {
            let p = EllipticProblem::dirichlet(gamma, eta, |x| (-x).exp() * (1.0 + x).recip()).unwrap();
            let sol = solve_dirichlet(&p, &basis, &lift, &rule).unwrap();
            assert_relative_eq!(sol.value(0.0).unwrap(), eta, max_relative = 1e-13);
        }
    }
}
