//! Classical Laguerre Galerkin stiffness matrices, kept as a conditioning
//! baseline for the diagonal bases.
//!
//! Dirichlet uses `{x l_k^{0,beta}}_{k=0..N-1}` under `A_gamma`, Robin uses
//! `{l_k^{0,beta}}_{k=0..=N}` under `A_{gamma,mu}`. The Dirichlet matrix is
//! pentadiagonal; the Robin matrix is dense because `(l_j', l_k')` does not
//! vanish away from the diagonal.

use crate::basis::DiagonalBasis;
use crate::error::{invalid, Error, Result};
use crate::laguerre::{eval_fun_derivatives, LaguerreIndex};
use crate::linalg::{
    extremal_eigenvalues_iterative, householder_tridiagonal, tridiagonal_eigenvalue_bisect, Cholesky, DenseMatrix,
};
use crate::quadrature::QuadratureRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicalKind {
    RobinClassical,
    DirichletClassical,
}

impl ClassicalKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassicalKind::RobinClassical => "robin",
            ClassicalKind::DirichletClassical => "dirichlet",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StiffMatrix {
    pub kind: ClassicalKind,
    pub gamma: f64,
    pub mu: f64,
    pub beta: f64,
    pub n: usize,
    pub entries: DenseMatrix,
}

impl StiffMatrix {
    pub fn size(&self) -> usize {
        self.entries.size()
    }
}

/// Nodes needed for exact assembly at degree `n`.
pub fn required_nodes(n: usize) -> usize {
    n + 2
}

fn check_rule(rule: &QuadratureRule, beta: f64, required: usize) -> Result<()> {
    if rule.len() < required {
        return Err(Error::InsufficientRule { required, available: rule.len() });
    }
    if rule.beta() != beta {
        return Err(invalid(format!("rule built for beta = {}, matrix needs beta = {beta}", rule.beta())));
    }
    Ok(())
}

/// Assembles the classical stiffness matrix by quadrature and symmetrizes it.
pub fn assemble_classical(
    kind: ClassicalKind,
    gamma: f64,
    mu: f64,
    beta: f64,
    n: usize,
    rule: &QuadratureRule,
) -> Result<StiffMatrix> {
    if !(gamma >= 0.0) || !gamma.is_finite() || !(mu >= 0.0) || !mu.is_finite() {
        return Err(invalid(format!("gamma and mu must be finite and >= 0, got {gamma}, {mu}")));
    }
    let index = LaguerreIndex::new(0.0, beta)?;
    let (size, mu) = match kind {
        ClassicalKind::DirichletClassical => {
            if n < 1 {
                return Err(invalid("the classical Dirichlet basis needs N >= 1"));
            }
            (n, 0.0)
        }
        ClassicalKind::RobinClassical => (n + 1, mu),
    };
    check_rule(rule, beta, required_nodes(n))?;
    let mut a = DenseMatrix::zeros(size);
    let mut phi = vec![0.0; size];
    let mut dphi = vec![0.0; size];
    for (x, w) in rule.points() {
        let t = eval_fun_derivatives(index, size, x, 1)?;
        for k in 0..size {
            match kind {
                ClassicalKind::DirichletClassical => {
                    phi[k] = x * t[0][k];
                    dphi[k] = t[0][k] + x * t[1][k];
                }
                ClassicalKind::RobinClassical => {
                    phi[k] = t[0][k];
                    dphi[k] = t[1][k];
                }
            }
        }
        for j in 0..size {
            for k in 0..=j {
                a[(j, k)] += w * (dphi[j] * dphi[k] + gamma * phi[j] * phi[k]);
            }
        }
    }
    // l_k^{0,beta}(0) = 1 for every k
    for j in 0..size {
        for k in 0..=j {
            a[(j, k)] += mu;
            a[(k, j)] = a[(j, k)];
        }
    }
    a.symmetrize();
    Ok(StiffMatrix { kind, gamma, mu, beta, n, entries: a })
}

/// `kappa_2 = lambda_max / lambda_min` of an SPD matrix. Both eigenvalues come
/// from Sturm bisection on a Householder tridiagonal form, each converged to
/// relative width `tol`.
pub fn condition_number(matrix: &DenseMatrix, tol: f64) -> Result<f64> {
    let (lo, hi) = extremal_eigenvalues(matrix, tol)?;
    Ok(hi / lo)
}

/// `(lambda_min, lambda_max)` by tridiagonal reduction and bisection.
pub fn extremal_eigenvalues(matrix: &DenseMatrix, tol: f64) -> Result<(f64, f64)> {
    let n = matrix.size();
    if n == 0 {
        return Err(invalid("empty matrix"));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be > 0, got {tol}")));
    }
    Cholesky::factor(matrix)?;
    let (diag, off) = householder_tridiagonal(matrix);
    let lo = tridiagonal_eigenvalue_bisect(&diag, &off, 0, tol);
    let hi = tridiagonal_eigenvalue_bisect(&diag, &off, n - 1, tol);
    if !(lo > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok((lo, hi))
}

/// Power and inverse iteration estimate of `kappa_2`; slow on clustered
/// spectra but independent of the tridiagonal path.
pub fn condition_number_iterative(matrix: &DenseMatrix, tol: f64, max_iter: usize) -> Result<f64> {
    let (lo, hi) = extremal_eigenvalues_iterative(matrix, tol, max_iter)?;
    Ok(hi / lo)
}

/// `A(l_j^{-1,beta}, l_k^{-1,beta})` for `j, k = 0..=n`, with the endpoint
/// term `mu` on the `(0, 0)` entry (`mu = 0` gives `A_gamma`).
pub fn laguerre_form_matrix(gamma: f64, mu: f64, beta: f64, n: usize, rule: &QuadratureRule) -> Result<DenseMatrix> {
    let index = LaguerreIndex::new(-1.0, beta)?;
    check_rule(rule, beta, n + 1)?;
    let mut a = DenseMatrix::zeros(n + 1);
    for (x, w) in rule.points() {
        let t = eval_fun_derivatives(index, n, x, 1)?;
        for j in 0..=n {
            for k in 0..=j {
                a[(j, k)] += w * (t[1][j] * t[1][k] + gamma * t[0][j] * t[0][k]);
            }
        }
    }
    a[(0, 0)] += mu;
    for j in 0..=n {
        for k in 0..j {
            a[(k, j)] = a[(j, k)];
        }
    }
    Ok(a)
}

/// Gram matrix of `{B_k / sqrt(diag_k)}` under the basis' own form.
pub fn diagonalized_gram(basis: &DiagonalBasis, rule: &QuadratureRule) -> Result<DenseMatrix> {
    let n = basis.degree();
    let form = laguerre_form_matrix(basis.gamma(), basis.mu(), basis.beta(), n, rule)?;
    let first = basis.first();
    let mut coeffs = Vec::with_capacity(basis.len());
    for k in first..=n {
        let scale = basis.diag(k).sqrt().recip();
        let mut c = basis.member_coefficients(k)?;
        c.iter_mut().for_each(|v| *v *= scale);
        coeffs.push(c);
    }
    let mut applied = Vec::with_capacity(coeffs.len());
    let mut y = vec![0.0; n + 1];
    for c in &coeffs {
        form.mul_vec(c, &mut y);
        applied.push(y.clone());
    }
    let mut g = DenseMatrix::from_fn(coeffs.len(), |a, b| coeffs[a].iter().zip(&applied[b]).map(|(x, y)| x * y).sum());
    g.symmetrize();
    Ok(g)
}

/// Published reference condition numbers of the classical method
/// (`gamma = 1`, Dirichlet) as `(N, [beta = 1, 2, 3])`.
pub const DIRICHLET_REFERENCE: [(usize, [f64; 3]); 8] = [
    (10, [1.5899e3, 5.1603e2, 2.8771e2]),
    (30, [2.3557e4, 6.8162e3, 3.5015e3]),
    (50, [7.5948e4, 2.1307e4, 1.0654e4]),
    (70, [1.6112e5, 4.4494e4, 2.1921e4]),
    (90, [2.8034e5, 7.6647e4, 3.7394e4]),
    (110, [4.3446e5, 1.1795e5, 5.7137e4]),
    (130, [6.2409e5, 1.6853e5, 8.1197e4]),
    (150, [8.4971e5, 2.2850e5, 1.0961e5]),
];

/// As [`DIRICHLET_REFERENCE`] for Robin with `gamma = mu = 1`.
pub const ROBIN_REFERENCE: [(usize, [f64; 3]); 8] = [
    (10, [5.8863e1, 2.1075e2, 4.4972e2]),
    (30, [4.1557e2, 1.6049e3, 3.5610e3]),
    (50, [1.0965e3, 4.2960e3, 9.5913e3]),
    (70, [2.1016e3, 8.2840e3, 1.8540e4]),
    (90, [3.4309e3, 1.3569e4, 3.0407e4]),
    (110, [5.0845e3, 2.0151e4, 4.5191e4]),
    (130, [7.0623e3, 2.8029e4, 6.2894e4]),
    (150, [9.3643e3, 3.7205e4, 8.3515e4]),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_dirichlet_basis, build_robin_basis};
    use crate::quadrature::build_rule;
    use approx::assert_relative_eq;

    fn assemble(kind: ClassicalKind, beta: f64, n: usize) -> StiffMatrix {
        let rule = build_rule(2 * n + 1, beta).unwrap();
        assemble_classical(kind, 1.0, 1.0, beta, n, &rule).unwrap()
    }

    #[test]
    fn robin_corner_entry() {
        for &(gamma, mu, beta) in &[(1.0, 1.0, 1.0), (2.0, 0.5, 3.0), (0.0, 0.0, 2.0)] {
            let rule = build_rule(7, beta).unwrap();
            let a = assemble_classical(ClassicalKind::RobinClassical, gamma, mu, beta, 3, &rule).unwrap();
            assert_eq!(a.size(), 4);
            assert_relative_eq!(a.entries[(0, 0)], mu + beta / 4.0 + gamma / beta, max_relative = 1e-13);
        }
    }

    #[test]
    fn symmetric_and_positive_definite() {
        for kind in [ClassicalKind::RobinClassical, ClassicalKind::DirichletClassical] {
            for beta in [1.0, 2.5] {
                let a = assemble(kind, beta, 16);
                assert!(a.entries.symmetry_residual() <= 1e-12);
                assert!(Cholesky::factor(&a.entries).is_ok());
            }
        }
    }

    #[test]
    fn dirichlet_matrix_is_banded() {
        for beta in [1.0, 2.0, 3.0] {
            let a = assemble(ClassicalKind::DirichletClassical, beta, 16);
            let norm = a.entries.max_abs();
            assert!(a.entries[(0, 5)].abs() <= 1e-10 * norm);
            for j in 0..16usize {
                for k in 0..16usize {
                    if j.abs_diff(k) > 4 {
                        assert!(a.entries[(j, k)].abs() <= 1e-10 * norm);
                    }
                }
            }
        }
        // the Robin matrix couples every pair through (l_j', l_k')
        let a = assemble(ClassicalKind::RobinClassical, 1.0, 16);
        assert!(a.entries[(0, 5)].abs() > 0.1);
    }

    #[test]
    fn insufficient_rule_rejected() {
        let rule = build_rule(5, 1.0).unwrap();
        let e = assemble_classical(ClassicalKind::RobinClassical, 1.0, 1.0, 1.0, 10, &rule).unwrap_err();
        assert!(matches!(e, Error::InsufficientRule { required: 12, available: 5 }));
        let rule = build_rule(30, 2.0).unwrap();
        assert!(assemble_classical(ClassicalKind::RobinClassical, 1.0, 1.0, 1.0, 10, &rule).is_err());
    }

    #[test]
    fn condition_number_examples() {
        assert_relative_eq!(condition_number(&DenseMatrix::identity(7), 1e-10).unwrap(), 1.0, max_relative = 1e-9);
        let d = assemble(ClassicalKind::DirichletClassical, 1.0, 10);
        let kd = condition_number(&d.entries, 1e-10).unwrap();
        assert!((kd / 1.5899e3 - 1.0).abs() < 1e-4, "{kd}");
        let r = assemble(ClassicalKind::RobinClassical, 1.0, 10);
        let kr = condition_number(&r.entries, 1e-10).unwrap();
        assert!((kr / 5.8863e1 - 1.0).abs() < 1e-4, "{kr}");
        let not_spd = DenseMatrix::from_fn(2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(matches!(condition_number(&not_spd, 1e-8), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn bisection_agrees_with_iteration() {
        for kind in [ClassicalKind::RobinClassical, ClassicalKind::DirichletClassical] {
            let a = assemble(kind, 2.0, 10);
            let fast = condition_number(&a.entries, 1e-12).unwrap();
            let slow = condition_number_iterative(&a.entries, 1e-9, 100_000).unwrap();
            assert_relative_eq!(fast, slow, max_relative = 1e-6);
        }
    }

    fn slope(pts: &[(f64, f64)]) -> f64 {
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    fn log_kappa(kind: ClassicalKind, beta: f64, n: usize) -> (f64, f64) {
        let a = assemble(kind, beta, n);
        ((n as f64).ln(), condition_number(&a.entries, 1e-10).unwrap().ln())
    }

    #[test]
    fn growth_is_quadratic() {
        let ns = [10usize, 30, 50, 70];
        let pts: Vec<_> = ns.iter().map(|&n| log_kappa(ClassicalKind::RobinClassical, 2.0, n)).collect();
        let s = slope(&pts);
        assert!((s - 2.0).abs() < 0.15, "{s}");

        // lambda_min drifts down slowly, so the Dirichlet local slope sits above
        // 2 and falls toward it
        let pts: Vec<_> =
            [10usize, 20, 40, 80, 160].iter().map(|&n| log_kappa(ClassicalKind::DirichletClassical, 2.0, n)).collect();
        let local: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        assert!(local.windows(2).all(|w| w[1] < w[0]), "{local:?}");
        assert!(local.iter().all(|&s| s > 2.0 && s < 2.6), "{local:?}");
    }

    #[test]
    fn diagonalized_gram_is_identity() {
        let n = 30;
        let rule = build_rule(2 * n + 1, 2.0).unwrap();
        let bases = [build_robin_basis(1.0, 1.0, 2.0, n).unwrap(), build_dirichlet_basis(1.0, 2.0, n).unwrap()];
        for b in &bases {
            let g = diagonalized_gram(b, &rule).unwrap();
            for i in 0..g.size() {
                for j in 0..g.size() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((g[(i, j)] - e).abs() < 1e-9);
                }
            }
            assert!((condition_number(&g, 1e-12).unwrap() - 1.0).abs() < 1e-8);
        }
    }
}
