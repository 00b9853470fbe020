//! Spectral Laguerre methods for second-order elliptic problems on the half-line.
//!
//! The crate evaluates generalized Laguerre polynomials and functions for any
//! real `alpha` (negative integers included), builds Gauss-Laguerre rules,
//! constructs Sobolev-orthogonal bases that diagonalize the Robin and Dirichlet
//! stiffness forms, and solves `-u'' + gamma u = f` with them.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod basis;
pub mod classical;
pub mod error;
pub mod experiment;
pub mod laguerre;
pub mod linalg;
pub mod quadrature;
pub mod selftest;
pub mod solver;

pub use basis::{
    build_dirichlet_basis, build_lift, build_robin_basis, pivot_limit, BasisKind, DiagonalBasis, LiftDegree,
    LiftFunction,
};
pub use classical::{assemble_classical, condition_number, diagonalized_gram, ClassicalKind, StiffMatrix};
pub use error::{Error, Result};
pub use experiment::{
    run_conditioning_sweep, run_convergence, ConvergenceReport, ExperimentSpec, Family, Manufactured, Norm,
};
pub use laguerre::{
    eval_fun_all, eval_fun_derivative_all, eval_fun_derivatives, eval_poly_all, project, sobolev_gram,
    sobolev_inner_product, Differentiable, LaguerreIndex,
};
pub use quadrature::{build_rule, QuadratureRule};
pub use solver::{evaluate, solve_dirichlet, solve_robin, EllipticProblem, SpectralSolution};
