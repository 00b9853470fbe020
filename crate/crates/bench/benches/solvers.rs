use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use halfline::classical::{assemble_classical, condition_number, ClassicalKind};
use halfline::experiment::{Family, Manufactured};
use halfline::laguerre::{eval_fun_all, LaguerreIndex};
use halfline::{build_dirichlet_basis, build_lift, build_robin_basis, build_rule, solve_dirichlet, solve_robin};
use halfline::{EllipticProblem, LiftDegree};

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_rule");
    for m in [65, 257, 1025] {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| b.iter(|| build_rule(black_box(m), 2.0)));
    }
    g.finish();
}

fn evaluation(c: &mut Criterion) {
    let index = LaguerreIndex::new(-1.0, 2.0).unwrap();
    c.bench_function("eval_fun_all n=512", |b| b.iter(|| eval_fun_all(index, 512, black_box(37.5))));
}

fn solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    let u = Manufactured::new(Family::ExpOsc, 0.0, 1.0).unwrap();
    let ur = Manufactured::new(Family::ExpOscRobin, 0.0, 0.0).unwrap();
    for n in [32, 128, 512] {
        let rule = build_rule(2 * n + 1, 4.0).unwrap();
        let basis = build_dirichlet_basis(1.0, 4.0, n).unwrap();
        let lift = build_lift(1.0, 4.0, LiftDegree::Finite(n), 0.0).unwrap();
        let problem = EllipticProblem::dirichlet(1.0, 1.0, |x| u.rhs(1.0, x)).unwrap();
        g.bench_with_input(BenchmarkId::new("dirichlet", n), &n, |b, _| {
            b.iter(|| solve_dirichlet(&problem, &basis, &lift, &rule).unwrap())
        });
        let basis = build_robin_basis(1.0, 1.0, 4.0, n).unwrap();
        let problem = EllipticProblem::robin(1.0, 1.0, 0.0, |x| ur.rhs(1.0, x)).unwrap();
        g.bench_with_input(BenchmarkId::new("robin", n), &n, |b, _| {
            b.iter(|| solve_robin(&problem, &basis, &rule).unwrap())
        });
    }
    g.finish();
}

fn classical(c: &mut Criterion) {
    let mut g = c.benchmark_group("classical_condition");
    g.sample_size(10);
    for n in [30, 70, 150] {
        let rule = build_rule(n + 2, 2.0).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let m = assemble_classical(ClassicalKind::DirichletClassical, 1.0, 1.0, 2.0, n, &rule).unwrap();
                condition_number(&m.entries, 1e-12).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, quadrature, evaluation, solvers, classical);
criterion_main!(benches);
