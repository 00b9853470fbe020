use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use halfline::classical::DIRICHLET_REFERENCE;
use halfline::experiment::{
    run_conditioning_sweep, run_convergence, write_conditioning_csv, write_convergence_csv, write_plot_files,
    ExperimentSpec, Family, Norm,
};
use halfline::selftest::run_selftest;
use halfline::{BasisKind, ClassicalKind, Error};

/// Laguerre spectral solvers on the half line: convergence and conditioning experiments.
#[derive(Parser)]
#[command(name = "halfline", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error-versus-N sweep for a manufactured solution.
    Converge(ConvergeArgs),
    /// Condition numbers of classical and diagonalized stiffness matrices.
    Condition(ConditionArgs),
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Args)]
struct ConvergeArgs {
    /// dirichlet or robin; defaults to the family's own problem kind
    #[arg(long)]
    kind: Option<BasisKind>,
    #[arg(long)]
    family: Family,
    /// Decay exponent of the algebraic families (repeatable)
    #[arg(long = "h", num_args = 1.., value_delimiter = ',')]
    h: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
    /// Robin coefficient; 1 for Robin and unused for Dirichlet when omitted
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Free constant of the exp-osc, algebraic-plain and algebraic-osc families
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    eta: f64,
    #[arg(long = "beta", num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    beta: Vec<f64>,
    #[arg(long, requires_all = ["nmax", "nstep"], conflicts_with = "nlist")]
    nmin: Option<usize>,
    #[arg(long, requires_all = ["nmin", "nstep"])]
    nmax: Option<usize>,
    #[arg(long, requires_all = ["nmin", "nmax"])]
    nstep: Option<usize>,
    /// Comma-separated ascending N values
    #[arg(long, value_delimiter = ',')]
    nlist: Vec<usize>,
    /// Comma-separated subset of L2, H1, L2_winv, L2_1pwinv
    #[arg(long, value_delimiter = ',')]
    norms: Vec<Norm>,
    /// Error norms use oversample * (2N+1) quadrature nodes
    #[arg(long, default_value_t = 1)]
    oversample: usize,
    /// CSV destination; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall time per (beta, N) cell in the seconds column
    #[arg(long)]
    timing: bool,
    /// Write gnuplot two-column files per (beta, norm) into this directory
    #[arg(long)]
    plot_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ConditionArgs {
    /// Restrict to one problem kind; both by default
    #[arg(long)]
    kind: Option<BasisKind>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long = "beta", num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    beta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    nlist: Vec<usize>,
    /// Relative tolerance of the extremal eigenvalues
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    Check(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

const DEFAULT_H: [f64; 3] = [2.5, 3.5, 4.5];

fn n_grid(args: &ConvergeArgs) -> Result<Option<Vec<usize>>, Error> {
    if let (Some(lo), Some(hi), Some(step)) = (args.nmin, args.nmax, args.nstep) {
        if step == 0 || lo > hi {
            return Err(Error::InvalidParameter(format!("bad N range {lo}..={hi} step {step}")));
        }
        return Ok(Some((lo..=hi).step_by(step).collect()));
    }
    Ok((!args.nlist.is_empty()).then(|| args.nlist.clone()))
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn converge(args: ConvergeArgs) -> Result<(), Failure> {
    let kind = args.kind.unwrap_or(args.family.natural_kind());
    let mut base = ExperimentSpec::new(kind, args.family);
    base.gamma = args.gamma;
    if let Some(mu) = args.mu {
        base.mu = mu;
    }
    base.eta = args.eta;
    if !args.beta.is_empty() {
        base.betas = args.beta.clone();
    }
    if let Some(ns) = n_grid(&args)? {
        base.ns = ns;
    }
    if !args.norms.is_empty() {
        base.norms = args.norms.clone();
    }
    base.oversample = args.oversample;
    base.timing = args.timing;

    let hs: Vec<f64> = match (args.family.is_algebraic(), args.h.is_empty()) {
        (false, _) => vec![base.h],
        (true, true) => DEFAULT_H.to_vec(),
        (true, false) => args.h.clone(),
    };
    let mut reports = Vec::with_capacity(hs.len());
    for h in hs {
        let spec = ExperimentSpec { h, ..base.clone() };
        log::info!("{} {} h={} over {} cells", spec.kind, spec.family, h, spec.betas.len() * spec.ns.len());
        let report = run_convergence(&spec)?;
        for fit in report.fits.iter().filter_map(|f| f.fit.map(|l| (f, l))) {
            log::info!("beta={} {}: slope {:.4} (r2 {:.4})", fit.0.beta, fit.0.norm, fit.1.slope, fit.1.r2);
        }
        if let Some(dir) = &args.plot_dir {
            write_plot_files(&report, dir)?;
        }
        reports.push(report);
    }
    write_convergence_csv(&reports, output(&args.out)?)?;
    Ok(())
}

fn condition(args: ConditionArgs) -> Result<(), Failure> {
    let kinds = match args.kind {
        Some(BasisKind::Dirichlet) => vec![ClassicalKind::DirichletClassical],
        Some(BasisKind::Robin) => vec![ClassicalKind::RobinClassical],
        None => vec![ClassicalKind::DirichletClassical, ClassicalKind::RobinClassical],
    };
    let betas = if args.beta.is_empty() { vec![1.0, 2.0, 3.0] } else { args.beta };
    let ns: Vec<usize> =
        if args.nlist.is_empty() { DIRICHLET_REFERENCE.iter().map(|r| r.0).collect() } else { args.nlist };
    let report = run_conditioning_sweep(&kinds, args.gamma, args.mu, &betas, &ns, args.tol)?;
    write_conditioning_csv(&report, output(&args.out)?)?;
    Ok(())
}

fn selftest() -> Result<(), Failure> {
    let checks = run_selftest()?;
    let mut failed = 0;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(Failure::Check(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Converge(a) => converge(a),
        Command::Condition(a) => condition(a),
        Command::Selftest => selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Check(n)) => {
            eprintln!("{n} self-test check(s) failed");
            ExitCode::from(3)
        }
    }
}
