//! CSV and plot-data writers.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::{ConditionMethod, ConditioningReport, ConvergenceReport};

/// Significant digits of every float written.
pub const CSV_FLOAT_DIGITS: usize = 16;

fn num(x: f64) -> String {
    format!("{:.*e}", CSV_FLOAT_DIGITS - 1, x)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// For each report, one row per `(beta, N, norm)` followed by one fit row per
/// `(beta, norm)`, all under a single header. Fit rows carry `fit` or
/// `fit-rejected` in the `N` column and no error.
pub fn write_convergence_csv<W: Write>(reports: &[ConvergenceReport], mut out: W) -> io::Result<()> {
    writeln!(out, "kind,family,h,gamma,mu,beta,N,norm,error,slope,r2,seconds")?;
    for report in reports {
        convergence_rows(report, &mut out)?;
    }
    out.flush()
}

fn convergence_rows<W: Write>(report: &ConvergenceReport, out: &mut W) -> io::Result<()> {
    let spec = &report.spec;
    let h = if spec.family.is_algebraic() { num(spec.h) } else { String::new() };
    let prefix = format!("{},{},{},{},{}", spec.kind.name(), spec.family.name(), h, num(spec.gamma), num(spec.mu));
    for r in &report.records {
        for (i, norm) in spec.norms.iter().enumerate() {
            writeln!(
                out,
                "{prefix},{},{},{},{},{},,{}",
                num(r.beta),
                r.n,
                norm.name(),
                num(r.errors[i]),
                opt(r.local_slopes[i]),
                opt(r.seconds)
            )?;
        }
    }
    for f in &report.fits {
        let (tag, slope, r2) = match f.fit {
            Some(fit) => (if fit.accepted() { "fit" } else { "fit-rejected" }, Some(fit.slope), Some(fit.r2)),
            None => ("fit-rejected", None, None),
        };
        writeln!(out, "{prefix},{},{tag},{},,{},{},", num(f.beta), f.norm.name(), opt(slope), opt(r2))?;
    }
    Ok(())
}

/// One row per cell, then one `fit` row per `(kind, beta)` for the classical matrices.
pub fn write_conditioning_csv<W: Write>(report: &ConditioningReport, mut out: W) -> io::Result<()> {
    writeln!(out, "kind,method,gamma,mu,beta,N,condition,slope,r2")?;
    for r in &report.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},,",
            r.kind.name(),
            r.method.name(),
            num(r.gamma),
            num(r.mu),
            num(r.beta),
            r.n,
            num(r.condition)
        )?;
    }
    let (gamma, mu) = report.records.first().map(|r| (r.gamma, r.mu)).unwrap_or((0.0, 0.0));
    for f in &report.fits {
        let (slope, r2) = f.fit.map(|l| (Some(l.slope), Some(l.r2))).unwrap_or((None, None));
        writeln!(
            out,
            "{},{},{},{},{},fit,,{},{}",
            f.kind.name(),
            ConditionMethod::Classical.name(),
            num(gamma),
            num(mu),
            num(f.beta),
            opt(slope),
            opt(r2)
        )?;
    }
    out.flush()
}

/// Two-column `N error` files, one per `(beta, norm)`, named
/// `<family>_<kind>[_h<h>]_b<beta>_<norm>.dat`. Returns the paths written.
pub fn write_plot_files(report: &ConvergenceReport, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let spec = &report.spec;
    let mut paths = Vec::new();
    for &beta in &spec.betas {
        for (i, norm) in spec.norms.iter().enumerate() {
            let h = if spec.family.is_algebraic() { format!("_h{}", spec.h) } else { String::new() };
            let name = format!("{}_{}{h}_b{}_{}.dat", spec.family.name(), spec.kind.name(), beta, norm.name());
            let path = dir.join(name);
            let mut file = io::BufWriter::new(fs::File::create(&path)?);
            writeln!(file, "# N {}", norm.name())?;
            for r in report.records.iter().filter(|r| r.beta == beta) {
                writeln!(file, "{} {}", r.n, num(r.errors[i]))?;
            }
            file.flush()?;
            paths.push(path);
        }
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisKind;
    use crate::experiment::{run_convergence, ExperimentSpec, Family};

    fn small_report() -> ConvergenceReport {
        let mut s = ExperimentSpec::new(BasisKind::Dirichlet, Family::ExpOsc);
        s.betas = vec![2.0];
        s.ns = vec![8, 16, 24, 32];
        run_convergence(&s).unwrap()
    }

    #[test]
    fn convergence_csv_layout() {
        let report = small_report();
        let mut buf = Vec::new();
        write_convergence_csv(std::slice::from_ref(&report), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kind,family,h,gamma,mu,beta,N,norm,error,slope,r2,seconds");
        assert_eq!(lines.len(), 1 + 4 * 3 + 3);
        assert!(lines.iter().all(|l| l.split(',').count() == 12));
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first[0], "dirichlet");
        assert_eq!(first[2], "");
        assert_eq!(first[6], "8");
        let err: f64 = first[8].parse().unwrap();
        assert!((err - report.records[0].errors[0]).abs() <= 1e-15 * err);
        assert!(lines.last().unwrap().split(',').nth(6).unwrap().starts_with("fit"));
    }

    #[test]
    fn plot_files_written() {
        let report = small_report();
        let dir = std::env::temp_dir().join(format!("halfline-plot-{}", std::process::id()));
        let paths = write_plot_files(&report, &dir).unwrap();
        assert_eq!(paths.len(), 3);
        let body = fs::read_to_string(&paths[0]).unwrap();
        assert_eq!(body.lines().count(), 5);
        fs::remove_dir_all(&dir).unwrap();
    }
}
