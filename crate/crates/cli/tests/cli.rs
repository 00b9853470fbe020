use std::fs;
use std::process::{Command, Output};

fn halfline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halfline")).args(args).output().expect("binary runs")
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn converge_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("conv.csv");
    let o = halfline(&[
        "converge",
        "--family",
        "exp-osc",
        "--beta",
        "2",
        "--beta",
        "4",
        "--nlist",
        "8,16,24",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let r = rows(&text);
    assert_eq!(r[0].join(","), "kind,family,h,gamma,mu,beta,N,norm,error,slope,r2,seconds");
    // 2 betas x 3 N x 3 norms, then 2 x 3 fit rows
    assert_eq!(r.len(), 1 + 18 + 6);
    for row in &r[1..19] {
        assert_eq!(row.len(), 12);
        let e: f64 = row[8].parse().unwrap();
        assert!(e.is_finite() && e >= 0.0);
        let mantissa = row[8].split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 16, "{}", row[8]);
        assert!(row[11].is_empty());
    }
    assert!(r[19..].iter().all(|row| row[6].starts_with("fit")));
}

#[test]
fn converge_is_deterministic() {
    let args =
        ["converge", "--family", "exp-osc-robin", "--beta", "1,4", "--nmin", "8", "--nmax", "32", "--nstep", "8"];
    let a = halfline(&args);
    let b = halfline(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = rows(std::str::from_utf8(&a.stdout).unwrap());
    assert!(r[1..].iter().all(|row| row[0] == "robin"));
}

#[test]
fn algebraic_family_sweeps_each_h() {
    let dir = tempfile::tempdir().unwrap();
    let plots = dir.path().join("plots");
    let o = halfline(&[
        "converge",
        "--family",
        "algebraic-plain",
        "--h",
        "2.5",
        "--h",
        "3.5",
        "--beta",
        "4",
        "--nlist",
        "16,32",
        "--norms",
        "L2,L2_winv",
        "--timing",
        "--plot-dir",
        plots.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(std::str::from_utf8(&o.stdout).unwrap());
    let hs: std::collections::BTreeSet<&str> = r[1..].iter().map(|row| row[2].as_str()).collect();
    assert_eq!(hs.len(), 2);
    let timed = r[1..].iter().filter(|row| row[6] != "fit" && row[6] != "fit-rejected");
    assert!(timed.into_iter().all(|row| row[11].parse::<f64>().unwrap() >= 0.0));
    assert_eq!(fs::read_dir(&plots).unwrap().count(), 4);
}

#[test]
fn condition_matches_reference_cell() {
    let o = halfline(&["condition", "--kind", "dirichlet", "--beta", "2", "--nlist", "10,30"]);
    assert!(o.status.success());
    let r = rows(std::str::from_utf8(&o.stdout).unwrap());
    assert_eq!(r[0].join(","), "kind,method,gamma,mu,beta,N,condition,slope,r2");
    let cell = r.iter().find(|row| row[1] == "classical" && row[5] == "30").unwrap();
    let kappa: f64 = cell[6].parse().unwrap();
    assert!((kappa / 6.8162e3 - 1.0).abs() < 1e-4, "{kappa}");
    for row in r.iter().filter(|row| row[1] == "diagonalized") {
        assert!((row[6].parse::<f64>().unwrap() - 1.0).abs() <= 1e-8);
    }
    assert!(r.last().unwrap()[5] == "fit");
}

#[test]
fn selftest_passes() {
    let o = halfline(&["selftest"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() >= 4 && text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn invalid_parameters_exit_with_2() {
    for args in [
        &["converge", "--family", "exp-osc", "--nlist", "16,8"][..],
        &["converge", "--family", "exp-osc", "--gamma", "-1"],
        &["converge", "--family", "algebraic-osc", "--h", "0.5"],
        &["converge", "--family", "nope"],
        &["condition", "--beta", "0"],
    ] {
        let o = halfline(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}
