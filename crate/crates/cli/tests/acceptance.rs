//! Acceptance suite: one PASS/FAIL line per criterion, driven through the
//! command-line entry point. Exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use kazhdan::algebra::{convolve, laplacian, AlgebraElement, Rational};
use kazhdan::groups::CyclicProduct;
use kazhdan_cli::{run, EXIT_NEGATIVE, EXIT_OK};
use nalgebra::{DMatrix, SymmetricEigen};
use serde_json::Value;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn cli(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("kazhdan").chain(args.iter().copied()));
    (out.code, serde_json::from_str(&out.stdout).unwrap_or(Value::Null))
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

/// Smallest nonzero eigenvalue of a symmetric matrix.
fn gap(m: DMatrix<f64>) -> f64 {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev.into_iter().find(|&x| x > 1e-9).unwrap_or(f64::NAN)
}

/// Δ of Z/m with generators ±1 in the regular representation.
fn cyclic_laplacian(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| {
        let d = (i + m - j) % m;
        if d == 0 {
            2.0
        } else if d == 1 || d == m - 1 {
            -1.0
        } else {
            0.0
        }
    })
}

/// Δ of S_3 with generators (1 2), (2 3) in the regular representation.
fn s3_laplacian() -> DMatrix<f64> {
    let perms: Vec<[usize; 3]> =
        vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let compose = |p: &[usize; 3], s: &[usize; 3]| [s[p[0]], s[p[1]], s[p[2]]];
    let gens = [[1, 0, 2], [0, 2, 1]];
    let mut m = DMatrix::from_diagonal_element(6, 6, 2.0);
    for (i, p) in perms.iter().enumerate() {
        for s in &gens {
            let j = perms.iter().position(|q| *q == compose(p, s)).unwrap();
            m[(i, j)] -= 1.0;
        }
    }
    m
}

fn relations_audit() -> Verdict {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for k in 3..=6 {
        let n = k.to_string();
        let (code, v) = cli(&["relations", "--n", &n]);
        ok &= code == EXIT_OK && v["result"]["all_hold"] == true;
        parts.push(format!("n={k}: {} instances", v["result"]["instances"]));
    }
    let t = start.elapsed();
    verdict(ok && t < Duration::from_secs(10), format!("{} ({t:.2?} < 10s)", parts.join(", ")))
}

fn spectral_oracle() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut cases: Vec<(String, usize, f64)> =
        (3..=8).map(|m| (format!("z{m}"), m / 2, gap(cyclic_laplacian(m)))).collect();
    cases.push(("s3".into(), 3, gap(s3_laplacian())));
    for (group, radius, oracle) in &cases {
        let r = radius.to_string();
        let (code, v) = cli(&["sos", "--group", group, "--radius", &r, "--no-certify"]);
        let err = (f(&v["result"]["eps_star"]) - oracle).abs();
        worst = worst.max(err);
        ok &= code == EXIT_OK && err <= 1e-3;
    }
    let z3 = CyclicProduct::cyclic(3);
    let d: AlgebraElement<_, Rational> = laplacian(&z3).unwrap();
    let identity = convolve(&z3, &d, &d) == d.scale(&Rational::from_integer(3.into()));
    let t = start.elapsed();
    verdict(
        ok && identity && t < Duration::from_secs(30),
        format!("max |eps_star - λ₁| = {worst:.2e} <= 1e-3 over z3..z8, s3; Δ² = 3Δ on z3: {identity} ({t:.2?} < 30s)"),
    )
}

fn exact_certification() -> Verdict {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z5.json");
    let p = path.to_str().unwrap();
    let (code, c) = cli(&["certify", "--group", "z5", "--radius", "2", "--out", p]);
    let (vcode, v) = cli(&["verify", "--certificate", p]);
    let eps = f(&c["result"]["certified_epsilon"]["approx"]);
    let oracle = 2.0 - 2.0 * (2.0 * PI / 5.0).cos();
    let t = start.elapsed();
    let ok = code == EXIT_OK
        && vcode == EXIT_OK
        && v["result"]["valid"] == true
        && eps >= 1.3
        && eps <= oracle
        && t < Duration::from_secs(60);
    verdict(ok, format!("certified ε' = {} ≈ {eps:.6} >= 1.3 (oracle {oracle:.6}), verify = {} ({t:.2?} < 60s)", c["result"]["certified_epsilon"]["exact"], v["result"]["valid"]))
}

fn negative_control() -> Verdict {
    let (code, v) = cli(&["sos", "--group", "zd:2", "--radius", "2"]);
    let eps = f(&v["result"]["eps_star"]);
    let flagged = v["result"]["no_certificate"] == true;
    verdict(code == EXIT_NEGATIVE && eps <= 1e-2 && flagged, format!("Z² radius 2: eps_star = {eps:.2e} <= 1e-2, no certificate: {flagged}"))
}

fn sl3_stretch() -> Verdict {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sl3.json");
    let p = path.to_str().unwrap();
    let (code, c) = cli(&[
        "certify", "--group", "sl:3", "--radius", "2", "--epsilon", "0.25", "--symmetrize", "--tol", "1e-8",
        "--out", p,
    ]);
    let (vcode, v) = cli(&["verify", "--certificate", p]);
    let eps = f(&c["result"]["certified_epsilon"]["approx"]);
    let t = start.elapsed();
    let ok = code == EXIT_OK && vcode == EXIT_OK && v["result"]["valid"] == true && eps > 0.0;
    verdict(
        ok && t < Duration::from_secs(7200),
        format!("SL(3,Z), 12 generators, support B_2 (dim {}): feasible at ε = 0.25 >= 0.1, certified ε' ≈ {eps:.6} > 0, verify = {} ({t:.2?})", c["result"]["dimension"], v["result"]["valid"]),
    )
}

fn harmonicity_counting() -> Verdict {
    let start = Instant::now();
    let counts = |n: &str| {
        let (code, v) = cli(&["audit-harmonicity", "--n", n]);
        let r = &v["result"];
        (code, [&r["four_distinct"], &r["three_distinct"], &r["two_distinct"]].map(|x| x.as_u64().unwrap_or(0)))
    };
    let (c4, n4) = counts("4");
    let (c5, n5) = counts("5");
    let t = start.elapsed();
    let ok = c4 == EXIT_OK && c5 == EXIT_OK && n4 == [24, 96, 24] && n5 == [120, 240, 40];
    verdict(ok && t < Duration::from_secs(1), format!("n=4: {n4:?}, n=5: {n5:?} ({t:.2?} < 1s)"))
}

fn figure1_refutation() -> Verdict {
    let start = Instant::now();
    let (c2, two) = cli(&["refute-figure1", "--d34", "2"]);
    let (c3, three) = cli(&["refute-figure1", "--d34", "3"]);
    let t = start.elapsed();
    let ok = c2 == EXIT_NEGATIVE
        && two["result"]["det"] == "-1/4"
        && two["result"]["psd"] == false
        && c3 == EXIT_OK
        && three["result"]["psd"] == true
        && three["result"]["rank"] == 3;
    verdict(
        ok && t < Duration::from_secs(1),
        format!(
            "d34=2: det {} psd {}; d34=3: psd {} rank {} ({t:.2?} < 1s)",
            two["result"]["det"], two["result"]["psd"], three["result"]["psd"], three["result"]["rank"]
        ),
    )
}

struct PhiRuns {
    reports: Vec<(i32, Value)>,
    elapsed: Duration,
}

fn phi_runs() -> PhiRuns {
    let start = Instant::now();
    let reports = ["0", "1", "2"]
        .iter()
        .map(|seed| cli(&["phi-check", "--max-len", "8", "--seed", seed, "--instances", "1000"]))
        .collect();
    PhiRuns { reports, elapsed: start.elapsed() }
}

fn phi_properties(runs: &PhiRuns) -> Verdict {
    let ok = runs.reports.iter().all(|(code, v)| {
        let r = &v["result"];
        *code == EXIT_OK
            && r["instances"].as_u64() >= Some(1000)
            && r["length_satisfied"] == true
            && r["base_feasible"] == true
            && r["base_solution_is_length"] == true
            && r["figure1_feasible"] == false
            && r["figure1_certificate_verified"] == true
    });
    let constraints: Vec<String> = runs.reports.iter().map(|(_, v)| v["result"]["constraints"].to_string()).collect();
    let per_run = runs.elapsed / runs.reports.len() as u32;
    verdict(
        ok && per_run < Duration::from_secs(60),
        format!("seeds 0,1,2 x 1000 instances ({} constraints): length feasible, five-point rules infeasible with verified certificate ({per_run:.2?}/run < 60s)", constraints.join("/")),
    )
}

fn pentagram_soundness(runs: &PhiRuns) -> Verdict {
    let checked: u64 = runs.reports.iter().map(|(_, v)| v["result"]["rewrites_checked"].as_u64().unwrap_or(0)).sum();
    let bad: u64 = runs.reports.iter().map(|(_, v)| v["result"]["rewrite_violations"].as_u64().unwrap_or(u64::MAX)).sum();
    verdict(checked > 0 && bad == 0, format!("{checked} rewrites checked, {bad} violations"))
}

fn main() {
    let runs = phi_runs();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("relation audit", Box::new(relations_audit)),
        ("finite-group spectral oracle", Box::new(spectral_oracle)),
        ("exact certification", Box::new(exact_certification)),
        ("negative control", Box::new(negative_control)),
        ("SL(3,Z) stretch", Box::new(sl3_stretch)),
        ("harmonicity counting", Box::new(harmonicity_counting)),
        ("five-point refutation", Box::new(figure1_refutation)),
        ("phi-system properties", Box::new(|| phi_properties(&runs))),
        ("pentagram soundness", Box::new(|| pentagram_soundness(&runs))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {} {name}: {} - {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
