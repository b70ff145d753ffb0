use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dgreen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgreen"))
        .args(args)
        .env_remove("DG_MEMORY_BUDGET_MB")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    v["report"].clone()
}

/// Data rows of a CSV file, comment and header lines removed.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn coeffs_for_lax_wendroff() {
    let r = report(&dgreen(&["coeffs", "--scheme", "lw", "--lambda", "0.75", "--format", "json"]));
    assert_eq!(r["alpha"].as_f64().unwrap(), 0.75);
    assert!((r["c3"].as_f64().unwrap() - 0.0546875).abs() <= 1e-12);
    assert!((r["c4"].as_f64().unwrap() - 0.03076171875).abs() <= 1e-12);
    assert_eq!(r["admissible"], true);
    let text = stdout(&dgreen(&["coeffs", "--scheme", "lw", "--lambda", "0.75"]));
    assert!(text.contains("admissible") && text.contains("c3"));
}

#[test]
fn coeffs_for_the_shift() {
    let o = dgreen(&["coeffs", "--scheme", "lw", "--lambda", "1.0", "--format", "json"]);
    assert_eq!(report(&o)["admissible"], false);
    let o = dgreen(&["coeffs", "--scheme", "lw", "--lambda", "1.0", "--require-admissible"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn coeffs_for_custom_upwind() {
    let r = report(&dgreen(&["coeffs", "--custom", "0:0.25,1:0.75", "--format", "json"]));
    assert!((r["kappa2"].as_f64().unwrap() - 0.1875).abs() <= 1e-12);
    assert_eq!(r["admissible"], false);
}

#[test]
fn invalid_configurations() {
    for args in [
        &["coeffs", "--scheme", "lw"][..],
        &["coeffs", "--scheme", "lw", "--lambda", "0.5", "--custom", "0:1"],
        &["coeffs", "--scheme", "custom"],
        &["coeffs", "--custom", "0:0.5:1:2"],
        &["coeffs", "--scheme", "lw", "--lambda", "1.5"],
        &["green", "--scheme", "lw", "--lambda", "0.5", "--n", "0"],
        &["bounds", "--scheme", "lw", "--lambda", "0.5", "--format", "csv"],
        &["growth", "--scheme", "lw", "--lambda", "0.5", "--n-list", "100,10"],
        &["evolve", "--scheme", "lw", "--lambda", "0.5", "--dx", "0", "--t", "1"],
        &["evolve", "--scheme", "lw", "--lambda", "0.5", "--dx", "0.1", "--t", "-1"],
        &["frobnicate"],
    ] {
        let o = dgreen(args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
}

#[test]
fn green_first_step_is_the_stencil() {
    let text = stdout(&dgreen(&["green", "--scheme", "lw", "--lambda", "0.75", "--n", "1"]));
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# dgreen"));
    assert_eq!(lines.next().unwrap(), "j,re,im,abs,approx_G,approx_H");
    let r = rows(&text);
    let want = [(-1, -0.09375), (0, 0.4375), (1, 0.65625)];
    assert_eq!(r.len(), 3);
    for (row, (j, a)) in r.iter().zip(want) {
        assert_eq!(row[0].parse::<i64>().unwrap(), j);
        assert_eq!(f(&row[1]), a);
        assert_eq!(f(&row[2]), 0.0);
        assert!(!row[4].is_empty() && !row[5].is_empty());
    }
}

#[test]
fn green_methods_agree() {
    let run = |m: &str| {
        stdout(&dgreen(&["green", "--scheme", "bw", "--lambda", "1.5", "--n", "50", "--method", m]))
    };
    let (d, s) = (rows(&run("direct")), rows(&run("spectral")));
    assert_eq!(d.len(), s.len());
    for (a, b) in d.iter().zip(&s) {
        assert_eq!(a[0], b[0]);
        for k in 1..6 {
            if a[k].is_empty() {
                assert!(b[k].is_empty());
            } else {
                assert!((f(&a[k]) - f(&b[k])).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn green_approximations_blank_when_not_defined() {
    let up = rows(&stdout(&dgreen(&["green", "--custom", "0:0.5,1:0.5", "--n", "4"])));
    assert!(up.iter().all(|r| r[4].is_empty() && r[5].is_empty()));
    // c3 < 0: the Airy profile is not defined
    let bw = rows(&stdout(&dgreen(&["green", "--scheme", "bw", "--lambda", "0.5", "--n", "4"])));
    assert!(bw.iter().all(|r| !r[4].is_empty() && r[5].is_empty()));
}

#[test]
fn memory_budget_refusal_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_dgreen"))
        .args(["green", "--scheme", "lw", "--lambda", "0.75", "--n", "200000", "--method", "spectral"])
        .arg("--out")
        .arg(&out)
        .env("DG_MEMORY_BUDGET_MB", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str| {
        let p = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_dgreen"))
            .args(["green", "--scheme", "lw", "--lambda", "0.75", "--n", "300", "--out"])
            .arg(&p)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        fs::read(&p).unwrap()
    };
    let a = write("a.csv");
    assert_eq!(a, write("b.csv"));
    assert!(!a.contains(&b'\r'));
}

fn evolve(scheme: &str, t: &str) -> Vec<(f64, f64, f64)> {
    let o = dgreen(&["evolve", "--scheme", scheme, "--lambda", "0.75", "--dx", "0.005", "--t", t]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().nth(1).unwrap(), "x,u0,un");
    rows(&text).iter().map(|r| (f(&r[0]), f(&r[1]), f(&r[2]))).collect()
}

#[test]
fn evolve_at_time_zero_is_the_initial_step() {
    let r = evolve("lw", "0");
    assert!(r.iter().all(|&(_, u0, un)| u0 == un));
    let at = |x: f64| r.iter().find(|p| (p.0 - x).abs() < 1e-9).unwrap().1;
    assert_eq!(at(0.0025), 1.0);
    assert_eq!(at(0.5025), 0.0);
    assert_eq!(at(-0.5025), 0.0);
}

#[test]
fn step_propagation_oscillates_on_the_predicted_side() {
    // exact solution at t = 2 is the indicator of [1.5, 2.5]
    let undershoot = |r: &[(f64, f64, f64)], lo: f64, hi: f64| {
        r.iter()
            .filter(|p| p.0 > lo && p.0 < hi)
            .map(|p| p.2)
            .fold(f64::INFINITY, f64::min)
    };
    let lw = evolve("lw", "2");
    let bw = evolve("bw", "2");
    assert!(undershoot(&lw, 1.0, 1.5) < -0.01);
    assert!(undershoot(&lw, 2.55, 3.5) > -1e-3);
    assert!(undershoot(&bw, 2.5, 3.0) < -0.01);
    assert!(undershoot(&bw, 0.5, 1.45) > -1e-3);
    for r in [&lw, &bw] {
        let sup = r.iter().map(|p| p.2.abs()).fold(0.0, f64::max);
        assert!(sup > 1.0 && sup < 2.0);
    }
}

#[test]
fn growth_reports() {
    let r = report(&dgreen(&["growth", "--scheme", "bw", "--lambda", "1.5", "--n-list", "100,1000"]));
    assert!((r["ell_target"].as_f64().unwrap() - 0.753160201684176303709).abs() <= 1e-12);
    let r = report(&dgreen(&["growth", "--custom", "0:0.25,1:0.75", "--n-list", "10,100,1000"]));
    assert!(r["ell_target"].is_null());
    for (n, ratio) in [10.0_f64, 100.0, 1000.0].iter().zip(r["ratios"].as_array().unwrap()) {
        assert!((ratio.as_f64().unwrap() - n.powf(-0.125)).abs() <= 1e-12);
    }
}

#[test]
fn growth_strict_exit() {
    let args = ["growth", "--scheme", "lw", "--lambda", "0.75", "--n-list", "100,1000"];
    let o = dgreen(&[&args[..], &["--tolerance", "0.5", "--strict"]].concat());
    assert_eq!(code(&o), 0);
    let o = dgreen(&[&args[..], &["--tolerance", "0.01", "--strict"]].concat());
    assert_eq!(code(&o), 5);
    assert!(!o.stdout.is_empty());
    let o = dgreen(&[&args[..], &["--tolerance", "0.01"]].concat());
    assert_eq!(code(&o), 0);
}

#[test]
fn bounds_reports() {
    let r = report(&dgreen(&["bounds", "--scheme", "lw", "--lambda", "0.75", "--strict"]));
    assert_eq!(r["stable"], true);
    assert_eq!(r["fast_side"]["spatial_side"], "right");
    let r = report(&dgreen(&["bounds", "--scheme", "bw", "--lambda", "0.5", "--n-list", "250,500"]));
    assert_eq!(r["fast_side"]["sides_switched"], true);
    assert_eq!(r["oscillatory_side"]["spatial_side"], "right");
    let o = dgreen(&["bounds", "--custom", "0:0.5,1:0.5"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn bv_report() {
    let r = report(&dgreen(&["bv", "--scheme", "lw", "--lambda", "0.75", "--n-list", "10,100,1000", "--strict"]));
    let sup = r["sup_overall"].as_f64().unwrap();
    assert!(sup.is_finite() && sup >= 1.0);
    for (a, b) in r["sup_cumsum_per_n"]
        .as_array()
        .unwrap()
        .iter()
        .zip(r["heaviside_linf_per_n"].as_array().unwrap())
    {
        assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn out_overwrites_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    fs::write(&p, "old").unwrap();
    let run = |lambda: &str, p: &Path| {
        Command::new(env!("CARGO_BIN_EXE_dgreen"))
            .args(["coeffs", "--scheme", "lw", "--lambda", lambda, "--format", "json", "--out"])
            .arg(p)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("7", &p)), 2);
    assert_eq!(fs::read_to_string(&p).unwrap(), "old");
    assert_eq!(code(&run("0.5", &p)), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["report"]["alpha"], 0.5);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}
