use std::io::Write;
use std::process::Command;

use cuspgauge::cli;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    cli::run(std::iter::once("cuspgauge").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}")))
}

#[test]
fn envelope_shape() {
    let (code, v) = json(&["cusp", "analyze", "--v1", "1,0", "--v2", "0.5,3", "--maximal"]);
    assert_eq!(code, 0);
    for key in ["command", "inputs", "results", "verdict", "version", "tolerances"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "cusp analyze");
    assert_eq!(v["tolerances"]["geometry"], 1e-9);
    assert_eq!(v["tolerances"]["ode"], 1e-6);
}

#[test]
fn keys_sorted_and_floats_rounded() {
    let (_, out) = run(&["cusp", "slopes", "--v1", "1,0", "--v2", "0.3,1.7", "--max-length", "4"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    // No float is printed with more than 12 significant digits.
    for token in out.split(|c: char| !(c.is_ascii_digit() || c == '.' || c == 'e' || c == '-')) {
        if token.contains('.') && !token.contains('e') {
            let digits = token.trim_start_matches('-').replace('.', "");
            assert!(digits.trim_start_matches('0').len() <= 12, "{token}");
        }
    }
    assert!(out.ends_with('\n'));
}

#[test]
fn fraction_classification() {
    let (code, v) = json(&["fill", "fraction", "1/23"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "certified");
    assert_eq!(v["results"]["classification"], "certified-threshold");
    let (code, v) = json(&["fill", "fraction", "-7/22"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["classification"], "below-threshold");
}

#[test]
fn csv_outputs() {
    let (code, out) = run(&["cusp", "slopes", "--v1", "1,0", "--v2", "0,2", "--max-length", "3", "--csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("p,q,"), "{header}");
    assert!(lines.any(|l| l.starts_with("1,0,")));

    let (code, out) = run(&["metric", "alpha-curve", "--grid", "6,10", "--samples", "4001", "--csv"]);
    assert_eq!(code, 1, "a row below 2π makes the sweep incomplete");
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "l1,t_star,alpha,kappa_inf,kappa_sup,volume_ratio,status");
    assert!(rows[1].starts_with("6,") && rows[1].ends_with("infeasible"));
    assert!(rows[2].starts_with("10,") && rows[2].ends_with("certified"));
}

#[test]
fn metric_build_report() {
    let (code, v) =
        json(&["metric", "build", "--l1", "10", "--l2", "2", "--t", "0.5", "--samples", "4001", "--collar", "0.5"]);
    assert_eq!(code, 0);
    let cert = &v["results"]["certificate"];
    assert_eq!(cert["valid"], true);
    assert!(cert["a"].as_f64().unwrap() > 0.0);
    assert_eq!(v["results"]["t_source"], "supplied");
    let outer = v["results"]["outer_meridian"].as_f64().unwrap();
    assert!((outer - 10.0 * 0.5f64.exp()).abs() < 1e-8);

    let (code, out) = run(&["metric", "build", "--l1", "10", "--t", "0.5", "--samples", "4001", "--csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("r,f,g,df,dg,d2f,d2g\n"));
    assert_eq!(out.lines().count(), 4002);
}

#[test]
fn bounds_and_surface_reports() {
    let (code, v) = json(&["bounds", "gromov", "--norm", "2", "--length", "7", "--alpha", "1"]);
    assert_eq!(code, 0);
    assert!((v["results"]["hi"].as_f64().unwrap() - 3.09534325300).abs() < 1e-10);
    let (code, v) = json(&["surface", "tradeoff", "--q", "23"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["genus"], 2);
    let (code, v) = json(&["surface", "audit", "--length", "6.283185307179586", "--curves", "1", "--genus", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["consistent"], false);
}

#[test]
fn cover_and_audit() {
    let (code, v) =
        json(&["cover", "certify", "--degree", "3", "--lift", "7:1.5", "--lift", "9:1", "--base-volume", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["cover_volume"], 6.0);
    let (code, _) = json(&["cover", "certify", "--degree", "3", "--lift", "0:1"]);
    assert_eq!(code, 2);
    let (code, v) =
        json(&["fill", "audit-distance", "--v1", "1,0", "--v2", "0,2", "--slope", "1/23", "--reference", "1/0"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["delta"], 23);
}

#[test]
fn catalog_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"schema_version": 1, "records": [
            {{"name": "ok", "cusps": [{{"v1": [1, 0], "v2": [0.2, 7]}}]}},
            {{"name": "flat", "cusps": [{{"v1": [1, 0], "v2": [2, 0]}}]}}
        ]}}"#
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = json(&["catalog", "check", p]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["records"].as_array().unwrap().len(), 1);
    assert_eq!(v["results"]["diagnostics"][0]["name"], "flat");
    let (code, _) = json(&["catalog", "check", p, "--strict"]);
    assert_eq!(code, 2);
    let (code, v) = json(&["fill", "certify", "--catalog", p, "--record", "ok", "--slope", "0/1"]);
    assert_eq!(code, 0, "{v}");
    let (code, _) = json(&["fill", "certify", "--catalog", p, "--record", "flat", "--slope", "0/1"]);
    assert_eq!(code, 2);

    let shipped = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/synthetic_catalog.json");
    let (code, v) = json(&["catalog", "check", shipped, "--strict"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["records"].as_array().unwrap().len(), 4);
}

#[test]
fn help_and_version() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["cusp", "analyze", "--v1", "1"]).0, 2);
}

#[test]
fn in_process_determinism() {
    let args = ["cusp", "short-census", "--v1", "1.3,0.2", "--v2", "-0.4,2.1"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a, b);
}

#[test]
fn tolerance_override() {
    let bin = env!("CARGO_BIN_EXE_cuspgauge");
    let out = Command::new(bin)
        .args(["cusp", "analyze", "--v1", "1,0", "--v2", "0,2"])
        .env("CUSPGAUGE_TOL", "geometry=1e-7,ode=1e-5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tolerances"]["geometry"], 1e-7);
    assert_eq!(v["tolerances"]["ode"], 1e-5);

    // The flag wins over the environment.
    let out = Command::new(bin)
        .args(["--tol", "1e-8", "cusp", "analyze", "--v1", "1,0", "--v2", "0,2"])
        .env("CUSPGAUGE_TOL", "1e-7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tolerances"]["geometry"], 1e-8);

    let out = Command::new(bin).args(["fill", "fraction", "1/23"]).env("CUSPGAUGE_TOL", "ode=2").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
