use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn novikov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_novikov")).args(args).output().expect("spawn novikov")
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let out = novikov(&a);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    v["result"].clone()
}

fn pairs(v: &Value) -> Vec<(i64, i64)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|a| (a["m"].as_i64().unwrap(), a["n"].as_i64().unwrap()))
        .collect()
}

#[test]
fn angles_lists_three_square_rows() {
    let r = json(&["angles", "--symmetry", "4", "--max-m", "3"]);
    let mut got = pairs(&r);
    got.sort();
    assert_eq!(got, [(2, 1), (3, 1), (3, 2)]);
    let tans: Vec<(i64, i64)> = r
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (a["tan_value"]["num"].as_i64().unwrap(), a["tan_value"]["den"].as_i64().unwrap()))
        .collect();
    for t in [(3, 4), (4, 3), (5, 12)] {
        assert!(tans.contains(&t), "{tans:?}");
    }
}

#[test]
fn approx_follows_silver_ratio() {
    let r = json(&["approx", "--symmetry", "4", "--alpha", "0.785398", "--count", "3"]);
    let angles: Vec<Value> = r["approximants"].as_array().unwrap().iter().map(|x| x["angle"].clone()).collect();
    assert_eq!(pairs(&Value::Array(angles)), [(2, 1), (5, 2), (12, 5)]);
}

#[test]
fn degrees_flag_matches_radians() {
    let a = json(&["approx", "--alpha", "45", "--degrees", "--count", "2"]);
    let b = json(&["approx", "--alpha", "0.7853981633974483", "--count", "2"]);
    assert_eq!(a["approximants"], b["approximants"]);
}

#[test]
fn exit_codes() {
    assert_eq!(novikov(&["angles"]).status.code(), Some(1));
    let out = novikov(&["periods", "--m", "4", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "not_coprime");
    // T′ = 3T/8 is rational
    let out = novikov(&["verify", "incommensurate", "--alpha", "0.3", "--period2", "2.356194490192345"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "commensurate_collision");
    // generic angles have no period cell
    assert_eq!(novikov(&["critical", "--alpha", "0.3"]).status.code(), Some(1));
}

#[test]
fn failed_check_exits_two() {
    // at α = 1 the approximants are (3,1) with N₀ = 5 and (7,2) with N₀ = 53,
    // and Δ grows from the first to the second
    let out = novikov(&["verify", "convergence", "--alpha", "1.0", "--depth", "2", "--json"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["widths_decreasing"], false);
    assert_eq!(v["result"]["pass"], false);
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"symmetry": 4, "max_m": 3, "json": true}"#).unwrap();
    let out = novikov(&["angles", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"].as_array().unwrap().len(), 3);
    let out = novikov(&["angles", "--max-m", "4", "--config", cfg.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"].as_array().unwrap().len(), 5);
}

#[test]
fn out_dir_receives_report_and_figures() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = novikov(&["net", "--m", "2", "--n", "1", "--out", d]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["net.json", "net.txt", "net.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let svg = fs::read_to_string(dir.path().join("net.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn sample_writes_grid_and_heatmap() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.nvgrid");
    let p = dir.path().join("g.ppm");
    let out = novikov(&[
        "sample", "--m", "2", "--n", "1", "--nx", "32", "--ny", "32",
        "--grid-out", g.to_str().unwrap(), "--ppm", p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read(&g).unwrap().starts_with(b"NVGRID01"));
    assert!(fs::read(&p).unwrap().starts_with(b"P6"));
}

#[test]
fn sweep_csv_rows_follow_angles() {
    let out = novikov(&["sweep", "--max-m", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,n,alpha,c0,width,tol");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("3,2,"));
}
