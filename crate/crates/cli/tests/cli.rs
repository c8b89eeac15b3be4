use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn invlog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invlog"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("invlog-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(invlog(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(invlog(&["verify", "--theorem", "1.1", "--bogus"]).status.code(), Some(64));
    assert_eq!(invlog(&["verify", "--theorem", "9.9", "--grid", "32"]).status.code(), Some(64));
    assert_eq!(invlog(&["search", "--class", "nope", "--grid", "32"]).status.code(), Some(64));
    assert_eq!(invlog(&["search", "--class", "sl", "--grid", "8"]).status.code(), Some(64));
    assert_eq!(invlog(&["--help"]).status.code(), Some(0));
}

#[test]
fn known_discrepancies_exit_2_and_strict_exits_1() {
    let out = invlog(&["verify", "--theorem", "1.4", "--grid", "48"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("A = 4/7"));
    assert!(!text.contains("[FAIL]"));
    let strict = invlog(&["verify", "--theorem", "1.4", "--grid", "48", "--strict"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn json_report_is_deterministic() {
    let args = ["verify", "--theorem", "all", "--grid", "32", "--json", "--seed", "3"];
    let first = invlog(&args);
    let second = invlog(&args);
    assert_eq!(first.stdout, second.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 4);
    assert_eq!(doc["reports"][2]["class"], "starlike-lune");
    let upper = doc["reports"][0]["closed_form_upper"].as_f64().unwrap();
    assert_eq!(upper, 0.5);
}

#[test]
fn tolerance_flag_reaches_checks() {
    let out = invlog(&["verify", "--theorem", "1.2", "--grid", "32", "--json", "--tolerance", "1e-3"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let check = &doc["reports"][0]["checks"][0];
    assert_eq!(check["tolerance"].as_f64().unwrap(), 1e-3);
}

#[test]
fn search_reports_both_extrema() {
    let out = invlog(&["search", "--class", "convex-lune", "--grid", "32", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let max = doc["max"]["value"].as_f64().unwrap();
    let min = doc["min"]["value"].as_f64().unwrap();
    assert!((max - 1.0 / 12.0).abs() < 1e-6);
    assert!((min + 4.0 / 21.0).abs() < 1e-6);
}

#[test]
fn extremal_csv_lists_coefficients() {
    let out = invlog(&["extremal", "--name", "f2", "--order", "7", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,re,im");
    assert_eq!(lines.len(), 9);
    let a3: f64 = lines[4].split(',').nth(1).unwrap().parse().unwrap();
    assert!((a3 - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(invlog(&["extremal", "--name", "f1", "--a", "0.5"]).status.code(), Some(64));
}

#[test]
fn render_lune_writes_svg_and_csv() {
    let svg = scratch("lune.svg");
    let out = invlog(&["render-lune", "--out", svg.to_str().unwrap(), "--samples", "64"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let body = fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<?xml") || body.starts_with("<svg"));
    assert!(body.contains("</svg>"));
    let csv = fs::read_to_string(svg.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("theta,re,im"));
}

#[test]
fn render_image_checks_radius() {
    let svg = scratch("f4.svg");
    let path = svg.to_str().unwrap();
    let out = invlog(&["render-image", "--name", "f4", "--radius", "0.9", "--samples", "32", "--out", path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(svg.with_extension("csv")).unwrap().lines().count() == 1 + 33);
    let bad = invlog(&["render-image", "--name", "f1", "--radius", "1.2", "--out", path]);
    assert_eq!(bad.status.code(), Some(64));
}
