use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ehrhard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehrhard")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const FIG2_TOP: &str = r#"{"base_dim":1,"breakpoints":[["-inf",-1,1,"inf"]],"values":[0.3,1.0,0.6]}"#;
const ONE_CELL: &str = r#"{"base_dim":1,"breakpoints":[["-inf","inf"]],"values":[0.4]}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn phi_and_psi_print_numbers() {
    let o = ehrhard(&["phi", "1"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.158655253931457051).abs() < 1e-16);
    let o = ehrhard(&["psi", "0.5"]);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.0);
    let o = ehrhard(&["phi", "-inf"]);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 1.0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(ehrhard(&["psi", "1.5"]).status.code(), Some(1));
    assert_eq!(ehrhard(&["nonsense"]).status.code(), Some(1));
    assert_eq!(ehrhard(&["catalog", "no-such-entry"]).status.code(), Some(1));
    assert_eq!(ehrhard(&["catalog", "mistico", "--resolution", "0.3"]).status.code(), Some(1));
    assert_eq!(ehrhard(&["--help"]).status.code(), Some(0));
}

#[test]
fn rigidity_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", FIG2_TOP);
    for method in ["theorem", "planar", "search"] {
        let o = ehrhard(&["rigidity", "--profile", &p, "--method", method]);
        assert!(o.status.success(), "{method}");
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["verdict"], "non-rigid", "{method}");
    }
    let q = write(dir.path(), "q.json", ONE_CELL);
    let v: Value = serde_json::from_str(&stdout(&ehrhard(&["rigidity", "--profile", &q]))).unwrap();
    assert_eq!(v["verdict"], "rigid");
}

#[test]
fn counterexample_exit_code_follows_equality() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", FIG2_TOP);
    let part = write(dir.path(), "part.json", r#"{"minus":[2]}"#);
    let o = ehrhard(&["counterexample", "--profile", &p, "--partition", &part]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equality"], true);
    assert_eq!(v["verification"]["necessary_condition_holds"], true);

    // Reflecting across a connected G costs perimeter.
    let q = write(
        dir.path(),
        "q.json",
        r#"{"base_dim":1,"breakpoints":[["-inf",0,"inf"]],"values":[0.3,0.6]}"#,
    );
    let part = write(dir.path(), "part2.json", r#"{"plus":[0],"minus":[1]}"#);
    let o = ehrhard(&["counterexample", "--profile", &q, "--partition", &part]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["counterexample"]["excess"].as_f64().unwrap() > 0.0);

    let bad = write(dir.path(), "bad.json", r#"{"minus":[7]}"#);
    assert_eq!(ehrhard(&["counterexample", "--profile", &p, "--partition", &bad]).status.code(), Some(1));
}

#[test]
fn connectedness_with_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", FIG2_TOP);
    let o = ehrhard(&["connectedness", "--profile", &p, "--brute-force"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["disconnects"], true);
    assert_eq!(v["brute_force"]["agrees"], true);
    assert_eq!(v["witness"]["kind"], "partition");
}

#[test]
fn perimeter_and_symmetrize() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.json", r#"{"grid":{"breakpoints":[["-inf","inf"]]},"sections":[[[0,"inf"]]]}"#);
    let o = ehrhard(&["perimeter", "--set", &e, "--breakdown"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // Isoperimetric profile at volume 1/2: e^{-0^2/2} = 1.
    assert!((v["perimeter"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert!(v["breakdown"].is_object());

    let f = write(dir.path(), "f.json", r#"{"grid":{"breakpoints":[[0,1]]},"sections":[[[-2,-1],[1,3]]]}"#);
    let o = ehrhard(&["symmetrize", "--set", &f, "--mode", "steiner"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sections"][0][0][0].as_f64().unwrap(), -1.5);
    assert_eq!(v["sections"][0][0][1].as_f64().unwrap(), 1.5);
    let o = ehrhard(&["perimeter", "--set", &f, "--measure", "lebesgue"]);
    assert!(o.status.success());
}

#[test]
fn catalog_writes_three_files_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ehrhard(&["--out", out, "catalog", "fig2-top"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
    let files: Vec<Vec<u8>> =
        ["json", "csv", "svg"].iter().map(|x| fs::read(dir.path().join(format!("fig2-top.{x}"))).unwrap()).collect();
    let v: Value = serde_json::from_slice(&files[0]).unwrap();
    assert_eq!(v["summary"]["verdict"], "non-rigid");
    assert!(String::from_utf8_lossy(&files[2]).contains("tomato"));
    ehrhard(&["--out", out, "catalog", "fig2-top"]);
    for (x, before) in ["json", "csv", "svg"].iter().zip(&files) {
        assert_eq!(&fs::read(dir.path().join(format!("fig2-top.{x}"))).unwrap(), before, "{x}");
    }
}

#[test]
fn sweep_csv_is_fixed_column() {
    let o = ehrhard(&["sweep", "fig2-bottom", "--resolutions", "2,1"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "label,h,perimeter_f,perimeter_e,excess,ln_excess,verdict");
    assert_eq!(lines.len(), 3);
    assert!(lines[1..].iter().all(|l| l.ends_with(",non-rigid") && l.split(',').count() == 7));
}

#[test]
fn render_scene_with_partition() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", FIG2_TOP);
    let part = write(dir.path(), "part.json", r#"{"minus":[2]}"#);
    let svg_path = dir.path().join("s.svg");
    let o = ehrhard(&["--out", svg_path.to_str().unwrap(), "render", "--profile", &p, "--partition", &part]);
    assert!(o.status.success());
    let svg = fs::read_to_string(svg_path).unwrap();
    assert!(svg.contains("tomato") && svg.contains("royalblue") && svg.contains("stroke-dasharray"));
}

#[test]
fn suite_passes_with_seed() {
    let o = ehrhard(&["--seed", "11", "suite", "--count", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS 50 profiles"));
}
