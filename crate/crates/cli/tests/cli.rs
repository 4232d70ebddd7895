use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nobody::model::{validate_model, ModelFile};
use nobody::okounkov::OkounkovPolygon;

fn nobody(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nobody"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn vertices(p: &OkounkovPolygon) -> Vec<(String, String)> {
    p.vertex_points()
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect()
}

#[test]
fn dp7_body_is_a_triangle() {
    let o = nobody(&[
        "--model",
        "fixture:dp7",
        "body",
        "2*E_p+F1+F2",
        "E_p@generic",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = OkounkovPolygon::from_json(&stdout(&o)).unwrap();
    assert_eq!(p.census.total, 3);
    assert_eq!(
        vertices(&p),
        [("0", "0"), ("2", "0"), ("1", "1")].map(|(x, y)| (x.to_string(), y.to_string()))
    );
}

#[test]
fn tower7_ends_at_eight_thirds() {
    let o = nobody(&["--model", "fixture:tower7", "body", "h", "E_7@{C_7:1}"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = OkounkovPolygon::from_json(&stdout(&o)).unwrap();
    assert_eq!(p.mu.to_string(), "8/3");
    assert_eq!(p.census.interior, 2);
}

#[test]
fn csv_lists_exact_vertices() {
    let o = nobody(&[
        "--model",
        "fixture:tower7",
        "--format",
        "csv",
        "body",
        "h",
        "E_7@{C_7:1}",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("x,y,x_exact,y_exact,class\n"));
    assert!(text.contains(",8/3,1/3,rightmost"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn asymmetric_gram_names_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"rank":2,"gram":[[1,0],[1,-1]],"curves":[],"ample":["1","0"],"basis":["h","e"]}"#,
    )
    .unwrap();
    let o = nobody(&["--model", path.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("gram symmetry"), "{}", stderr(&o));
}

#[test]
fn unknown_name_is_a_parse_error() {
    let o = nobody(&["--model", "fixture:dp7", "body", "2*E_q", "E_p@generic"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("E_q"));
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"rank\": 2,").unwrap();
    let o = nobody(&["--model", path.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_histograms() {
    let o = nobody(&["--model", "fixture:dp7", "scan", "2*E_p+F1+F2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["histogram"], serde_json::json!({"3": 1, "4": 6}));

    let o = nobody(&[
        "--model",
        "fixture:dp7",
        "scan",
        "2*E_p+F1+F2",
        "--on",
        "E_p",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["histogram"], serde_json::json!({"3": 1, "4": 2}));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "--model",
        "fixture:dp7",
        "--seed",
        "7",
        "scan",
        "3*E_p+2*F1+F2",
    ];
    let a = nobody(&args);
    let b = nobody(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn empty_directory_has_nothing_to_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = nobody(&["verify", "--dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("nothing to verify"));
}

#[test]
fn shipped_fixtures_verify() {
    let o = nobody(&["verify", "--dir", fixtures().to_str().unwrap()]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn removed_curve_is_caught() {
    let o = nobody(&[
        "verify",
        "--dir",
        fixtures().join("broken").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("model inconsistency"), "{}", stdout(&o));
}

#[test]
fn out_directory_receives_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = nobody(&[
        "--model",
        "fixture:dp7",
        "--out",
        out,
        "--format",
        "svg",
        "body",
        "2*E_p+F1+F2",
        "E_p@{F1:1}",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json = fs::read_to_string(dir.path().join("polygon.json")).unwrap();
    let p = OkounkovPolygon::from_json(&json).unwrap();
    assert_eq!(p.census.total, 4);
    let svg = fs::read_to_string(dir.path().join("polygon.svg")).unwrap();
    assert!(svg.contains("<svg"));
}

#[test]
fn blowup_output_reparses_and_validates() {
    let o = nobody(&[
        "--model",
        "fixture:dp7",
        "blowup",
        "--name",
        "G",
        "--on",
        "E_p:1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m = ModelFile::from_json(&stdout(&o))
        .unwrap()
        .into_model()
        .unwrap();
    assert!(validate_model(&m).is_valid());
    assert_eq!(m.rank(), 4);
    let g = m.require_curve("G").unwrap();
    assert_eq!(m.self_intersection(g).to_string(), "-1");
}

#[test]
fn tower_writes_model_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = nobody(&[
        "--model",
        "fixture:p2-nodal-cubic",
        "--out",
        out,
        "tower",
        "--curve",
        "C",
        "--k",
        "7",
        "--divisor",
        "h",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("tower_model.json")).unwrap();
    let m = ModelFile::from_json(&text).unwrap().into_model().unwrap();
    assert_eq!(m.curves(), nobody::model::fix_tower7().curves());
    let prov: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("provenance.json")).unwrap())
            .unwrap();
    assert_eq!(prov["reference"]["mu_if_orthogonal_exact"], "8/3");
    assert_eq!(prov["reference"]["t_entry_bound"], "21/8");
}

#[test]
fn file_model_matches_fixture() {
    let path = fixtures().join("dp7.json");
    let a = nobody(&[
        "--model",
        path.to_str().unwrap(),
        "decompose",
        "3*E_p+2*F1+F2",
    ]);
    let b = nobody(&["--model", "fixture:dp7", "decompose", "3*E_p+2*F1+F2"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}
