use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn cubsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout {:?}, stderr {:?}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

#[test]
fn verify_is_deterministic_and_passes() {
    let args = ["verify", "--lemma", "2", "--trials", "60", "--seed", "42"];
    let a = cubsym(&args);
    let b = cubsym(&["--jobs", "1", "verify", "--lemma", "2", "--trials", "60", "--seed", "42"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = stdout_json(&a);
    assert_eq!(r["roundtrip_ok"], r["defined"]);
    assert_eq!(r["trials"], 60);
    assert!(String::from_utf8_lossy(&a.stderr).contains("wall time"));
}

#[test]
fn failure_reasons_are_documented_codes() {
    let out = cubsym(&["verify", "--lemma", "1", "--trials", "40", "--seed", "7"]);
    assert!(out.status.success());
    let r = stdout_json(&out);
    let known = [
        "NotGeneralPosition",
        "NotTransversal",
        "VertexDegenerate",
        "ResidualCollision",
        "LineInSurface",
        "OnSurfaceConflict",
        "ClusterNotStable",
    ];
    let mut total = 0;
    for f in r["failures"].as_array().unwrap() {
        assert!(known.contains(&f["reason"].as_str().unwrap()), "{f}");
        total += f["count"].as_u64().unwrap();
    }
    assert_eq!(total, r["undefined"].as_u64().unwrap());
    assert_eq!(
        r["defined"].as_u64().unwrap() + r["undefined"].as_u64().unwrap(),
        r["trials"].as_u64().unwrap()
    );
}

#[test]
fn zero_trials_is_a_config_error() {
    let out = cubsym(&["verify", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn single_trials_replay() {
    let full = stdout_json(&cubsym(&["verify", "--lemma", "theorem", "--trials", "10", "--seed", "5"]));
    let failing = full["failing_trials"].as_array().unwrap().len();
    assert_eq!(failing, 0);
    let one = cubsym(&["verify", "--lemma", "theorem", "--trials", "10", "--seed", "5", "--trial", "3"]);
    assert!(one.status.success());
    let t = stdout_json(&one);
    assert_eq!(t["trial"], 3);
    let again = stdout_json(&cubsym(&["verify", "--lemma", "theorem", "--trials", "10", "--seed", "5", "--trial", "3"]));
    assert_eq!(t, again);
}

#[test]
fn example1_matches() {
    let out = cubsym(&["example1"]);
    assert!(out.status.success());
    let r = stdout_json(&out);
    assert_eq!(r["match"], true);
    assert_eq!(r["sym4"]["empty"], true);
    assert_eq!(r["sym3"]["empty"], false);
    let counts: Vec<u64> = r["degrees"].as_array().unwrap().iter().map(|d| d["descriptors"].as_u64().unwrap()).collect();
    assert_eq!(&counts[..2], &[1, 3]);
    assert!(counts[2] >= 5);
}

#[test]
fn twisted_cubic_standard_and_coplanar() {
    let dir = tempfile::tempdir().unwrap();
    let six = write(
        dir.path(),
        "six.json",
        &json!({"field": "101", "points": [[1,0,0,0],[0,0,0,1],[1,1,1,1],[1,2,4,8],[1,3,9,27],[1,5,25,125]]}),
    );
    let out = cubsym(&["twisted-cubic", six.to_str().unwrap()]);
    assert!(out.status.success());
    let t = stdout_json(&out);
    assert_eq!(t["contains"], json!([true, true, true, true, true, true]));
    // x0x2 - x1², x0x3 - x1x2, x1x3 - x2²
    let unit = |i: usize, j: usize| {
        let mut row = vec![json!([0]); 10];
        row[i] = json!([1]);
        row[j] = json!([100]);
        Value::Array(row)
    };
    assert_eq!(t["quadrics"], json!([unit(2, 4), unit(3, 5), unit(6, 7)]));

    let flat = write(
        dir.path(),
        "flat.json",
        &json!({"field": "101", "points": [[1,0,0,0],[0,1,0,0],[1,1,0,0],[0,0,1,0],[0,0,0,1],[1,2,3,4]]}),
    );
    let out = cubsym(&["twisted-cubic", flat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let d = stdout_json(&out);
    assert_eq!(d["error"], "NotGeneralPosition");
    assert_eq!(d["coplanar"].as_array().unwrap().len(), 4);
}

#[test]
fn lemma2_roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = cubsym(&["--seed", "3", "sample", "--composition", "2"]);
    assert!(out.status.success());
    let b = stdout_json(&out);
    let b_path = write(dir.path(), "b.json", &b);
    let plane = write(dir.path(), "plane.json", &json!({"field": "101", "equation": [[3], [1], [4], [1]]}));
    let fwd = cubsym(&[
        "lemma2",
        "forward",
        "--plane",
        plane.to_str().unwrap(),
        "--b",
        b_path.to_str().unwrap(),
    ]);
    assert!(fwd.status.success(), "{}", String::from_utf8_lossy(&fwd.stdout));
    let em = stdout_json(&fwd);
    let e = write(dir.path(), "e.json", &em["E"]);
    let m = write(dir.path(), "m.json", &em["M"]);
    let back = stdout_json(&cubsym(&[
        "lemma2",
        "backward",
        "--plane",
        plane.to_str().unwrap(),
        "--e",
        e.to_str().unwrap(),
        "--m",
        m.to_str().unwrap(),
    ]));
    assert_eq!(back["B"], b);
}

#[test]
fn local_and_symn() {
    let out = cubsym(&["local", "--p", "7", "--coeffs", "1,7,49,-2", "--degrees", "1,3"]);
    assert!(out.status.success());
    let r = stdout_json(&out);
    let soluble = |d: &Value| d["verdicts"].as_array().unwrap().iter().any(|v| v["verdict"] == "Soluble");
    assert!(!soluble(&r["degrees"][0]));
    assert!(soluble(&r["degrees"][1]));
    let s = stdout_json(&cubsym(&["symn", "--p", "7", "--coeffs", "1,7,49,-2", "--n", "4"]));
    assert_eq!(s["empty"], true);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = cubsym(&["--out", path.to_str().unwrap(), "example1"]);
    assert!(out.status.success());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, stdout_json(&out));
}
