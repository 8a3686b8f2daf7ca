use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const FIXTURES: [&str; 6] = ["teardrop3", "torus_cone2", "sphere236", "football33xT2", "pentacircle", "headline4d"];

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn cyclorb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclorb"))
        .args(args)
        .env_remove("CYCLORB_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn decide_teardrop3() {
    let o = cyclorb(&["decide", path(&fixture("teardrop3"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "admits: false"), "{}", stdout(&o));
}

#[test]
fn verify_headline4d_passes_every_block() {
    let o = cyclorb(&["verify", "--json", "--strict", path(&fixture("headline4d"))]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let v = &r["verifiers"];
    assert_eq!(v["gauss_bonnet"]["holds"], true);
    assert_eq!(v["additivity"]["holds"], true);
    assert_eq!(v["intersection_closure"]["failures"], Value::Array(vec![]));
    assert_eq!(v["minimal_components"]["warnings"], Value::Array(vec![]));
    assert_eq!(v["induction"]["failed"], Value::Array(vec![]));
    assert_eq!(v["passed"], true);
    assert_eq!(r["decision"]["admits"], false);
}

#[test]
fn sectors_pentacircle() {
    let o = cyclorb(&["sectors", "--json", path(&fixture("pentacircle"))]);
    assert_eq!(o.status.code(), Some(0));
    let comps = json(&o)["components"].as_array().unwrap().clone();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[1]["node_count"], 24);
    assert_eq!(comps[1]["element_order"], 5);
}

#[test]
fn exit_codes_over_the_corpus() {
    for name in FIXTURES {
        for cmd in ["validate", "sectors", "euler", "decide", "verify"] {
            let o = cyclorb(&[cmd, "--strict", path(&fixture(name))]);
            assert_eq!(o.status.code(), Some(0), "{cmd} {name}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
}

#[test]
fn shipped_fixtures_match_the_generator() {
    for name in FIXTURES {
        let o = cyclorb(&["gen", "fixture", name]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), std::fs::read_to_string(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn reports_match_the_schema_and_are_byte_stable() {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    for name in FIXTURES {
        for cmd in ["validate", "sectors", "euler", "decide", "verify"] {
            let a = cyclorb(&[cmd, "--json", path(&fixture(name))]);
            let b = cyclorb(&[cmd, "--json", path(&fixture(name))]);
            assert_eq!(a.stdout, b.stdout, "{cmd} {name}");
            let report = json(&a);
            let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
            assert!(errors.is_empty(), "{cmd} {name}: {errors:?}");
        }
    }
    // invalid input still yields a conforming report
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"format_version":"1","vertices":2,"maximal_simplices":[[0,1]],"isotropy":[{"simplex":[0,1],"order":2}]}"#,
    );
    let o = cyclorb(&["verify", "--json", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(validator.is_valid(&json(&o)));
}

#[test]
fn rationals_round_trip_through_reports() {
    let o = cyclorb(&["sectors", "--json", path(&fixture("sphere236"))]);
    for c in json(&o)["components"].as_array().unwrap() {
        let s = c["chi_orb"].as_str().unwrap();
        let q: cyclorb::Rational = s.parse().unwrap();
        assert_eq!(q.to_string(), s);
    }
}

#[test]
fn invalid_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("zero.json", r#"{"format_version":"1","vertices":1,"maximal_simplices":[[0]],"isotropy":[{"simplex":[0],"order":0}]}"#),
        ("version.json", r#"{"format_version":"9","vertices":1,"maximal_simplices":[[0]]}"#),
        ("broken.json", r#"{"format_version":"1","#),
        ("ghost.json", r#"{"format_version":"1","vertices":2,"maximal_simplices":[[0,1]],"isotropy":[{"simplex":[0,2],"order":2}]}"#),
        (
            "divisibility.json",
            r#"{"format_version":"1","vertices":2,"maximal_simplices":[[0,1]],"isotropy":[{"simplex":[0,1],"order":2}]}"#,
        ),
    ];
    for (name, text) in cases {
        let p = write(dir.path(), name, text);
        let o = cyclorb(&["decide", path(&p)]);
        assert_eq!(o.status.code(), Some(1), "{name}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.starts_with("error: "), "{name}: {err}");
    }
    // the location of a label violation is named
    let o = cyclorb(&["validate", path(&dir.path().join("divisibility.json"))]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("[0, 1]"));
    assert_eq!(cyclorb(&["decide", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(cyclorb(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cyclorb(&["--help"]).status.code(), Some(0));
}

#[test]
fn strict_mode_rejects_open_surfaces() {
    let dir = tempfile::tempdir().unwrap();
    let disk = write(dir.path(), "disk.json", r#"{"format_version":"1","vertices":3,"maximal_simplices":[[0,1,2]]}"#);
    assert_eq!(cyclorb(&["validate", path(&disk)]).status.code(), Some(0));
    let o = cyclorb(&["validate", "--strict", path(&disk)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pseudomanifold"));
}

#[test]
fn several_files_in_input_order() {
    let a = fixture("teardrop3");
    let b = fixture("sphere236");
    let o = cyclorb(&["euler", "--json", path(&a), path(&b), path(&a)]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let chis: Vec<&str> = lines.iter().map(|r| r["invariants"]["chi_orb"].as_str().unwrap()).collect();
    assert_eq!(chis, vec!["4/3", "0/1", "4/3"]);
    // the worst exit code wins
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{}");
    assert_eq!(cyclorb(&["euler", path(&a), path(&bad)]).status.code(), Some(1));
}

#[test]
fn out_directory_from_flag_or_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = cyclorb(&["decide", "--json", "--out", path(dir.path()), path(&fixture("teardrop3"))]);
    assert_eq!(o.status.code(), Some(0));
    let report = std::fs::read_to_string(dir.path().join("teardrop3.report.json")).unwrap();
    assert!(report.contains("\"admits\": false"));

    let env_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cyclorb"))
        .args(["gen", "circle", "--order", "5", "--unit", "2"])
        .env("CYCLORB_OUT_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(env_dir.path().join("circle_5_2.json")).unwrap();
    assert_eq!(written, std::fs::read_to_string(fixture("pentacircle")).unwrap());
}

#[test]
fn generators_produce_valid_files() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 5] = [
        &["random", "--seed", "7"],
        &["random", "--seed", "7", "--dim", "4"],
        &["gen", "surface", "--genus", "2", "--cones", "2,3"],
        &["gen", "spec", r#"{"kind":"product_with_manifold","base":{"kind":"fixture","name":"teardrop3"},"manifold":"torus"}"#],
        &["gen", "spec", r#"{"kind":"disjoint_union","a":{"kind":"fixture","name":"teardrop3"},"b":{"kind":"circle_with_monodromy","order":3,"unit":2}}"#],
    ];
    for (k, args) in runs.iter().enumerate() {
        let o = cyclorb(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let p = write(dir.path(), &format!("g{k}.json"), &stdout(&o));
        let v = cyclorb(&["verify", path(&p)]);
        assert_eq!(v.status.code(), Some(0), "{args:?}");
    }
    // same seed, same bytes
    assert_eq!(cyclorb(&["random", "--seed", "11"]).stdout, cyclorb(&["random", "--seed", "11"]).stdout);
    assert_eq!(cyclorb(&["random", "--dim", "3"]).status.code(), Some(1));
    assert_eq!(cyclorb(&["gen", "surface", "--cones", "1"]).status.code(), Some(1));
}
