use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kgring_cli::{ExtensionFile, ModuleFile, DEFAULT_MAX_RANK};
use kgring_core::module::hom_space;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn kgring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgring"))
        .args(args)
        .env_remove("KGRING_MAX_RANK")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = kgring(&all);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).unwrap())
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn check_ring_primes() {
    for p in ["2", "5"] {
        let (code, v) = json(&["check-ring", "--prime", p]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["ok"], true);
    }
    let o = kgring(&["check-ring", "-p", "6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_and_exact() {
    let (code, v) = json(&["validate", &path("standard_p2.json")]);
    assert_eq!((code, &v["ok"]), (0, &Value::Bool(true)));
    let (code, v) = json(&["exact", &path("standard_p2.json")]);
    assert_eq!((code, &v["ok"]), (0, &Value::Bool(true)));
    assert_eq!(v["nodes"].as_array().unwrap().len(), 6);

    let (code, v) = json(&["validate", &path("corrupted_p2.json")]);
    assert_eq!(code, 1);
    let failures = v["failures"].as_array().unwrap();
    assert!(
        failures
            .iter()
            .any(|f| f["relation"].as_str().unwrap().contains("N(t0)")),
        "{v}"
    );

    let (code, _) = json(&["exact", &path("empty_p2.json")]);
    assert_eq!(code, 0);
}

#[test]
fn split_reports() {
    let (code, v) = json(&["split", &path("extension_6.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["traces"][0], serde_json::json!(["1", "1", "2", "4"]));
    assert_eq!(v["traces"][1], serde_json::json!(["1", "1", "3", "9"]));
    assert_eq!(v["coefficients"], serde_json::json!(["-2", "1"]));

    let o = kgring(&["split", &path("extension_p2.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least two primes"));
}

#[test]
fn decompose_nine_pieces() {
    let (code, v) = json(&["decompose", &path("nine_pieces_6.json"), "--primes", "2,3"]);
    assert_eq!(code, 0, "{v}");
    let labels: Vec<&str> = v["pieces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["index"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ"]);
}

#[test]
fn hom_ext_hensel() {
    let m = path("free_mod_two_p2.json");
    let (code, v) = json(&["ext1", &m, &m]);
    assert_eq!(code, 0);
    assert_eq!(v["group"]["even"]["torsion"], serde_json::json!(["2", "2"]));
    let (code, v) = json(&["hom", &m, &m]);
    assert_eq!(code, 0);
    assert!(!v["group"]["even"]["torsion"].as_array().unwrap().is_empty());
    let module = kgring_cli::read_module(&fixture("free_mod_two_p2.json"), DEFAULT_MAX_RANK).unwrap();
    let space = hom_space(&module, &module, &[]).unwrap();
    assert!(space.coordinates(&module.identity_matrix()).is_some());

    let o = kgring(&["hensel", "-p", "7", "-q", "3", "-k", "2"]);
    assert_eq!(stdout(&o).trim(), "30");
    let o = kgring(&["hensel", "-p", "7", "-q", "5", "-k", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["exact".to_string(), path("standard_p2.json")],
        vec![
            "decompose".into(),
            path("nine_pieces_6.json"),
            "--primes".into(),
            "3,2".into(),
        ],
        vec![
            "--format".into(),
            "json".into(),
            "split".into(),
            path("extension_6.json"),
        ],
    ] {
        let args: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        assert_eq!(kgring(&args).stdout, kgring(&args).stdout);
    }
}

#[test]
fn rank_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_kgring"))
        .args(["validate", &path("nine_pieces_6.json")])
        .env("KGRING_MAX_RANK", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let p = entry.unwrap().path();
        let text = std::fs::read_to_string(&p).unwrap();
        let name = p.file_name().unwrap().to_str().unwrap();
        if name.starts_with("extension") {
            let f: ExtensionFile = serde_json::from_str(&text).unwrap();
            let e = f.to_extension(DEFAULT_MAX_RANK).unwrap();
            assert_eq!(ExtensionFile::from_extension(&e), f, "{name}");
        } else {
            let f: ModuleFile = serde_json::from_str(&text).unwrap();
            let m = f.to_module(DEFAULT_MAX_RANK).unwrap();
            let again = ModuleFile::from_module(&m);
            let out = dir.path().join(name);
            std::fs::write(&out, serde_json::to_string(&again).unwrap()).unwrap();
            assert_eq!(kgring_cli::read_module(&out, DEFAULT_MAX_RANK).unwrap(), m, "{name}");
            if name != "corrupted_p2.json" {
                assert_eq!(again, f, "{name}");
            }
        }
    }
}

#[test]
fn malformed_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = [
        r#"{"primes":[2],"components":{"3":{}}}"#,
        r#"{"primes":[2],"components":{"0":{"even":{"rank":1}}},"maps":{"p=3:alpha01":{}}}"#,
        r#"{"primes":[2],"components":{"0":{"even":{"rank":1}},"1":{"even":{"rank":1}}},"maps":{"p=2:alpha10":{"0":[["1","2"]]}}}"#,
        r#"{"primes":[2],"components":{"0":{"even":{"rank":1}}},"maps":{"p=2:alpha10":{"1":[["1"]]}}}"#,
        r#"{"primes":[2],"components":{"0":{"even":{"torsion":[4,2]}}}}"#,
    ];
    for (i, text) in bad.iter().enumerate() {
        let p = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&p, text).unwrap();
        let o = kgring(&["validate", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
}
