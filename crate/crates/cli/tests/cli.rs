use serde_json::Value;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn h90(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_h90"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root()
        .join("crates/core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn assert_schema(name: &str, doc: &Value) {
    let path = root().join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    if let Err(errs) = compiled.validate(doc) {
        let msgs: Vec<String> = errs
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("{name}: {msgs:?}");
    };
}

fn json_out(args: &[&str]) -> Value {
    let o = h90(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn tau_on_sqrt2_at_7() {
    let v = json_out(&["tau", "--poly", "-2,0,1", "--p", "7"]);
    assert_eq!(v["status"], "surjective");
    assert_eq!(v["rank"], 1);
    assert_eq!(v["target"], 1);
    assert_schema("tau", &v);
}

#[test]
fn tau_with_fixture_units() {
    let f = fixture("qrt11.json");
    let v = json_out(&["tau", "--fixture", &f, "--p", "19"]);
    assert_eq!(v["status"], "not_surjective");
    assert_eq!(v["units"], "fixture");
    assert_schema("tau", &v);
}

#[test]
fn rayclass_q_examples() {
    assert_eq!(
        stdout(&h90(&["rayclass-q", "--m0", "24", "--infty"])),
        "C2 x C2 x C2\n"
    );
    assert_eq!(
        stdout(&h90(&["rayclass-q", "--m0", "1", "--infty"])),
        "trivial\n"
    );
    let v = json_out(&["rayclass-q", "--m0", "104", "--infty", "--json"]);
    assert_eq!(v["invariants"], serde_json::json!(["2", "2", "12"]));
    assert_schema("rayclass", &v);
}

#[test]
fn criterion_q_examples() {
    let o = h90(&[
        "criterion-q",
        "--f0",
        "312",
        "--infty",
        "--ram",
        "2:2:1,3:2:1,13:2:1",
        "--p",
        "2",
    ]);
    assert_eq!(stdout(&o).lines().last(), Some("false"));
    let v = json_out(&[
        "criterion-q",
        "--f0",
        "9",
        "--infty",
        "--ram",
        "3:6:1",
        "--p",
        "3",
        "--v0",
        "3",
        "--json",
    ]);
    assert_eq!(v["holds"], true);
    assert_schema("criterion", &v);
}

#[test]
fn rankstat_exact() {
    assert_eq!(
        stdout(&h90(&[
            "rankstat", "--exact", "--p", "3", "--n", "2", "--k", "2"
        ])),
        "16/27\n"
    );
    assert_eq!(
        stdout(&h90(&[
            "rankstat",
            "--enumerate",
            "--p",
            "3",
            "--n",
            "2",
            "--k",
            "2"
        ])),
        "16/27\n"
    );
}

#[test]
fn mackey_from_stdin_and_file() {
    let doc = r#"{"d":2,"x1":{"invariants":[4]},"sigma":[[-1]],"xg":{"invariants":[2]},"N":[[0]],"I":[[2]]}"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z4.json");
    std::fs::write(&path, doc).unwrap();
    let v = json_out(&["mackey", "--input", path.to_str().unwrap()]);
    assert_eq!(v["c1"], serde_json::json!(["2"]));
    assert_eq!(v["six_term_exact"], true);
    assert_schema("mackey", &v);
    let v = json_out(&["mackey", "--input", path.to_str().unwrap(), "--p", "3"]);
    assert_eq!(v["c1"], serde_json::json!([]));
    let mut child = Command::new(env!("CARGO_BIN_EXE_h90"))
        .args(["mackey", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(doc.as_bytes())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(
        serde_json::from_slice::<Value>(&o.stdout).unwrap()["c1"],
        serde_json::json!(["2"])
    );
}

#[test]
fn scan_outputs_validate_and_files_match_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, js) = (dir.path().join("s.csv"), dir.path().join("s.json"));
    let f = fixture("qrt11.json");
    let o = h90(&[
        "scan-primes",
        "--fixture",
        &f,
        "--xmax",
        "500",
        "--out-csv",
        csv.to_str().unwrap(),
        "--out-json",
        js.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    assert_schema("scan", &v);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("p,status,split,max_f,verdict,choice,h_p,rp_term\n"));
    assert!(text
        .lines()
        .any(|l| l.starts_with("19,counted,") && l.contains("not_surjective")));

    let o = h90(&["scan-primes", "--poly", "-2,0,1", "--xmax", "100"]);
    assert!(stdout(&o).starts_with("p,status,"));

    let ff = fixture("cubic_family_m50_50.json");
    let fj = dir.path().join("f.json");
    let o = h90(&[
        "scan-family",
        "--g",
        "-1;-3,1;0,1;1",
        "--from",
        "-50",
        "--to",
        "50",
        "--p",
        "7",
        "--fixture",
        &ff,
        "--out-json",
        fj.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&fj).unwrap()).unwrap();
    assert_eq!(v["aggregates"]["n_tau"], 70);
    assert_schema("family", &v);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("qrt11.json");
    let outs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|t| {
            let js = dir.path().join(format!("{t}.json"));
            let o = h90(&[
                "scan-primes",
                "--fixture",
                &f,
                "--xmax",
                "2000",
                "--threads",
                t,
                "--out-json",
                js.to_str().unwrap(),
            ]);
            assert!(o.status.success());
            std::fs::read(js).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn committed_fixtures_pass_check_fixture_and_schema() {
    let dir = root().join("crates/core/fixtures");
    let mut files = vec![dir.join("qrt11.json")];
    for e in std::fs::read_dir(dir.join("quadratic")).unwrap() {
        files.push(e.unwrap().path());
    }
    for f in &files {
        let o = h90(&["check-fixture", f.to_str().unwrap()]);
        assert!(
            o.status.success(),
            "{f:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(stdout(&o).starts_with("ok:"));
        assert_schema(
            "fixture",
            &serde_json::from_str(&std::fs::read_to_string(f).unwrap()).unwrap(),
        );
    }
    let fam = dir.join("cubic_family_m50_50.json");
    let o = h90(&["check-fixture", "--family", fam.to_str().unwrap()]);
    assert!(o.status.success());
    assert_schema(
        "family_fixture",
        &serde_json::from_str(&std::fs::read_to_string(&fam).unwrap()).unwrap(),
    );
}

#[test]
fn tampered_fixture_is_rejected() {
    let text = std::fs::read_to_string(fixture("qrt11.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["units"][0]["num"][0] = serde_json::json!(11);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let o = h90(&["check-fixture", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        h90(&["tau", "--poly", "-2,0,1", "--p", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        h90(&["rayclass-q", "--m0", "10", "--s", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        h90(&[
            "criterion-q",
            "--f0",
            "13",
            "--ram",
            "13:2:1",
            "--p",
            "2",
            "--v0",
            "5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(h90(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(h90(&["tau", "--poly", "-2,0,1"]).status.code(), Some(2));
    assert_eq!(
        h90(&["rankstat", "--p", "4", "--n", "1", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
    // without a unit search budget the quartic has no units to work with
    let args = [
        "tau",
        "--poly",
        "-11,0,0,0,1",
        "--p",
        "5",
        "--set",
        "unit_effort=0",
    ];
    let o = h90(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "inconclusive_data");
    let strict: Vec<&str> = args.iter().copied().chain(["--strict"]).collect();
    assert_eq!(h90(&strict).status.code(), Some(3));
}
