use std::path::Path;
use std::process::Command;

use krawtchouk_sl2::cli::run;
use serde_json::{json, Value};

fn kraw(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("kraw").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_json(path: &Path, v: &Value) {
    std::fs::write(path, serde_json::to_string(v).unwrap()).unwrap();
}

fn rational(entries: Value) -> Value {
    let n = entries.as_array().unwrap().len();
    json!({"field": {"kind": "rational"}, "n": n, "entries": entries})
}

#[test]
fn eval() {
    assert_eq!(
        kraw(&["eval", "--N", "2", "--p", "1/2", "--i", "1", "--x", "1"]),
        (0, "0\n".into(), String::new())
    );
    assert_eq!(
        kraw(&["eval", "--N", "2", "--p", "1/2", "--i", "0", "--x", "5/7"]).1,
        "1\n"
    );
    assert_eq!(
        kraw(&["eval", "--N", "4", "--p", "1/3", "--i", "1", "--x", "5/7"]).1,
        "13/28\n"
    );
    assert_eq!(
        kraw(&["eval", "--N", "2", "--p", "0", "--i", "1", "--x", "1"]).0,
        4
    );
    assert_eq!(
        kraw(&["eval", "--N", "2", "--p", "1/2", "--i", "3", "--x", "1"]).0,
        4
    );
    assert_eq!(
        kraw(&["--field", "prime:7", "eval", "--N", "2", "--p", "4", "--i", "1", "--x", "2"]).1,
        "6\n"
    );
}

#[test]
fn table_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let o = out.to_str().unwrap();
    assert_eq!(kraw(&["table", "--N", "2", "--p", "1/2", "--out", o]).0, 0);
    let v = read_json(&out);
    assert_eq!(
        v["U"]["entries"],
        json!([["1", "1", "1"], ["1", "0", "-1"], ["1", "-1", "1"]])
    );
    assert_eq!(
        v["params"],
        json!({"N": 2, "p": "1/2", "field": {"kind": "rational"}})
    );

    assert_eq!(kraw(&["table", "--N", "0", "--p", "1/3", "--out", o]).0, 0);
    let v = read_json(&out);
    for (key, val) in [("U", "1"), ("B", "0"), ("D", "0"), ("K", "1"), ("P", "1")] {
        assert_eq!(v[key]["entries"], json!([[val]]), "{key}");
    }

    assert_eq!(
        kraw(&["--field", "prime:7", "table", "--N", "2", "--p", "4", "--out", o]).0,
        0
    );
    assert_eq!(
        read_json(&out)["U"]["entries"],
        json!([["1", "1", "1"], ["1", "0", "6"], ["1", "6", "1"]])
    );

    let missing = dir.path().join("no/such/dir/t.json");
    assert_eq!(
        kraw(&[
            "table",
            "--N",
            "2",
            "--p",
            "1/2",
            "--out",
            missing.to_str().unwrap()
        ])
        .0,
        5
    );
}

#[test]
fn output_is_deterministic() {
    let a = kraw(&["module", "--N", "3", "--p", "2/5"]).1;
    let b = kraw(&["module", "--N", "3", "--p", "2/5"]).1;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(
        kraw(&["table", "--N", "4", "--p", "-1/2"]).1,
        kraw(&["table", "--N", "4", "--p", "-1/2"]).1
    );
}

#[test]
fn module_bundle() {
    let v: Value = serde_json::from_str(&kraw(&["module", "--N", "2", "--p", "1/2"]).1).unwrap();
    assert_eq!(
        v["rep"]["e"]["entries"],
        json!([["0", "1", "0"], ["0", "0", "2"], ["0", "0", "0"]])
    );
    assert_eq!(
        v["operators"]["star"]["A"]["entries"],
        json!([["0", "0", "0"], ["0", "1", "0"], ["0", "0", "2"]])
    );
    assert!(v["gram"]["mono,mono_dual"].is_object());
    assert!(v["transitions"]["star->mono"].is_object());
    let v: Value = serde_json::from_str(&kraw(&["module", "--N", "1", "--p", "1/3"]).1).unwrap();
    assert_eq!(v["rep"]["h"]["entries"], json!([["1", "0"], ["0", "-1"]]));
}

#[test]
fn verify_sweeps() {
    let (code, out, _) = kraw(&["--field", "prime:11", "verify", "--Nmax", "8", "--p", "6"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("all pass\n"));
    let (code, out, _) = kraw(&[
        "verify",
        "--Nmax",
        "3",
        "--p",
        "1/2,1/3,2/5,-1/2,3",
        "--jobs",
        "2",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("round-trip/recovered p: 15/15"));
    assert!(out.contains("round-trip/N = 0 is degenerate: 5/5"));
    assert_eq!(kraw(&["verify", "--Nmax", "3", "--p", "1/2,1"]).0, 4);
    assert_eq!(kraw(&["verify", "--Nmax", "3", "--p", "0"]).0, 4);
}

#[test]
fn table_round_trips_through_classify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let o = path.to_str().unwrap();
    for p in ["1/2", "1/3", "2/5", "-1/2", "3"] {
        for n in 1..=5 {
            let ns = n.to_string();
            assert_eq!(kraw(&["table", "--N", &ns, "--p", p, "--out", o]).0, 0);
            let (code, out, err) = kraw(&["--shift", "classify", o]);
            assert_eq!(code, 0, "N={n} p={p}: {err}");
            let v: Value = serde_json::from_str(&out).unwrap();
            assert_eq!(v["verdict"], "krawtchouk-type");
            assert_eq!(v["p"], p);
            assert_eq!(v["failures"], json!([]));
        }
    }
    for (field, p) in [("prime:11", "6"), ("prime:13", "4")] {
        assert_eq!(
            kraw(&["--field", field, "table", "--N", "6", "--p", p, "--out", o]).0,
            0
        );
        let v: Value = serde_json::from_str(&kraw(&["--shift", "classify", o]).1).unwrap();
        assert_eq!(v["p"], p);
    }
}

#[test]
fn classify_module_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let o = path.to_str().unwrap();
    assert_eq!(kraw(&["module", "--N", "3", "--p", "2/5", "--out", o]).0, 0);
    let (code, out, _) = kraw(&["--shift", "classify", o]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["p"], "2/5");
    assert_eq!(v["alpha1"], "-4/5");
    assert_eq!(v["theta"], json!(["3", "1", "-1", "-3"]));
    // without the shift the spectra are 0..N
    let (code, out, _) = kraw(&["classify", o]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "wrong-spectrum");
}

#[test]
fn classify_rejections() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.json");
    let o = path.to_str().unwrap();

    let d = rational(json!([["1", "0"], ["0", "-1"]]));
    write_json(&path, &json!({"A": d, "Astar": d}));
    let (code, out, _) = kraw(&["classify", o]);
    assert_eq!(code, 3);
    assert_eq!(
        serde_json::from_str::<Value>(&out).unwrap()["verdict"],
        "not-leonard"
    );

    let three = rational(json!([["1", "0", "0"], ["0", "0", "0"], ["0", "0", "-1"]]));
    write_json(&path, &json!({"A": d, "Astar": three}));
    assert_eq!(kraw(&["classify", o]).0, 4);
    assert_eq!(kraw(&["--shift", "classify", o]).0, 4);

    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(kraw(&["classify", o]).0, 4);
    write_json(&path, &json!({"A": d}));
    assert_eq!(kraw(&["classify", o]).0, 4);
    assert_eq!(
        kraw(&["classify", dir.path().join("absent.json").to_str().unwrap()]).0,
        5
    );
}

#[test]
fn classify_with_supplied_spectra() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.json");
    let a = rational(json!([["0", "0", "0"], ["1", "1", "0"], ["0", "1", "3"]]));
    let a_star = rational(json!([["2", "1", "0"], ["0", "0", "3"], ["0", "0", "-2"]]));
    write_json(
        &path,
        &json!({"A": a, "Astar": a_star, "theta": ["0", "1", "3"], "thetaStar": ["2", "0", "-2"]}),
    );
    let (code, out, _) = kraw(&["classify", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "leonard-but-not-krawtchouk");
    assert_eq!(v["theta"], json!(["0", "1", "3"]));

    write_json(
        &path,
        &json!({"A": a, "Astar": a_star, "theta": ["0", "1", "3"]}),
    );
    assert_eq!(kraw(&["classify", path.to_str().unwrap()]).0, 4);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kraw");
    let out = Command::new(bin)
        .args(["eval", "--N", "2", "--p", "1/2", "--i", "1", "--x", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\n");
    let out = Command::new(bin)
        .args(["eval", "--N", "2", "--p", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("classify"));
}
