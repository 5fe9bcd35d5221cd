use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syncord"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn figure_types() {
    for (file, ty) in [
        ("fig1_left.json", "w*\n"),
        ("fig1_right.json", "w\n"),
        ("fig2.json", "3\n"),
    ] {
        let o = run(&["type", &fixture(file)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), ty);
    }
    let o = run(&["--json", "type", &fixture("fig2.json")]);
    assert_eq!(stdout(&o), "{\"type\":\"3\"}\n");
}

#[test]
fn verdict_exit_codes() {
    let left = fixture("fig1_left.json");
    let right = fixture("fig1_right.json");
    let evenodd = fixture("evenodd.json");
    assert_eq!(run(&["equiv", &left, &right]).status.code(), Some(1));
    assert_eq!(run(&["equiv", &left, &left]).status.code(), Some(0));
    assert_eq!(run(&["check", "linear", &evenodd]).status.code(), Some(1));
    assert_eq!(run(&["check", "order", &evenodd]).status.code(), Some(0));
    assert_eq!(run(&["check", "complete", &right]).status.code(), Some(0));
    assert_eq!(run(&["member", &left, "3", "1"]).status.code(), Some(0));
    assert_eq!(run(&["member", &left, "1", "3"]).status.code(), Some(1));
    let o = run(&["extremal", "max", &left]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "0\n".to_string()));
    assert_eq!(run(&["extremal", "min", &left]).status.code(), Some(1));
}

#[test]
fn errors_exit_with_two_and_one_line() {
    let o = run(&["type", &fixture("evenodd.json")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: "));
    assert_eq!(run(&["type", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["compile", "x - IN"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn chains_and_antichains_json() {
    let evenodd = fixture("evenodd.json");
    let chains: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["chains", &evenodd]))).unwrap();
    assert_eq!(chains["asc"], false);
    assert_eq!(chains["desc"], false);
    let anti: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["antichains", &evenodd]))).unwrap();
    assert_eq!(anti["infinite"], true);
    assert!(anti["bound"].is_null());
    let right = fixture("fig1_right.json");
    let chains: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["chains", &right]))).unwrap();
    assert_eq!(chains["asc"], true);
    assert_eq!(chains["witness"]["asc"], serde_json::json!([0, 2]));
    let anti: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["antichains", &right]))).unwrap();
    assert_eq!(anti["bound"], 6);
}

#[test]
fn operations_write_automata() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let (left, right, fig2) = (
        fixture("fig1_left.json"),
        fixture("fig1_right.json"),
        fixture("fig2.json"),
    );

    assert!(run(&["op", "inverse", &right, "-o", &out("inv.json")])
        .status
        .success());
    assert_eq!(
        run(&["equiv", &out("inv.json"), &left]).status.code(),
        Some(0)
    );

    assert!(run(&["op", "scale", &fig2, "2", "0", "-o", &out("a.json")])
        .status
        .success());
    assert!(
        run(&["op", "scale", &right, "2", "1", "-o", &out("b.json")])
            .status
            .success()
    );
    assert!(run(&[
        "op",
        "sum",
        &out("a.json"),
        &out("b.json"),
        "-o",
        &out("sum.json")
    ])
    .status
    .success());
    assert_eq!(stdout(&run(&["type", &out("sum.json")])), "w\n");
    assert_eq!(run(&["op", "sum", &left, &right]).status.code(), Some(2));

    assert!(run(&[
        "op",
        "trace",
        "UP(t=0;p=2;head={};res={0})",
        "asc",
        "-o",
        &out("evens.json")
    ])
    .status
    .success());
    assert_eq!(
        run(&["check", "complete", &out("evens.json")])
            .status
            .code(),
        Some(1)
    );
    assert!(run(&[
        "op",
        "complete-with",
        &out("evens.json"),
        "w",
        "-o",
        &out("ww.json")
    ])
    .status
    .success());
    assert_eq!(stdout(&run(&["type", &out("ww.json")])), "w + w\n");
    assert_eq!(
        run(&["op", "collapse", &out("evens.json")]).status.code(),
        Some(2)
    );

    assert!(run(&["op", "union", &left, &right, "-o", &out("u.json")])
        .status
        .success());
    assert!(
        run(&["op", "complement", &out("u.json"), "-o", &out("diag.json")])
            .status
            .success()
    );
    assert_eq!(
        run(&["member", &out("diag.json"), "4", "4"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["member", &out("diag.json"), "4", "5"]).status.code(),
        Some(1)
    );
    assert!(
        run(&["op", "intersect", &left, &right, "-o", &out("i.json")])
            .status
            .success()
    );
    assert_eq!(
        run(&["member", &out("i.json"), "0", "1"]).status.code(),
        Some(1)
    );
    assert!(
        run(&["op", "compose", &right, &right, "-o", &out("c.json")])
            .status
            .success()
    );
    assert_eq!(
        run(&["member", &out("c.json"), "0", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["member", &out("c.json"), "0", "2"]).status.code(),
        Some(0)
    );

    // stdout output is the same bytes as the file
    let printed = stdout(&run(&["op", "inverse", &right]));
    assert_eq!(printed, std::fs::read_to_string(out("inv.json")).unwrap());
}

#[test]
fn formulas() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("f.json");
    let target = target.to_str().unwrap();
    let o = run(&["compile", "y - x IN POS", "-o", target]);
    assert!(o.status.success());
    assert_eq!(
        run(&["equiv", target, &fixture("fig1_right.json")])
            .status
            .code(),
        Some(0)
    );

    let o = run(&[
        "compile",
        "x - 0 IN TRIPLE",
        "--let",
        "TRIPLE=UP(t=0;p=3;head={};res={0})",
    ]);
    assert!(o.status.success());
    let a = syncord::SyncAutomaton::from_json_str(stdout(&o).trim()).unwrap();
    assert!(a.accepts(&[6]) && !a.accepts(&[7]));

    let o = run(&["compile", "y - x > 0", "--vars", "y,x"]);
    let a = syncord::SyncAutomaton::from_json_str(stdout(&o).trim()).unwrap();
    assert!(a.accepts(&[5, 2]));

    let text = stdout(&run(&["to-formula", &fixture("fig2.json")]));
    let o = run(&["compile", text.trim(), "--vars", "x1,x2", "-o", target]);
    assert!(o.status.success());
    let back =
        syncord::SyncAutomaton::from_json_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert!(back.equivalent(&syncord::fixtures::three()).unwrap());
}

#[test]
fn inspection_outputs() {
    let o = run(&["normalize", &fixture("fig1_right.json")]);
    let dump = stdout(&o);
    assert!(dump.starts_with("diag t=0 p=2\n"));
    assert_eq!(dump.lines().count(), 3);
    let dot = stdout(&run(&["export-dot", &fixture("fig2.json")]));
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("(1,0)"));
    let o = run(&["oracle", "verify", &fixture("evenodd.json"), "--max", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["divergences"], serde_json::json!([]));
    assert_eq!(report["linear"], false);
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        vec!["chains".to_string(), fixture("fig1_left.json")],
        vec!["to-formula".to_string(), fixture("evenodd.json")],
        vec![
            "op".to_string(),
            "complement".to_string(),
            fixture("fig2.json"),
        ],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}
