mod common;

use std::io::Write;
use std::process::{Command, Stdio};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn minibmc(args: &[&str]) -> Out {
    run(env!("CARGO_BIN_EXE_minibmc"), args, None)
}

fn run(bin: &str, args: &[&str], stdin: Option<&str>) -> Out {
    let mut child = Command::new(bin)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    Out {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn corpus(name: &str) -> String {
    common::corpus(name).display().to_string()
}

#[test]
fn abs_signed_overflow() {
    let abs = corpus("abs.c");
    let out = minibmc(&["--function", "abs", "--signed-overflow-check", &abs]);
    assert_eq!(out.code, 10);
    let lines: Vec<&str> = out.stdout.lines().collect();
    let expected_prefix = [
        "minibmc version 0.1.0 64-bit".to_string(),
        format!("Parsing {abs}"),
        "Converting".into(),
        "Type-checking abs".into(),
        "Generating GOTO Program".into(),
        "Removal of function pointers and virtual functions".into(),
        "Generic Property Instrumentation".into(),
        "Starting Bounded Model Checking".into(),
    ];
    assert_eq!(&lines[..expected_prefix.len()], &expected_prefix[..]);
    assert!(out
        .stdout
        .contains("Generated 1 VCC(s), 1 remaining after simplification"));
    assert!(out.stdout.contains("SAT checker: instance is SATISFIABLE"));
    assert!(out
        .stdout
        .contains("[abs.overflow.1] line 5 arithmetic overflow on signed unary minus in -x: FAILURE"));
    assert!(out
        .stdout
        .contains("** 1 of 1 failed (2 iterations)\nVERIFICATION FAILED\n"));
    assert!(!out.stdout.contains("Trace for"));

    let traced = minibmc(&["--function", "abs", "--signed-overflow-check", "--trace", &abs]);
    assert!(traced
        .stdout
        .contains("  INPUT x: -2147483648 (10000000 00000000 00000000 00000000)\n"));
    assert!(traced.stdout.contains("Violated property:"));
}

#[test]
fn abs_without_checks_has_no_conditions() {
    let out = minibmc(&["--function", "abs", &corpus("abs.c")]);
    assert_eq!(out.code, 0);
    assert!(out
        .stdout
        .contains("Generated 0 VCC(s), 0 remaining after simplification"));
    assert!(!out.stdout.contains("Solving with"));
    assert!(out.stdout.ends_with("VERIFICATION SUCCESSFUL\n"));
}

#[test]
fn verbosity_hides_status_lines() {
    let out = minibmc(&[
        "--function",
        "abs",
        "--signed-overflow-check",
        "--verbosity",
        "4",
        &corpus("abs.c"),
    ]);
    assert!(!out.stdout.contains("Parsing"));
    assert!(out.stdout.contains("** Results:"));
    let out = minibmc(&[
        "--function",
        "abs",
        "--signed-overflow-check",
        "--verbosity",
        "6",
        &corpus("abs.c"),
    ]);
    assert!(out.stdout.contains("Parsing"));
    assert!(!out.stdout.contains("Runtime decision procedure"));
}

#[test]
fn machine_readable_reports() {
    let abs = corpus("abs.c");
    let out = minibmc(&["--function", "abs", "--signed-overflow-check", "--json-ui", &abs]);
    assert_eq!(out.code, 10);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["cProverStatus"], "failure");
    assert_eq!(doc["result"][0]["property"], "abs.overflow.1");
    assert_eq!(doc["result"][0]["trace"][0]["values"][0]["data"], "-2147483648");

    let out = minibmc(&["--function", "abs", "--signed-overflow-check", "--xml-ui", &abs]);
    assert!(out.stdout.starts_with("<?xml"));
    assert!(out
        .stdout
        .contains("<result property=\"abs.overflow.1\" class=\"overflow\" status=\"FAILURE\">"));
    assert!(out.stdout.trim_end().ends_with("</cprover>"));
    assert_eq!(
        out.stdout.matches("<result ").count(),
        out.stdout.matches("</result>").count()
    );
}

#[test]
fn exit_codes() {
    assert_eq!(minibmc(&[]).code, 1);
    assert_eq!(minibmc(&["--no-such-flag", &corpus("abs.c")]).code, 1);
    assert_eq!(
        minibmc(&["--unwinding-assertions", "--partial-loops", &corpus("lock.c")]).code,
        1
    );
    assert_eq!(minibmc(&["--compile-only", &corpus("abs.c")]).code, 1);
    assert_eq!(minibmc(&["--help"]).code, 0);
    assert_eq!(minibmc(&["-?"]).code, 0);
    assert_eq!(minibmc(&["--version"]).code, 0);
    assert_eq!(minibmc(&["/nonexistent/x.c"]).code, 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.c");
    std::fs::write(&bad, "int main( {").unwrap();
    let out = minibmc(&[bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("syntax error") || out.stdout.contains("syntax error"));

    let spin = dir.path().join("spin.c");
    std::fs::write(&spin, "int main() { int n; while(n) n--; return 0; }\n").unwrap();
    let out = minibmc(&[spin.to_str().unwrap()]);
    assert_eq!(out.code, 6);
    assert!(out.stderr.contains("--unwind"));
    assert_eq!(minibmc(&["--unwind", "3", spin.to_str().unwrap()]).code, 0);
    assert_eq!(
        minibmc(&["--unwind", "3", "--unwinding-assertions", spin.to_str().unwrap()]).code,
        10
    );
}

#[test]
fn dumps() {
    let abs = corpus("abs.c");
    let out = minibmc(&[
        "--show-properties",
        "--function",
        "abs",
        "--signed-overflow-check",
        &abs,
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("Property abs.overflow.1:\n"));
    let out = minibmc(&["--show-goto-functions", "--function", "abs", &abs]);
    assert!(out.stdout.contains("END_FUNCTION"));
    assert!(!out.stdout.contains("VERIFICATION"));
    let out = minibmc(&["--show-loop-ids", &corpus("lock.c")]);
    assert!(out.stdout.starts_with("Loop main.0:\n"));
    let out = minibmc(&["--show-vcc", "--function", "abs", "--signed-overflow-check", &abs]);
    assert_eq!(out.code, 0);
    assert!(!out.stdout.is_empty());
}

#[test]
fn loops() {
    let bs = corpus("binsearch.c");
    let out = minibmc(&[
        "--function",
        "binsearch",
        "--unwind",
        "6",
        "--bounds-check",
        "--unwinding-assertions",
        &bs,
    ]);
    assert_eq!(out.code, 0);
    assert!(!common::statuses(&out.stdout).is_empty());
    assert!(common::statuses(&out.stdout).iter().all(|(_, s)| s == "SUCCESS"));
    let out = minibmc(&[
        "--function",
        "binsearch",
        "--unwind",
        "5",
        "--bounds-check",
        "--unwinding-assertions",
        &bs,
    ]);
    assert_eq!(out.code, 10);
    assert!(out
        .stdout
        .contains("[binsearch.unwind.0] line 6 unwinding assertion loop 0: FAILURE"));

    let out = minibmc(&[
        "--unwindset",
        "main.0:101",
        "--unwinding-assertions",
        &corpus("for_loop.c"),
    ]);
    let st = common::statuses(&out.stdout);
    assert!(
        st.contains(&("main.unwind.0".to_string(), "SUCCESS".to_string())),
        "{}",
        out.stdout
    );
}

#[test]
fn cover_output() {
    let out = minibmc(&["--cover", "branch", "--verbosity", "4", &corpus("decision.c")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("** 2 of 2 covered (100.0%)"));
    assert!(out.stdout.contains("Test suite:\nTest 1.\n  (iteration 1) a="));
    assert!(out.stdout.contains("\nTest 2.\n"));
    assert!(!out.stdout.contains("\nTest 3.\n"));

    let out = minibmc(&["--cover", "mcdc", "--json-ui", &corpus("decision.c")]);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["tests"].as_array().unwrap().len(), 3);
    assert_eq!(doc["goals"].as_array().unwrap().len(), 6);

    assert_eq!(minibmc(&["--cover", "path", &corpus("decision.c")]).code, 1);
    assert_eq!(
        minibmc(&["--cover", "branch", "--unwinding-assertions", &corpus("decision.c")]).code,
        1
    );
}

#[test]
fn compile_link_and_check_models() {
    let dir = tempfile::tempdir().unwrap();
    let split = common::corpus("split/lock");
    let parts = [split.join("lock.c"), split.join("main.c")];
    let mut models = Vec::new();
    for p in &parts {
        let gb = dir.path().join(p.file_name().unwrap()).with_extension("gb");
        let out = minibmc(&["--compile-only", "-o", gb.to_str().unwrap(), p.to_str().unwrap()]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        models.push(gb);
    }
    let linked = dir.path().join("linked.gb");
    let out = run(
        env!("CARGO_BIN_EXE_minibmc-link"),
        &[
            models[0].to_str().unwrap(),
            models[1].to_str().unwrap(),
            "-o",
            linked.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.code, 0, "{}", out.stderr);

    let from_model = minibmc(&["--unwind", "2", linked.to_str().unwrap()]);
    let from_source = minibmc(&["--unwind", "2", parts[0].to_str().unwrap(), parts[1].to_str().unwrap()]);
    assert_eq!(from_model.code, 10);
    assert_eq!(
        common::statuses(&from_model.stdout),
        common::statuses(&from_source.stdout)
    );

    let bad = run(env!("CARGO_BIN_EXE_minibmc-link"), &[models[0].to_str().unwrap()], None);
    assert_eq!(bad.code, 1);
}

#[test]
fn arguments_from_an_interface_document() {
    let abs = corpus("abs.c");
    let doc =
        serde_json::json!({ "arguments": ["--function", "abs", "--signed-overflow-check", "--verbosity", "4", abs] });
    let out = run(
        env!("CARGO_BIN_EXE_minibmc"),
        &["--json-interface"],
        Some(&doc.to_string()),
    );
    assert_eq!(out.code, 10);
    assert!(out.stdout.contains("[abs.overflow.1]"));

    let xml = format!(
        "<arguments><argument>--function</argument><argument>abs</argument><argument>{abs}</argument></arguments>"
    );
    let out = run(env!("CARGO_BIN_EXE_minibmc"), &["--xml-interface"], Some(&xml));
    assert_eq!(out.code, 0, "{}", out.stderr);
}
