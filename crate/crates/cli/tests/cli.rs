use std::collections::BTreeSet;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secant3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = run(&a);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn digit_runs(s: &str) -> BTreeSet<String> {
    s.split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Every number printed in text mode also occurs in the JSON report.
fn assert_text_numbers_in_json(args: &[&str]) {
    let text = stdout(&run(args));
    let j = json(args).to_string();
    let missing: Vec<_> = digit_runs(&text).difference(&digit_runs(&j)).cloned().collect();
    assert!(missing.is_empty(), "{args:?}: {missing:?} missing from JSON\n{text}");
}

#[test]
fn flatten_examples() {
    let v = json(&["flatten", "--form", "x0^2*x1", "--nvars", "2", "--k", "2"]);
    assert_eq!(v["ranks"]["2"], 2);
    assert_eq!(v["details"]["rows"], 3);
    assert_eq!(v["details"]["cols"], 2);
    let v = json(&["flatten", "--form", "x0^4", "--k", "2"]);
    assert_eq!(v["ranks"]["2"], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["flatten", "--form", "x0+x1^2", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["flatten", "--form", "x0^2 +* x1", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["flatten", "--form", "x3^2", "--nvars", "2", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["flatten", "--form", "x0^3", "--k", "3"]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "--form", "x0^2+x1^2+x2^2"]).status.code(), Some(3));
    assert_eq!(run(&["conormal", "--form", "x0^4+x1^4", "--nvars", "3"]).status.code(), Some(3));
    assert_eq!(run(&["hilbert", "--net", "mixed", "--d", "13"]).status.code(), Some(3));
    assert_eq!(run(&["verify-table", "--d-range", "3..11"]).status.code(), Some(3));
    assert_eq!(run(&["verify-table", "--d-range", "5..4"]).status.code(), Some(2));
    assert_eq!(run(&["canonical", "sextic", "--d", "4", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["flatten", "--file", "/nonexistent", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn force_lifts_guard() {
    let o = run(&["hilbert", "--net", "unmixed", "--d", "13", "--force"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: agree"));
}

#[test]
fn analyze_examples() {
    let v = json(&["analyze", "--form", "x0^4 + x1^4 + x2^4"]);
    assert_eq!(v["verdict"], "smooth");
    assert_eq!(v["orbit_class"], "Fermat");
    assert_eq!(v["conormal_dim"], 6);
    assert_eq!(v["expected_codim"], 6);

    let quartic = "x0^4 + x1^4 + x0^4 + 4*x0^3*x1 + 6*x0^2*x1^2 + 4*x0*x1^3 + x1^4";
    let v = json(&["analyze", "--form", quartic, "--nvars", "4"]);
    assert_eq!(v["verdict"], "singular");
    assert_eq!(v["orbit_class"], "DegenerateBinary");
    assert_eq!(v["memberships"]["D"], true);
    assert_eq!(v["conormal_dim"], 22);
    assert_eq!(v["expected_codim"], 23);

    let quintic = "x0^5 + x1^5 + x0^5 + 5*x0^4*x1 + 10*x0^3*x1^2 + 10*x0^2*x1^3 + 5*x0*x1^4 + x1^5";
    let v = json(&["analyze", "--form", quintic, "--nvars", "4"]);
    assert_eq!(v["verdict"], "smooth");
    assert_eq!(v["conormal_dim"], 44);
    assert_eq!(v["expected_codim"], 44);

    let v = json(&["analyze", "--form", "x0^3 + x1^3 + x2^3"]);
    assert_eq!(v["verdict"], "d3-classified");
    assert_eq!(v["caveats"][0], "necessary conditions only for d=3");
}

#[test]
fn hilbert_examples() {
    for (net, d, value) in [("unmixed", "4", 6), ("mixed", "5", 12), ("unmixed", "3", 0)] {
        let v = json(&["hilbert", "--net", net, "--d", d]);
        assert_eq!(v["details"]["brute_force"], value);
        assert_eq!(v["details"]["closed_form"], value);
        assert_eq!(v["verdict"], "agree");
    }
}

#[test]
fn verify_table_examples() {
    let v = json(&["verify-table", "--d-range", "4..4", "--n-range", "3..3"]);
    let cells = v["details"]["cells"].as_array().unwrap();
    let degenerate = cells.iter().find(|c| c["kind"] == "DegenerateBinary").unwrap();
    assert_eq!(degenerate["verdict"], "singular");
    assert_eq!(degenerate["matches"], true);
    let v = json(&["verify-table", "--d-range", "3..3", "--n-range", "2..4"]);
    for c in v["details"]["cells"].as_array().unwrap() {
        assert_eq!(c["verdict"], "d3-classified");
    }
    assert_eq!(v["verdict"], "verified");
}

#[test]
fn text_numbers_appear_in_json() {
    let quartic = "x0^4 + x1^4 + 2*x0^4 + 8*x0^3*x1 + 24*x0^2*x1^2 + 32*x0*x1^3 + 16*x1^4";
    for args in [
        vec!["flatten", "--form", "x0^2*x1 + 3/2*x1^3", "--k", "1", "--entries"],
        vec!["analyze", "--form", "x0^5 + x1^5 + x2^5", "--nvars", "4"],
        vec!["analyze", "--form", quartic, "--nvars", "5"],
        vec!["classify", "--form", "x0^3*x1 + x2^4"],
        vec!["conormal", "--form", "x0^2*x1^2 + x0^3*x2"],
        vec!["membership", "--form", "x0^3 + x1^3 + x2^3"],
        vec!["hilbert", "--net", "mixed", "--d", "7"],
        vec!["canonical", "degenerate", "--d", "5", "--n", "3", "--alpha", "2", "--beta", "-1/3"],
        vec!["verify-table", "--d-range", "3..5", "--n-range", "2..3"],
    ] {
        assert_text_numbers_in_json(&args);
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["analyze", "--form", "x0^2*x1^2 + x0^3*x2", "--json"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
    let seq = run(&["verify-table", "--d-range", "4..5", "--n-range", "2..3", "--jobs", "1"]);
    let par = run(&["verify-table", "--d-range", "4..5", "--n-range", "2..3", "--jobs", "3"]);
    assert_eq!(stdout(&seq), stdout(&par));
    let seq = run(&["verify-table", "--d-range", "4..5", "--n-range", "2..3", "--jobs", "1", "--json"]);
    let par = run(&["verify-table", "--d-range", "4..5", "--n-range", "2..3", "--jobs", "3", "--json"]);
    assert_eq!(stdout(&seq), stdout(&par));
}

#[test]
fn timing_is_opt_in() {
    let v = json(&["membership", "--form", "x0^4"]);
    assert!(v["elapsed_ms"].is_null());
    let v = json(&["membership", "--form", "x0^4", "--timing"]);
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn file_input() {
    let path = std::env::temp_dir().join(format!("secant3-forms-{}.txt", std::process::id()));
    std::fs::write(
        &path,
        "# quartics\nx0^4 + x1^4 + x2^4\n\nx0^3*x1 + x2^4  # unmixed\nx0^2*x1^2 + x0^3*x2\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["classify", "--file", p, "--nvars", "3"]);
    let classes: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["orbit_class"].as_str().unwrap())
        .collect();
    assert_eq!(classes, ["Fermat", "Unmixed", "Mixed"]);

    std::fs::write(&path, "x0^4\nx0 + x1^2\n").unwrap();
    let o = run(&["membership", "--file", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("x0^4"));
    std::fs::remove_file(&path).unwrap();
}
