use std::fs;
use std::process::{Command, Output};

use derham_cli::document::{ReportDocument, Results};
use serde_json::Value;

fn derham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derham"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = derham(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

#[test]
fn cohomology_one_variable() {
    let (v, code) = json(&["cohomology", "-r", "1", "-n", "4", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "cohomology");
    assert_eq!(
        v["results"],
        serde_json::json!([{"i": 1, "free_rank": 0, "invariant_factors": [4]}])
    );
}

#[test]
fn cohomology_two_variables_degree_four() {
    let (v, _) = json(&["cohomology", "-r", "2", "-n", "4"]);
    assert_eq!(
        v["results"],
        serde_json::json!([
            {"i": 1, "free_rank": 0, "invariant_factors": [2, 4, 4]},
            {"i": 2, "free_rank": 0, "invariant_factors": [2]}
        ])
    );
}

#[test]
fn cohomology_degree_zero_is_free() {
    let (v, _) = json(&["cohomology", "-r", "1", "-n", "0"]);
    assert_eq!(v["results"], serde_json::json!([{"i": 0, "free_rank": 1, "invariant_factors": []}]));
}

#[test]
fn pages_table() {
    let (v, code) = json(&["pages", "-r", "2", "-n", "4", "-p", "2"]);
    assert_eq!(code, 0);
    let pages = v["results"]["pages"].as_array().unwrap();
    let dims: Vec<Value> = pages.iter().map(|pg| pg["dims"].clone()).collect();
    assert_eq!(dims, vec![serde_json::json!([3, 4, 1]), serde_json::json!([2, 2, 0]), serde_json::json!([0, 0, 0])]);
    assert!(pages.iter().all(|pg| pg["identified"] == true && pg["closed_form_agrees"] == true));
}

#[test]
fn pages_vanish_when_prime_does_not_divide() {
    let (v, _) = json(&["pages", "-r", "1", "-n", "3", "-p", "2"]);
    assert_eq!(v["results"]["nu"], 0);
    assert_eq!(v["results"]["pages"][0]["dims"], serde_json::json!([0, 0]));
}

#[test]
fn pages_degree_zero_is_degenerate() {
    let (v, code) = json(&["pages", "-r", "1", "-n", "0", "-p", "2"]);
    assert_eq!(code, 0);
    assert!(v["results"]["note"].as_str().unwrap().contains("degenerate"));
    assert_eq!(v["results"]["pages"], serde_json::json!([]));
}

#[test]
fn pages_reject_non_prime() {
    assert_eq!(derham(&["pages", "-r", "1", "-n", "4", "-p", "4"]).status.code(), Some(2));
}

#[test]
fn verify_single_statement() {
    let (v, code) = json(&["verify", "--statement", "filtration", "-r", "3", "-n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["status"], "pass");
    let (v, code) = json(&["verify", "--statement", "frobenius_iso", "-r", "1", "-n", "2", "-p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_all_small_sweep_passes() {
    let (v, code) = json(&["verify", "--all", "-r", "2", "-n", "6"]);
    assert_eq!(code, 0);
    assert!(v["results"].as_array().unwrap().len() > 50);
}

#[test]
fn verify_all_reports_the_literal_filtration_failure() {
    // The graded pieces at (2,8) do not match the cocycle dimensions of the
    // quotient complexes; every other report in the sweep passes.
    let (v, code) = json(&["verify", "--all", "-r", "2", "-n", "8"]);
    assert_eq!(code, 1);
    let failing: Vec<&Value> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|rep| rep["status"] == "fail")
        .collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["statement"], "filtration");
    assert_eq!(failing[0]["parameters"], serde_json::json!({"r": 2, "n": 8}));
    assert!(failing[0]["witness"].is_object());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(derham(&["verify", "--statement", "euler", "-r", "9999", "-n", "9999"]).status.code(), Some(2));
    assert_eq!(derham(&["verify", "--statement", "bogus", "-r", "1", "-n", "1"]).status.code(), Some(2));
    assert_eq!(derham(&["verify", "-r", "1", "-n", "1"]).status.code(), Some(2));
    assert_eq!(derham(&["cohomology", "-r", "-1", "-n", "2"]).status.code(), Some(2));
    assert_eq!(derham(&["cohomology", "-r", "0", "-n", "2"]).status.code(), Some(2));
    assert_eq!(derham(&["cohomology", "-r", "1", "-n", "2", "--csv", "--latex"]).status.code(), Some(2));
    assert_eq!(derham(&["verify", "--statement", "couple_morphism", "-r", "1", "-n", "0"]).status.code(), Some(2));
}

#[test]
fn unsafe_bounds_lift_the_guard() {
    assert_eq!(derham(&["cohomology", "-r", "1", "-n", "40"]).status.code(), Some(2));
    let (v, code) = json(&["cohomology", "-r", "1", "-n", "40", "--unsafe-bounds"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["invariant_factors"], serde_json::json!([40]));
}

#[test]
fn basis_orders() {
    let (v, _) = json(&["basis", "-r", "2", "-n", "2", "-i", "1"]);
    let forms: Vec<&str> = v["results"]["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["form"].as_str().unwrap())
        .collect();
    assert_eq!(forms, vec!["x dx", "y dx", "x dy", "y dy"]);
    let (v, _) = json(&["basis", "-r", "1", "-n", "4", "-i", "1"]);
    assert_eq!(v["results"]["elements"][0]["alpha"], serde_json::json!([3]));
    let (v, _) = json(&["basis", "-r", "2", "-n", "4", "-i", "3"]);
    assert_eq!(v["results"]["dim"], 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--all", "-r", "2", "-n", "6"];
    assert_eq!(derham(&args).stdout, derham(&args).stdout);
    let args = ["pages", "-r", "3", "-n", "8", "-p", "2"];
    assert_eq!(derham(&args).stdout, derham(&args).stdout);
}

#[test]
fn json_round_trips() {
    for args in [
        vec!["cohomology", "-r", "2", "-n", "6"],
        vec!["cohomology", "-r", "1", "-n", "1"],
        vec!["pages", "-r", "2", "-n", "4", "-p", "2"],
        vec!["pages", "-r", "1", "-n", "0", "-p", "3"],
        vec!["verify", "--all", "-r", "1", "-n", "8"],
        vec!["verify", "--statement", "couple_morphism", "-r", "2", "-n", "2"],
        vec!["basis", "-r", "3", "-n", "3", "-i", "2"],
    ] {
        let text = stdout(&derham(&args));
        let doc: ReportDocument = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
        assert_eq!(serde_json::from_str::<ReportDocument>(&again).unwrap(), doc);
    }
}

#[test]
fn payload_kinds_survive_parsing() {
    let text = stdout(&derham(&["cohomology", "-r", "1", "-n", "1"]));
    let doc: ReportDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.results, Results::Cohomology(Vec::new()));
    let text = stdout(&derham(&["verify", "--statement", "annihilation", "-r", "1", "-n", "3"]));
    let doc: ReportDocument = serde_json::from_str(&text).unwrap();
    assert!(matches!(doc.results, Results::Verify(ref v) if v.len() == 1));
}

#[test]
fn cache_is_reused_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["cohomology", "-r", "2", "-n", "4", "--cache", cache];
    let first = derham(&args);
    let file = dir.path().join("v1-cohomology-r2-n4.json");
    assert!(file.exists());
    assert_eq!(derham(&args).stdout, first.stdout);

    // A planted document under the right key is served as is.
    let mut doc: Value = serde_json::from_slice(&first.stdout).unwrap();
    doc["results"][0]["invariant_factors"] = serde_json::json!([7]);
    fs::write(&file, doc.to_string()).unwrap();
    let (v, _) = json(&args);
    assert_eq!(v["results"][0]["invariant_factors"], serde_json::json!([7]));

    // Other schema versions and corrupt files are recomputed and overwritten.
    doc["schema_version"] = "0".into();
    fs::write(&file, doc.to_string()).unwrap();
    assert_eq!(derham(&args).stdout, first.stdout);
    fs::write(&file, "{").unwrap();
    assert_eq!(derham(&args).stdout, first.stdout);
    let stored: ReportDocument = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(stored.schema_version, "1");
}

#[test]
fn timing_is_opt_in() {
    let (v, _) = json(&["cohomology", "-r", "1", "-n", "2"]);
    assert!(v.get("timing").is_none());
    let (v, _) = json(&["cohomology", "-r", "1", "-n", "2", "--timing"]);
    assert!(v["timing"]["elapsed_ms"].is_number());
}

#[test]
fn csv_and_latex() {
    let csv = stdout(&derham(&["cohomology", "-r", "2", "-n", "4", "--csv"]));
    assert_eq!(csv, "i,free_rank,invariant_factors\n1,0,2 4 4\n2,0,2\n");
    let tex = stdout(&derham(&["cohomology", "-r", "2", "-n", "4", "--latex"]));
    assert!(tex.contains(r"1 & $\mathbb{Z}/2 \oplus (\mathbb{Z}/4)^{2}$ \\"));
    let csv = stdout(&derham(&["pages", "-r", "2", "-n", "4", "-p", "2", "--csv"]));
    assert_eq!(csv.lines().count(), 1 + 3 * 3);
    let csv = stdout(&derham(&["verify", "--statement", "cartier", "-r", "1", "-n", "2", "--csv"]));
    assert_eq!(csv, "statement,r,n,p,k,status,failed_checks\ncartier,1,2,2,,pass,\ncartier,1,2,3,,pass,\n");
    let tex = stdout(&derham(&["basis", "-r", "2", "-n", "3", "-i", "2", "--latex"]));
    assert!(tex.contains(r"x\,dx \wedge dy"));
}
