use std::process::Command;

use cuspidal_cli::json::RecordJson;
use cuspidal_cli::output::{flat_row, OutputDocument, COLUMNS};
use serde_json::Value;

fn run(args: &[&str]) -> (String, String, i32) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cuspidal"));
    cmd.args(args).env_remove("CUSPIDAL_JOBS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn json(args: &[&str]) -> Value {
    let (out, err, code) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let raw: Value = serde_json::from_str(include_str!("../schema/curve_record.schema.json")).unwrap();
    jsonschema::JSONSchema::compile(&raw).unwrap()
}

fn assert_valid(doc: &Value) {
    let s = schema();
    let msgs: Vec<String> = match s.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("schema violations: {msgs:?}");
}

#[test]
fn enumerate_degree_12_three_pairs() {
    let doc = json(&["enumerate", "--degree", "12", "--pairs", "3"]);
    let recs = doc["records"].as_array().unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["newton_pairs"], serde_json::json!([[2, 3], [2, 5], [2, 3]]));
    assert_eq!(recs[0]["multiplicity_sequence"], "8,4_4,2_3");
    assert_valid(&doc);
}

#[test]
fn enumerate_degree_24_four_pairs() {
    let doc = json(&["enumerate", "--degree", "24", "--pairs", "4"]);
    let recs = doc["records"].as_array().unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["multiplicity_sequence"], "16,8_4,4_3,2_3");
}

#[test]
fn enumerate_empty_is_success() {
    let doc = json(&["enumerate", "--degree", "7", "--pairs", "3"]);
    assert_eq!(doc["records"].as_array().unwrap().len(), 0);
    assert_valid(&doc);
}

#[test]
fn enumerate_paranoid_matches_pruned() {
    let a = json(&["enumerate", "--degree", "16", "--pairs", "2"]);
    let b = json(&["enumerate", "--degree", "16", "--pairs", "2", "--paranoid"]);
    assert_eq!(a["records"], b["records"]);
    assert_eq!(b["metadata"]["mode"], "paranoid");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["enumerate", "--degree", "12"],
        vec!["enumerate", "--degree", "12", "--pairs", "0"],
        vec!["enumerate", "--degree", "2", "--pairs", "1"],
        vec!["enumerate", "--degree", "12", "--pairs", "1", "--jobs", "0"],
        vec!["enumerate", "--degree", "12", "--pairs", "1", "--format", "xml"],
        vec!["reproduce", "--table", "table9"],
        vec!["family", "tono-x", "--a", "3"],
        vec!["family", "tono-ib", "--a", "3"],
        vec!["family", "tono-ia", "--a", "2"],
        vec!["reduce", "--degree", "24", "--mult", "16,8_0"],
        vec!["factorizations", "--n", "0"],
        vec!["frobnicate"],
    ] {
        let (_, err, code) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn invariants_orevkov_example() {
    let doc = json(&["invariants", "--pairs", "(3,22)", "--degree", "8"]);
    let r = &doc["records"][0];
    assert_eq!(r["lct"], serde_json::json!({"num": 25, "den": 66}));
    assert_eq!(r["self_intersection"], -2);
    assert_eq!(r["bl_check"]["passed"], true);
    assert_eq!(r["family"], "orevkov(1)");
    assert_eq!(r["kodaira"], "2");
    assert_valid(&doc);
}

#[test]
fn invariants_cuspidal_cubic() {
    let doc = json(&["invariants", "--pairs", "(2,3)", "--degree", "3"]);
    let r = &doc["records"][0];
    assert_eq!(r["delta"], 1);
    assert_eq!(r["multiplicity_sequence"], "2");
    assert_eq!(r["bl_check"]["passed"], true);
    assert_eq!(r["existence"], "proved-base");
}

#[test]
fn invariants_semigroup_failure() {
    let doc = json(&["invariants", "--pairs", "(3,7)", "--degree", "5"]);
    let bl = &doc["records"][0]["bl_check"];
    assert_eq!(bl["passed"], false);
    assert_eq!(bl["j"], 1);
    assert_eq!(bl["expected"], 3);
    assert_eq!(bl["actual"], 2);
}

#[test]
fn invariants_invalid_pairs_name_the_violation() {
    let (_, err, code) = run(&["invariants", "--pairs", "(3,6)", "--degree", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("gcd"), "{err}");
    let (_, err, code) = run(&["invariants", "--pairs", "(5,3)", "--degree", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("q_1 > p_1"), "{err}");
}

#[test]
fn invariants_wrong_degree_is_noted() {
    let doc = json(&["invariants", "--pairs", "(2,3)", "--degree", "5"]);
    assert!(doc["metadata"]["notes"][0].as_str().unwrap().contains("differs"));
    assert_eq!(doc["records"][0]["existence"], "candidate");
}

#[test]
fn reproduce_exact_tables() {
    for (table, line) in [
        ("threepairs", "threepairs: 22/22 rows match [ok]"),
        ("fourpairs", "fourpairs: 1/1 rows match [ok]"),
        ("induct", "induct: 20/20 rows match [ok]"),
        ("onepair", "onepair: 47/47 rows match [ok]"),
        ("lct-orevkov", "lct-orevkov: 8/8 rows match [ok]"),
    ] {
        let (out, err, code) = run(&["reproduce", "--table", table]);
        assert_eq!(code, 0, "{table}: {out}{err}");
        assert_eq!(out.trim_end(), line);
    }
}

#[test]
fn reproduce_flags_errata() {
    let (out, _, code) = run(&["reproduce", "--table", "lct-tono"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("lct-tono: 24/36 rows match, 12 flagged [ok]"), "{out}");
    assert!(out.lines().skip(1).all(|l| l.starts_with("  ~ tono-iib(")));
    let (_, _, code) = run(&["reproduce", "--table", "lct-tono", "--strict"]);
    assert_eq!(code, 1);
    let (out, _, code) = run(&["reproduce", "--table", "lct-kashiwara"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("lct-kashiwara: 169/175 rows match, 6 flagged [ok]"), "{out}");
}

// The two-pair search finds curves absent from the printed list; the diff
// must report them rather than hide them.
#[test]
fn reproduce_twopairs_reports_extras() {
    let (out, _, code) = run(&["reproduce", "--table", "twopairs"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("twopairs: 57/57 rows match [MISMATCH]"), "{out}");
    let extras: Vec<&str> = out.lines().filter(|l| l.starts_with("  + ")).collect();
    assert_eq!(extras.len(), 11, "{out}");
    assert!(extras[0].starts_with("  + 9  (2,9),(2,5)"));
    assert!(out.contains("  ? 17  (2,7),(4,17)"));
    assert!(out.contains("  ? 20  (2,3),(6,31)"));
    assert!(!out.contains("  - "));
}

#[test]
fn family_tono_ib() {
    let doc = json(&["family", "tono-ib", "--a", "3", "--s", "2"]);
    let r = &doc["records"][0];
    assert_eq!(r["degree"], 19);
    assert_eq!(r["family"], "tono-ib(3,2)");
    assert_eq!(r["existence"], "proved-family");
    assert_eq!(r["bl_check"]["passed"], true);
    assert_valid(&doc);
    let same = json(&["family", "tono-ib", "--params", "3,2"]);
    assert_eq!(doc, same);
}

#[test]
fn family_kashiwara_flags() {
    let a = json(&["family", "kashiwara-ii-plus-ge", "--l", "0", "--lambda", "1,1"]);
    let b = json(&["family", "kashiwara-ii-plus-ge", "--params", "0,2,1,1"]);
    assert_eq!(a, b);
    assert_eq!(a["records"][0]["family"], "kashiwara-ii-plus-ge(0,2,1,1)");
}

#[test]
fn family_erratum_is_noted() {
    let doc = json(&["family", "tono-iib", "--n", "2", "--s", "2"]);
    assert!(doc["metadata"]["notes"][0].as_str().unwrap().contains("(s-1)"));
}

#[test]
fn family_out_of_budget_semigroup_check_is_reported() {
    let doc = json(&["family", "kashiwara-ii-plus-ge", "--l", "3", "--lambda", "0,0"]);
    let bl = &doc["records"][0]["bl_check"];
    assert_eq!(bl["passed"], false);
    assert!(bl["note"].as_str().unwrap().contains("budget"));
    assert!(doc["records"][0]["degree"].is_u64());
    assert_valid(&doc);
}

#[test]
fn reduce_chain() {
    let doc = json(&["reduce", "--degree", "24", "--mult", "16,8x4,4_3,2_3"]);
    assert_eq!(doc["existence"], "proved-reduction");
    let degrees: Vec<u64> = doc["reduction_chain"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["to"]["degree"].as_u64().unwrap())
        .collect();
    assert_eq!(degrees, vec![8, 4, 4]);
    assert_eq!(doc["reduction_chain"][2]["rule"], "base");
}

#[test]
fn reduce_unresolved_is_candidate() {
    let doc = json(&["reduce", "--degree", "17", "--mult", "8,6,2_3"]);
    assert_eq!(doc["existence"], "candidate");
    assert_eq!(doc["reduction_chain"].as_array().unwrap().len(), 0);
}

#[test]
fn factorizations_count() {
    assert_eq!(json(&["factorizations", "--n", "12"])["count"], 8);
    let doc = json(&["factorizations", "--n", "6", "--list"]);
    assert_eq!(doc["factorizations"], serde_json::json!([[2, 3], [3, 2], [6]]));
}

#[test]
fn prime_scan() {
    let doc = json(&["prime-scan", "--max", "50"]);
    let ps: Vec<u64> = doc["primes"].as_array().unwrap().iter().map(|p| p["p"].as_u64().unwrap()).collect();
    assert_eq!(ps, vec![5, 13, 17, 19, 37, 41]);
}

#[test]
fn classify_frontier_note() {
    let doc = json(&["classify", "--max-degree", "12", "--pairs", "3"]);
    assert!(doc["metadata"].get("frontier").is_none());
    assert_eq!(doc["records"].as_array().unwrap().len(), 1);
    let doc = json(&["classify", "--max-degree", "32", "--pairs", "4"]);
    assert!(doc["metadata"]["frontier"].is_string());
    assert_valid(&doc);
}

#[test]
fn jobs_do_not_change_output() {
    let base = run(&["enumerate", "--degree", "30", "--pairs", "3", "--jobs", "1"]).0;
    assert_eq!(run(&["enumerate", "--degree", "30", "--pairs", "3", "--jobs", "4"]).0, base);
    assert_eq!(run_env(&["enumerate", "--degree", "30", "--pairs", "3"], &[("CUSPIDAL_JOBS", "3")]).0, base);
    let (_, _, code) = run_env(&["enumerate", "--degree", "30", "--pairs", "3"], &[("CUSPIDAL_JOBS", "0")]);
    assert_eq!(code, 2);
}

#[test]
fn timing_is_opt_in() {
    let doc = json(&["enumerate", "--degree", "12", "--pairs", "2"]);
    assert!(doc["metadata"].get("elapsed_ms").is_none());
    let doc = json(&["enumerate", "--degree", "12", "--pairs", "2", "--timing"]);
    assert!(doc["metadata"]["elapsed_ms"].is_u64());
}

#[test]
fn formats_carry_the_same_data() {
    let args = ["classify", "--max-degree", "24", "--pairs", "3,4"];
    let (j, _, _) = run(&args);
    let doc: OutputDocument = serde_json::from_str(&j).unwrap();
    let want: Vec<Vec<String>> = doc.records.iter().map(flat_row).collect();
    assert!(!want.is_empty());

    let (c, _, code) = run(&[&args[..], &["--format", "csv"]].concat());
    assert_eq!(code, 0);
    assert!(!c.contains('\r'));
    let mut rd = csv::Reader::from_reader(c.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), COLUMNS.to_vec());
    let got: Vec<Vec<String>> = rd.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect();
    assert_eq!(got, want);

    let (m, _, code) = run(&[&args[..], &["--format", "md"]].concat());
    assert_eq!(code, 0);
    let rows: Vec<Vec<String>> = m
        .lines()
        .skip(2)
        .map(|l| {
            l.trim_start_matches("| ")
                .trim_end_matches(" |")
                .split(" | ")
                .map(str::to_string)
                .collect()
        })
        .collect();
    assert_eq!(rows, want);
}

#[test]
fn json_round_trip() {
    let (j, _, _) = run(&["classify", "--max-degree", "30"]);
    let doc: OutputDocument = serde_json::from_str(&j).unwrap();
    assert!(doc.records.len() > 100);
    for r in &doc.records {
        let rec = r.to_record().unwrap();
        assert_eq!(&RecordJson::from(&rec), r);
    }
    assert_eq!(serde_json::to_string_pretty(&doc).unwrap() + "\n", j);
}

#[test]
fn tampered_record_is_rejected() {
    let doc = json(&["invariants", "--pairs", "(2,3),(2,5)", "--degree", "6"]);
    let mut r: RecordJson = serde_json::from_value(doc["records"][0].clone()).unwrap();
    r.to_record().unwrap();
    r.delta = cuspidal_cli::json::Num(11.into());
    assert!(r.to_record().is_err());
}
