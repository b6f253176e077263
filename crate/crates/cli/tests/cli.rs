use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn rwb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rwb")).args(args).env_remove("RWB_BUDGET").output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = rwb(&[args, &["--format", "json"]].concat());
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Writes a JSON report and checks that `rwb verify` replays it.
fn verifies(args: &[&str], file: &str) {
    let out = rwb(&[args, &["--format", "json"]].concat());
    let path = scratch(file);
    std::fs::write(&path, &out.stdout).unwrap();
    let (v, code) = json(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["all_replayed"], true);
}

#[test]
fn r33_witness_search() {
    let (v, code) = json(&["arrow", "--class", "linear-orders", "--A", "chain2", "--B", "chain3", "--k", "2", "--search", "--max-size", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["search"]["outcome"], "found");
    assert_eq!(v["result"]["search"]["witness"]["size"], 6);
}

#[test]
fn maxdeg2_ap_certificate() {
    let (v, code) = json(&["check", "--class", "maxdeg2-graphs", "--props", "ap", "--max-size", "4"]);
    assert_eq!(code, 1);
    let w = &v["result"]["checks"]["ap"]["failure"];
    assert_eq!(w["a0"]["size"], 2);
    assert_eq!(w["a1"]["size"], 3);
    assert_eq!(w["a2"]["size"], 3);
    let human = rwb(&["check", "--class", "maxdeg2-graphs", "--props", "ap", "--max-size", "4"]);
    assert!(String::from_utf8_lossy(&human.stdout).contains("certificate"));
}

#[test]
fn convex_er_orders() {
    let (v, code) = json(&["order", "--class", "convex-er", "--max-size", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["report"]["candidates"].as_array().unwrap().len(), 4);
    let (v, code) = json(&["order", "--class", "graphs", "--max-size", "4"]);
    assert_eq!(code, 1);
    assert!(v["result"]["report"]["candidates"].as_array().unwrap().is_empty());
}

#[test]
fn arrow_exit_codes() {
    let (_, holds) = json(&["arrow", "--class", "linear-orders", "--A", "chain2", "--B", "chain3", "--C", "chain6"]);
    let (v, fails) = json(&["arrow", "--class", "linear-orders", "--A", "chain2", "--B", "chain3", "--C", "chain5"]);
    assert_eq!((holds, fails), (0, 1));
    assert_eq!(v["result"]["coloring"]["A_size"], 2);
}

#[test]
fn structures_from_files_and_inline_json() {
    let c = r#"{"signature":{"relations":[{"name":"<","arity":2}],"constants":[]},"size":3,"tables":{"<":[[0,1],[0,2],[1,2]]},"constant_map":{}}"#;
    let path = scratch("chain3.json");
    std::fs::write(&path, c).unwrap();
    let (v, code) = json(&["arrow", "--class", "linear-orders", "--A", "chain1", "--B", path.to_str().unwrap(), "--C", c, "--k", "1"]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(rwb(&["check", "--class", "posets", "--props", "hp", "--max-size", "3"]).status.code(), Some(2));
    assert_eq!(rwb(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rwb(&["arrow", "--class", "graphs", "--A", "chain2", "--B", "K2", "--C", "K3"]).status.code(), Some(2));
    assert_eq!(rwb(&["arrow", "--class", "linear-orders", "--A", "chain2", "--B", "chain3", "--C", "chain5", "--k", "0"]).status.code(), Some(2));
    assert_eq!(rwb(&["enumerate", "--class", "graphs", "--max-size", "2", "--budget", "10"]).status.code(), Some(2));
}

#[test]
fn budget_env_gives_exit_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_rwb"))
        .args(["arrow", "--class", "linear-orders", "--A", "chain2", "--B", "chain4", "--C", "chain10", "--format", "json"])
        .env("RWB_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "resource-limit");
    assert_eq!(v["config"]["node_budget"], 1000);
}

#[test]
fn reports_round_trip_through_verify() {
    verifies(&["arrow", "--class", "linear-orders", "--A", "chain2", "--B", "chain3", "--C", "chain5"], "arrow-fails.json");
    verifies(&["arrow", "--class", "linear-orders", "--A", "chain2", "--B", "chain3", "--C", "chain6"], "arrow-holds.json");
    verifies(&["witness", "--class", "linear-orders", "--A", "chain1", "--B", "chain3", "--k", "2", "--max-size", "6"], "witness.json");
    verifies(&["witness", "--class", "graphs", "--A", "empty2", "--B", "empty2", "--max-size", "5"], "no-witness.json");
    verifies(&["check", "--class", "maxdeg2-graphs", "--props", "hp,ap,rigidity", "--max-size", "4"], "check.json");
    verifies(&["order", "--class", "convex-er", "--max-size", "4"], "order.json");
    verifies(
        &["indiscernible", "--class", "linear-orders", "--C", "chain6", "--A", "chain3", "--random-palette", "2", "--seed", "3"],
        "indiscernible.json",
    );
}

#[test]
fn verify_rejects_a_tampered_coloring() {
    let out = rwb(&["arrow", "--class", "linear-orders", "--A", "chain2", "--B", "chain3", "--C", "chain5", "--format", "json"]);
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    for a in v["result"]["coloring"]["assignments"].as_array_mut().unwrap() {
        a["color"] = 0.into();
    }
    let path = scratch("tampered.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let (r, code) = json(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["all_replayed"], false);
}

#[test]
fn enumerate_and_catalog() {
    let (v, code) = json(&["enumerate", "--class", "convex-er", "--max-size", "4", "--counts-only"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["counts"], serde_json::json!([1, 1, 2, 4, 8]));
    let (v, _) = json(&["catalog", "--name", "convex-er"]);
    assert_eq!(v["result"]["entries"][0]["expected"]["order-types"], 4);
    let (v, code) = json(&["catalog", "--name", "maxdeg2-graphs", "--replay"]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn spec_files_are_accepted() {
    let spec = rwb_core::catalog::get_class("convex-er").unwrap().to_json();
    let path = scratch("convex-er.spec.json");
    std::fs::write(&path, spec).unwrap();
    let (v, code) = json(&["enumerate", "--spec", path.to_str().unwrap(), "--max-size", "3", "--counts-only"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["counts"], serde_json::json!([1, 1, 2, 4]));
}

#[test]
fn extension_check_with_host() {
    let (v, code) = json(&["check", "--class", "graphs", "--props", "extension", "--max-size", "3", "--host", "K3"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["checks"]["extension"]["verdict"], "FAIL");
    let missing = rwb(&["check", "--class", "graphs", "--props", "extension", "--max-size", "3"]);
    assert_eq!(missing.status.code(), Some(2));
}

/// Checks a report against the published envelope schema: required keys,
/// no extra keys, enumerated values, and the config's required fields.
fn conforms(report: &Value, schema: &Value) -> Result<(), String> {
    let obj = report.as_object().ok_or("report is not an object")?;
    let props = schema["properties"].as_object().unwrap();
    for key in schema["required"].as_array().unwrap() {
        let key = key.as_str().unwrap();
        if !obj.contains_key(key) {
            return Err(format!("missing `{key}`"));
        }
    }
    for (key, value) in obj {
        let rule = props.get(key).ok_or(format!("unexpected `{key}`"))?;
        if let Some(allowed) = rule.get("enum").and_then(Value::as_array) {
            if !allowed.contains(value) {
                return Err(format!("`{key}` = {value} not allowed"));
            }
        }
        if let Some(required) = rule.get("required").and_then(Value::as_array) {
            for r in required {
                if value.get(r.as_str().unwrap()).is_none() {
                    return Err(format!("`{key}` lacks {r}"));
                }
            }
        }
    }
    if obj["config"]["node_budget"].as_u64().unwrap_or(0) < 1000 {
        return Err("node_budget below minimum".into());
    }
    Ok(())
}

#[test]
fn reports_match_the_published_schema() {
    let schema: Value =
        serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let runs: [&[&str]; 8] = [
        &["enumerate", "--class", "graphs", "--max-size", "3"],
        &["check", "--class", "graphs", "--props", "hp,ap,types", "--max-size", "3"],
        &["arrow", "--class", "linear-orders", "--A", "chain2", "--B", "chain3", "--C", "chain5"],
        &["witness", "--class", "linear-orders", "--A", "chain1", "--B", "chain2", "--max-size", "4"],
        &["order", "--class", "linear-orders", "--max-size", "4"],
        &["indiscernible", "--class", "linear-orders", "--C", "chain5", "--A", "chain2", "--random-palette", "1"],
        &["generic", "--class", "graphs", "--size", "6"],
        &["catalog"],
    ];
    for args in runs {
        let (v, _) = json(args);
        conforms(&v, &schema).unwrap_or_else(|e| panic!("rwb {}: {e}", args.join(" ")));
    }
    let path = scratch("schema-arrow.json");
    std::fs::write(&path, rwb(&[runs[2], &["--format", "json"]].concat()).stdout).unwrap();
    let (v, _) = json(&["verify", path.to_str().unwrap()]);
    conforms(&v, &schema).unwrap();
}
