// Copyright 2026 The pb-bobw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_pb-bobw");

const TWO_VOTERS: &str = r#"{
  "budget": "2",
  "projects": [{"id": "a", "cost": "1"}, {"id": "b", "cost": "1"}, {"id": "c", "cost": "1"}],
  "voters": [{"id": "v1", "utilities": {"a": "1", "b": "1"}}, {"id": "v2", "utilities": {"a": "1", "c": "1"}}]
}"#;

const GENERAL: &str = r#"{
  "budget": "3",
  "projects": [{"id": "x", "cost": "2"}, {"id": "y", "cost": "2"}],
  "voters": [{"id": "v1", "utilities": {"x": "3", "y": "1/2"}}, {"id": "v2", "utilities": {"y": "2"}}]
}"#;

fn pb(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("PB_BOBW_LIMIT")
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exited normally")
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bw_mes_samples_match_marginals() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "two.json", TWO_VOTERS);
    let out = pb(&[
        "run",
        "--instance",
        s(&inst),
        "--rule",
        "bw-mes",
        "--seed",
        "42",
        "--samples",
        "1000",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["fractional"]["b"], "1/2");
    let b: pb_bobw::Rational = report["empirical_marginals"]["b"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!((b.to_f64() - 0.5).abs() <= 0.05, "empirical marginal {b}");
    assert_eq!(report["outcomes"].as_array().unwrap().len(), 1000);
    assert!(report["axioms"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a["holds"] == true));
}

#[test]
fn frd_report_asserts_the_budget() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "general.json", GENERAL);
    let out = pb(&["run", "--instance", s(&inst), "--rule", "frd"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["spends_budget"], true);
    assert_eq!(report["rule"], "frd");
    assert!(report.get("empirical_marginals").is_none());
}

#[test]
fn setting_mismatch_exits_2() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "general.json", GENERAL);
    for rule in ["gcr", "bw-gcr", "bw-mes"] {
        let out = pb(&["run", "--instance", s(&inst), "--rule", rule]);
        assert_eq!(code(&out), 2, "rule {rule}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("requires"));
    }
}

#[test]
fn reports_are_deterministic_up_to_timing() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "two.json", TWO_VOTERS);
    let run = || {
        let mut v = json(&pb(&[
            "run",
            "--instance",
            s(&inst),
            "--rule",
            "bw-gcr",
            "--seed",
            "7",
            "--samples",
            "20",
        ]));
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "two.json", TWO_VOTERS);
    let exact = write(&dir, "w.json", r#"{"outcome": ["a", "b"]}"#);
    let out = pb(&[
        "verify",
        "--instance",
        s(&inst),
        "--target",
        s(&exact),
        "--axioms",
        "bb1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["axioms"][0]["holds"], true);

    let out = pb(&[
        "verify",
        "--instance",
        s(&inst),
        "--target",
        s(&exact),
        "--axioms",
        "bogus",
    ]);
    assert_eq!(code(&out), 2);

    let p = write(
        &dir,
        "p.json",
        r#"{"fractional": {"a": "1", "b": "1/2", "c": "1/2"}}"#,
    );
    let out = pb(&[
        "verify",
        "--instance",
        s(&inst),
        "--target",
        s(&p),
        "--axioms",
        "sufs,gfs,ifs",
    ]);
    assert_eq!(code(&out), 0);
    // a fractional target cannot be checked for an ex-post axiom
    let out = pb(&[
        "verify",
        "--instance",
        s(&inst),
        "--target",
        s(&p),
        "--axioms",
        "jr",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_jr_failure_names_the_group() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("g.json");
    assert_eq!(
        code(&pb(&[
            "gen",
            "gfs-jr",
            "--n",
            "6",
            "--B",
            "1",
            "--eps",
            "1/12",
            "--out",
            s(&inst)
        ])),
        0
    );
    let target = write(&dir, "w.json", r#"{"outcome": ["a1", "b1"]}"#);
    let out = pb(&[
        "verify",
        "--instance",
        s(&inst),
        "--target",
        s(&target),
        "--axioms",
        "jr",
    ]);
    assert_eq!(code(&out), 1);
    let witness = &json(&out)["axioms"][0]["detail"]["witness"];
    assert_eq!(witness["projects"], serde_json::json!(["g*"]));
    assert_eq!(
        witness["voters"],
        serde_json::json!(["v2", "v3", "v4", "v5", "v6"])
    );
}

#[test]
fn gen_families() {
    let dir = TempDir::new().unwrap();
    let out = pb(&["gen", "gfs-jr", "--n", "6", "--B", "1", "--eps", "1/12"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["projects"].as_array().unwrap().len(), 19);

    let inst = dir.path().join("bfx.json");
    let p = dir.path().join("bfx-p.json");
    let out = pb(&[
        "gen",
        "bfx",
        "--budget",
        "1",
        "--eps",
        "1/10",
        "--out",
        s(&inst),
        "--fractional-out",
        s(&p),
    ]);
    assert_eq!(code(&out), 0);
    let p_doc: Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    assert_eq!(
        p_doc["fractional"],
        serde_json::json!({"a": "1", "b": "3/4", "c": "3/4"})
    );

    let out = pb(&["gen", "ifs-jr", "--n", "3", "--H", "5"]);
    assert_eq!(code(&out), 2);
    let out = pb(&["gen", "ifs-jr", "--n", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn oracle_verdicts() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("bfx.json");
    let p = dir.path().join("p.json");
    pb(&[
        "gen",
        "bfx",
        "--B",
        "1",
        "--eps",
        "1/10",
        "--out",
        s(&inst),
        "--fractional-out",
        s(&p),
    ]);
    let base = [
        "oracle",
        "--instance",
        s(&inst),
        "--mode",
        "implementable",
        "--fractional",
        s(&p),
    ];

    let out = pb(&[&base[..], &["--predicate", "bfx"]].concat());
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["feasible"], false);

    let out = pb(&[&base[..], &["--predicate", "bb1"]].concat());
    assert_eq!(code(&out), 0);
    let verdict = json(&out);
    let support = verdict["certificate"].as_array().unwrap();
    assert!(!support.is_empty());

    let ifs = dir.path().join("ifs.json");
    pb(&["gen", "ifs-jr", "--n", "4", "--H", "5", "--out", s(&ifs)]);
    let out = pb(&[
        "oracle",
        "--instance",
        s(&ifs),
        "--mode",
        "joint",
        "--predicate",
        "jr-general",
        "--builtin",
        "ifs",
    ]);
    assert_eq!(code(&out), 1);

    let out = pb(&[
        "oracle",
        "--instance",
        s(&ifs),
        "--mode",
        "implementable",
        "--predicate",
        "bb1",
    ]);
    assert_eq!(code(&out), 2);
    let out = pb(&[
        "oracle",
        "--instance",
        s(&ifs),
        "--mode",
        "joint",
        "--predicate",
        "nonsense",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn frd_output_is_bb1_implementable() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "general.json", GENERAL);
    let report = json(&pb(&["run", "--instance", s(&inst), "--rule", "frd"]));
    let target = serde_json::json!({ "fractional": report["fractional"] });
    let p = write(&dir, "p.json", &target.to_string());
    let out = pb(&[
        "oracle",
        "--instance",
        s(&inst),
        "--mode",
        "implementable",
        "--predicate",
        "bb1",
        "--fractional",
        s(&p),
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn custom_constraints_and_limits() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "two.json", TWO_VOTERS);
    let rows = write(
        &dir,
        "rows.json",
        r#"{"rows": [{"coefficients": {"b": "1"}, "relation": ">=", "bound": "1"}]}"#,
    );
    let out = pb(&[
        "oracle",
        "--instance",
        s(&inst),
        "--mode",
        "joint",
        "--predicate",
        "bb1",
        "--constraints",
        s(&rows),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = pb(&[
        "--limit-exp",
        "1",
        "run",
        "--instance",
        s(&inst),
        "--rule",
        "gcr",
    ]);
    assert_eq!(code(&out), 2);
    let out = Command::new(BIN)
        .args(["run", "--instance", s(&inst), "--rule", "gcr"])
        .env("PB_BOBW_LIMIT", "1,2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
}

#[test]
fn report_written_to_file() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "two.json", TWO_VOTERS);
    let path = dir.path().join("report.json");
    let out = pb(&[
        "run",
        "--instance",
        s(&inst),
        "--rule",
        "mes",
        "--out",
        s(&path),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(report["outcomes"], serde_json::json!([["a"]]));
    assert_eq!(report["trace"]["steps"][0]["rho"], "1/2");
}
