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

//! JSON views of results with external project and voter ids.
//!
//! Every map is a `serde_json::Map`, which keeps keys sorted, so rendered
//! documents are canonical.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::exante::ExAnteReport;
use crate::expost::ExPostReport;
use crate::model::{FractionalOutcome, IntegralOutcome, Lottery, PbInstance, Rational};
use crate::oracle::FeasibilityVerdict;

/// Result of one axiom check in a run or verify report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    /// What was checked: `fractional`, `outcome`, or `samples`.
    pub target: String,
    pub holds: bool,
    /// Number of failing samples, for `samples` targets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failures: Option<usize>,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub instance_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fractional: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spends_budget: Option<bool>,
    pub outcomes: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_marginals: Option<Value>,
    pub axioms: Vec<AxiomResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, instance: &PbInstance) -> Self {
        RunReport {
            command: command.to_string(),
            instance_digest: instance.digest(),
            rule: None,
            seed: None,
            samples: None,
            fractional: None,
            spends_budget: None,
            outcomes: Vec::new(),
            empirical_marginals: None,
            axioms: Vec::new(),
            trace: None,
            timing_ms: 0.0,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.axioms.iter().all(|a| a.holds)
    }

    /// Sorted-key JSON.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub fn project_ids(instance: &PbInstance, projects: impl IntoIterator<Item = usize>) -> Value {
    Value::Array(
        projects
            .into_iter()
            .map(|c| Value::String(instance.project_ids()[c].clone()))
            .collect(),
    )
}

pub fn voter_ids(instance: &PbInstance, voters: impl IntoIterator<Item = usize>) -> Value {
    Value::Array(
        voters
            .into_iter()
            .map(|i| Value::String(instance.voter_ids()[i].clone()))
            .collect(),
    )
}

pub fn outcome_json(instance: &PbInstance, outcome: &IntegralOutcome) -> Value {
    project_ids(instance, outcome.iter())
}

/// Project id to rational string.
pub fn fractional_json(instance: &PbInstance, values: &[Rational]) -> Value {
    let map: Map<String, Value> = instance
        .project_ids()
        .iter()
        .zip(values)
        .map(|(id, x)| (id.clone(), Value::String(x.to_string())))
        .collect();
    Value::Object(map)
}

pub fn fractional_outcome_json(instance: &PbInstance, p: &FractionalOutcome) -> Value {
    fractional_json(instance, p.values())
}

pub fn lottery_json(instance: &PbInstance, lottery: &Lottery) -> Value {
    Value::Array(
        lottery
            .support()
            .iter()
            .map(|(w, o)| json!({ "weight": w.to_string(), "outcome": outcome_json(instance, o) }))
            .collect(),
    )
}

pub fn exante_json(instance: &PbInstance, report: &ExAnteReport) -> Value {
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "voters": voter_ids(instance, w.voters.iter().copied()),
                "utility": w.lhs.to_string(),
                "bound": w.rhs.to_string(),
            })
        })
        .collect();
    json!({ "axiom": report.axiom, "holds": report.holds, "witnesses": witnesses })
}

pub fn expost_json(instance: &PbInstance, report: &ExPostReport) -> Value {
    let witness = report.witness.as_ref().map(|w| {
        let mut map = Map::new();
        map.insert(
            "projects".into(),
            project_ids(instance, w.projects.iter().copied()),
        );
        map.insert(
            "voters".into(),
            voter_ids(instance, w.voters.iter().copied()),
        );
        map.insert("note".into(), Value::String(w.note.clone()));
        if let Some(beta) = w.beta {
            map.insert("beta".into(), json!(beta));
        }
        if let Some(alpha) = &w.alpha {
            map.insert("alpha".into(), Value::String(alpha.to_string()));
        }
        Value::Object(map)
    });
    json!({ "axiom": report.axiom, "holds": report.holds, "witness": witness })
}

pub fn verdict_json(instance: &PbInstance, verdict: &FeasibilityVerdict) -> Value {
    json!({
        "feasible": verdict.feasible,
        "certificate": verdict.certificate.as_ref().map(|l| lottery_json(instance, l)),
        "fractional": verdict.p.as_ref().map(|p| fractional_outcome_json(instance, p)),
        "farkas": verdict.farkas.as_ref().map(|y| y.iter().map(ToString::to_string).collect::<Vec<_>>()),
        "note": verdict.note,
        "outcomes": verdict.outcomes,
        "pivots": verdict.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expost::check_jr_binary;
    use crate::oracle::gen_gfs_jr_family;

    #[test]
    fn witness_uses_external_ids() {
        let inst = gen_gfs_jr_family(6, &Rational::one(), &Rational::new(1, 12)).unwrap();
        let w = IntegralOutcome::new([
            inst.project_index("a1").unwrap(),
            inst.project_index("b1").unwrap(),
        ]);
        let value = expost_json(&inst, &check_jr_binary(&inst, &w).unwrap());
        assert_eq!(value["holds"], json!(false));
        assert_eq!(value["witness"]["projects"], json!(["g*"]));
        assert_eq!(
            value["witness"]["voters"],
            json!(["v2", "v3", "v4", "v5", "v6"])
        );
    }
}
