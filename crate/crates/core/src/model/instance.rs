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

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use super::outcome::{FractionalOutcome, IntegralOutcome};
use super::Rational;
use crate::error::{Error, Result};

/// The most specific utility/cost restriction an instance falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setting {
    General,
    BinaryUtilities,
    CostUtilities,
    UnitCost,
    /// Unit costs and binary utilities.
    Committee,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Setting::General => "general",
            Setting::BinaryUtilities => "binary-utilities",
            Setting::CostUtilities => "cost-utilities",
            Setting::UnitCost => "unit-cost",
            Setting::Committee => "committee",
        };
        f.write_str(name)
    }
}

/// A participatory-budgeting instance with exact costs, budget and utilities.
///
/// Projects are stored in ascending order of their external id; voters keep
/// the order they were given in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbInstance {
    budget: Rational,
    costs: Vec<Rational>,
    /// `utilities[voter][project]`.
    utilities: Vec<Vec<Rational>>,
    project_ids: Vec<String>,
    voter_ids: Vec<String>,
}

impl PbInstance {
    /// Validates and builds an instance. Projects are reordered by id.
    pub fn new(
        budget: Rational,
        projects: Vec<(String, Rational)>,
        voters: Vec<(String, Vec<Rational>)>,
    ) -> Result<Self> {
        let m = projects.len();
        if m == 0 {
            return Err(Error::validation("projects", "instance has no projects"));
        }
        if voters.is_empty() {
            return Err(Error::validation("voters", "instance has no voters"));
        }
        let mut seen = HashSet::new();
        for (id, _) in &projects {
            if !seen.insert(id.as_str()) {
                return Err(Error::validation(
                    format!("projects.{id}"),
                    "duplicate project id",
                ));
            }
        }
        let mut seen = HashSet::new();
        for (id, u) in &voters {
            if !seen.insert(id.as_str()) {
                return Err(Error::validation(
                    format!("voters.{id}"),
                    "duplicate voter id",
                ));
            }
            if u.len() != m {
                return Err(Error::validation(
                    format!("voters.{id}.utilities"),
                    format!("expected {m} utilities, found {}", u.len()),
                ));
            }
        }

        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| projects[a].0.cmp(&projects[b].0));
        let project_ids: Vec<String> = order.iter().map(|&c| projects[c].0.clone()).collect();
        let costs: Vec<Rational> = order.iter().map(|&c| projects[c].1.clone()).collect();
        let voter_ids: Vec<String> = voters.iter().map(|(id, _)| id.clone()).collect();
        let utilities: Vec<Vec<Rational>> = voters
            .into_iter()
            .map(|(_, u)| order.iter().map(|&c| u[c].clone()).collect())
            .collect();

        let instance = PbInstance {
            budget,
            costs,
            utilities,
            project_ids,
            voter_ids,
        };
        instance.validate()?;
        Ok(instance)
    }

    /// Builds an instance with generated ids `p01, p02, …` and `v01, v02, …`,
    /// keeping the given project order.
    pub fn with_default_ids(
        budget: Rational,
        costs: Vec<Rational>,
        utilities: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let width = costs.len().max(utilities.len()).to_string().len().max(2);
        let projects = costs
            .into_iter()
            .enumerate()
            .map(|(c, cost)| (format!("p{:0width$}", c + 1), cost))
            .collect();
        let voters = utilities
            .into_iter()
            .enumerate()
            .map(|(i, u)| (format!("v{:0width$}", i + 1), u))
            .collect();
        PbInstance::new(budget, projects, voters)
    }

    /// Binary-utility instance from approval lists of project indices.
    pub fn from_approvals(
        budget: Rational,
        costs: Vec<Rational>,
        approvals: &[Vec<usize>],
    ) -> Result<Self> {
        let m = costs.len();
        let utilities = approvals
            .iter()
            .map(|a| {
                let mut u = vec![Rational::zero(); m];
                for &c in a {
                    u[c] = Rational::one();
                }
                u
            })
            .collect();
        PbInstance::with_default_ids(budget, costs, utilities)
    }

    fn validate(&self) -> Result<()> {
        if !self.budget.is_positive() {
            return Err(Error::validation("budget", "budget must be positive"));
        }
        for (c, cost) in self.costs.iter().enumerate() {
            let field = format!("projects.{}.cost", self.project_ids[c]);
            if !cost.is_positive() {
                return Err(Error::validation(field, "cost must be positive"));
            }
            if *cost > self.budget {
                return Err(Error::validation(field, "cost exceeds budget"));
            }
        }
        if self.total_cost() < self.budget {
            return Err(Error::validation("projects", "total cost below budget"));
        }
        for (i, row) in self.utilities.iter().enumerate() {
            for (c, u) in row.iter().enumerate() {
                if u.is_negative() {
                    return Err(Error::validation(
                        format!(
                            "voters.{}.utilities.{}",
                            self.voter_ids[i], self.project_ids[c]
                        ),
                        "negative utility",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn num_voters(&self) -> usize {
        self.utilities.len()
    }

    pub fn num_projects(&self) -> usize {
        self.costs.len()
    }

    pub fn budget(&self) -> &Rational {
        &self.budget
    }

    pub fn cost(&self, project: usize) -> &Rational {
        &self.costs[project]
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    pub fn total_cost(&self) -> Rational {
        self.costs.iter().sum()
    }

    pub fn max_cost(&self) -> Rational {
        self.costs
            .iter()
            .cloned()
            .fold(Rational::zero(), Rational::max)
    }

    /// `B / n`, each voter's proportional share of the budget.
    pub fn share(&self) -> Rational {
        &self.budget / Rational::from(self.num_voters())
    }

    pub fn utility_of(&self, voter: usize, project: usize) -> &Rational {
        &self.utilities[voter][project]
    }

    pub fn utility_row(&self, voter: usize) -> &[Rational] {
        &self.utilities[voter]
    }

    pub fn project_ids(&self) -> &[String] {
        &self.project_ids
    }

    pub fn voter_ids(&self) -> &[String] {
        &self.voter_ids
    }

    pub fn project_index(&self, id: &str) -> Option<usize> {
        self.project_ids
            .binary_search_by(|p| p.as_str().cmp(id))
            .ok()
    }

    pub fn voter_index(&self, id: &str) -> Option<usize> {
        self.voter_ids.iter().position(|v| v == id)
    }

    /// Projects the voter values positively, in index order.
    pub fn approvals(&self, voter: usize) -> impl Iterator<Item = usize> + '_ {
        self.utilities[voter]
            .iter()
            .enumerate()
            .filter(|(_, u)| u.is_positive())
            .map(|(c, _)| c)
    }

    pub fn approves(&self, voter: usize, project: usize) -> bool {
        self.utilities[voter][project].is_positive()
    }

    /// Approval set as a bit mask. Only valid for `m <= 64`.
    pub fn approval_mask(&self, voter: usize) -> u64 {
        debug_assert!(self.num_projects() <= 64);
        self.approvals(voter).fold(0u64, |mask, c| mask | (1 << c))
    }

    pub fn cost_of_set(&self, projects: impl IntoIterator<Item = usize>) -> Rational {
        projects.into_iter().map(|c| &self.costs[c]).sum()
    }

    pub fn cost_of_mask(&self, mask: u64) -> Rational {
        self.cost_of_set(mask_members(mask))
    }

    pub fn is_binary(&self) -> bool {
        self.utilities
            .iter()
            .flatten()
            .all(|u| u.is_zero() || u.is_one())
    }

    pub fn is_cost_utilities(&self) -> bool {
        self.utilities.iter().all(|row| {
            row.iter()
                .zip(&self.costs)
                .all(|(u, c)| u.is_zero() || u == c)
        })
    }

    pub fn is_unit_cost(&self) -> bool {
        self.costs.iter().all(Rational::is_one)
    }

    pub fn classify(&self) -> Setting {
        match (self.is_unit_cost(), self.is_binary()) {
            (true, true) => Setting::Committee,
            (false, true) => Setting::BinaryUtilities,
            _ if self.is_cost_utilities() => Setting::CostUtilities,
            (true, false) => Setting::UnitCost,
            (false, false) => Setting::General,
        }
    }

    pub(crate) fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::Setting {
                expected: "binary-utilities",
                found: self.classify(),
            })
        }
    }

    pub(crate) fn require_cost_utilities(&self) -> Result<()> {
        if self.is_cost_utilities() {
            Ok(())
        } else {
            Err(Error::Setting {
                expected: "cost-utilities",
                found: self.classify(),
            })
        }
    }

    /// Additive utility of an integral outcome.
    pub fn utility(&self, voter: usize, outcome: &IntegralOutcome) -> Rational {
        outcome.iter().map(|c| &self.utilities[voter][c]).sum()
    }

    /// Utility of a fractional outcome, `sum_c p_c * u_ic`.
    pub fn fractional_utility(&self, voter: usize, p: &FractionalOutcome) -> Rational {
        self.utilities[voter]
            .iter()
            .zip(p.values())
            .filter(|(u, _)| u.is_positive())
            .map(|(u, x)| u * x)
            .sum()
    }

    /// Voter indices grouped by identical utility vectors, ordered by their
    /// first member.
    pub fn unanimous_partition(&self) -> Vec<Vec<usize>> {
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.num_voters() {
            match cells
                .iter_mut()
                .find(|cell| self.utilities[cell[0]] == self.utilities[i])
            {
                Some(cell) => cell.push(i),
                None => cells.push(vec![i]),
            }
        }
        cells
    }

    /// Canonical JSON: sorted keys, projects sorted by id, zero utilities omitted.
    pub fn to_json_value(&self) -> Value {
        let projects: Vec<Value> = self
            .project_ids
            .iter()
            .zip(&self.costs)
            .map(|(id, cost)| {
                let mut obj = Map::new();
                obj.insert("cost".into(), Value::String(cost.to_string()));
                obj.insert("id".into(), Value::String(id.clone()));
                Value::Object(obj)
            })
            .collect();
        let voters: Vec<Value> = self
            .voter_ids
            .iter()
            .zip(&self.utilities)
            .map(|(id, row)| {
                let utilities: Map<String, Value> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, u)| !u.is_zero())
                    .map(|(c, u)| (self.project_ids[c].clone(), Value::String(u.to_string())))
                    .collect();
                let mut obj = Map::new();
                obj.insert("id".into(), Value::String(id.clone()));
                obj.insert("utilities".into(), Value::Object(utilities));
                Value::Object(obj)
            })
            .collect();
        let mut root = Map::new();
        root.insert("budget".into(), Value::String(self.budget.to_string()));
        root.insert("projects".into(), Value::Array(projects));
        root.insert("voters".into(), Value::Array(voters));
        Value::Object(root)
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("instance serializes")
    }

    /// Hex SHA-256 of the compact canonical JSON.
    pub fn digest(&self) -> String {
        let compact = serde_json::to_string(&self.to_json_value()).expect("instance serializes");
        hex::encode(Sha256::digest(compact.as_bytes()))
    }

    pub fn parse(document: &[u8]) -> Result<Self> {
        let doc: InstanceDocument =
            serde_json::from_slice(document).map_err(|e| Error::Malformed(e.to_string()))?;
        doc.into_instance()
    }
}

pub fn parse_instance(document: &[u8]) -> Result<PbInstance> {
    PbInstance::parse(document)
}

pub(crate) fn mask_members(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(c)
        }
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDocument {
    budget: String,
    projects: Vec<ProjectDocument>,
    voters: Vec<VoterDocument>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectDocument {
    id: String,
    cost: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VoterDocument {
    id: String,
    #[serde(default)]
    utilities: BTreeMap<String, String>,
}

fn parse_field(field: String, text: &str) -> Result<Rational> {
    text.parse()
        .map_err(|e: super::ParseRationalError| Error::validation(field, e.to_string()))
}

impl InstanceDocument {
    fn into_instance(self) -> Result<PbInstance> {
        let budget = parse_field("budget".into(), &self.budget)?;
        let mut projects = Vec::with_capacity(self.projects.len());
        for p in &self.projects {
            let cost = parse_field(format!("projects.{}.cost", p.id), &p.cost)?;
            projects.push((p.id.clone(), cost));
        }
        let index: BTreeMap<&str, usize> = self
            .projects
            .iter()
            .enumerate()
            .map(|(c, p)| (p.id.as_str(), c))
            .collect();
        let mut voters = Vec::with_capacity(self.voters.len());
        for v in &self.voters {
            let mut row = vec![Rational::zero(); projects.len()];
            for (pid, text) in &v.utilities {
                let field = format!("voters.{}.utilities.{pid}", v.id);
                let c = *index
                    .get(pid.as_str())
                    .ok_or_else(|| Error::validation(field.clone(), "unknown project id"))?;
                row[c] = parse_field(field, text)?;
            }
            voters.push((v.id.clone(), row));
        }
        PbInstance::new(budget, projects, voters)
    }
}
