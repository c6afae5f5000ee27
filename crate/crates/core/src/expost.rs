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

//! Ex-post representation axioms on integral outcomes.
//!
//! A cohesive group `S` for `T` only needs `|S| * B / n >= cost(T)` and its
//! members to share the cohesion condition, so any large enough subset of the
//! voters that are both cohesive and under-represented is a violating group.
//! The checks therefore count deprived voters per `(T, β)` instead of
//! enumerating voter subsets; only the project side is exhaustive.

use serde::Serialize;

use crate::error::Result;
use crate::limits::Limits;
use crate::model::{mask_members, IntegralOutcome, PbInstance, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExPostAxiom {
    JrBinary,
    EjrBinary,
    FjrBinary,
    JrGeneral,
    EjrxCost,
}

/// A cohesive group that the outcome leaves under-represented.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohesivenessWitness {
    pub projects: Vec<usize>,
    /// Common-approval threshold, for FJR.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<usize>,
    /// Utility threshold on the single project in `projects`, for general JR.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Rational>,
    pub voters: Vec<usize>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExPostReport {
    pub axiom: ExPostAxiom,
    pub holds: bool,
    pub witness: Option<CohesivenessWitness>,
}

impl ExPostReport {
    fn new(axiom: ExPostAxiom, witness: Option<CohesivenessWitness>) -> Self {
        ExPostReport {
            axiom,
            holds: witness.is_none(),
            witness,
        }
    }
}

/// `|S| * B >= n * cost(T)`.
fn large_enough(instance: &PbInstance, group_size: usize, cost: &Rational) -> bool {
    group_size > 0
        && Rational::from(group_size) * instance.budget()
            >= Rational::from(instance.num_voters()) * cost
}

/// Non-empty subsets of `0..m` ordered by size, then lexicographically.
pub(crate) fn subsets_by_size(m: usize) -> impl Iterator<Item = u64> {
    (1..=m).flat_map(move |k| Combinations::new(m, k))
}

struct Combinations {
    m: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(m: usize, k: usize) -> Self {
        Combinations {
            m,
            idx: (0..k).collect(),
            done: k > m,
        }
    }
}

impl Iterator for Combinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let mask = self.idx.iter().fold(0u64, |acc, &c| acc | (1 << c));
        let k = self.idx.len();
        // advance to the next combination in lexicographic order
        let mut pos = k;
        while pos > 0 && self.idx[pos - 1] == self.m - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            self.done = true;
        } else {
            self.idx[pos - 1] += 1;
            for q in pos..k {
                self.idx[q] = self.idx[q - 1] + 1;
            }
        }
        Some(mask)
    }
}

struct ApprovalView {
    approvals: Vec<u64>,
    /// `|A_i ∩ W|` per voter.
    represented: Vec<u32>,
}

impl ApprovalView {
    fn new(instance: &PbInstance, outcome: &IntegralOutcome) -> Self {
        let approvals: Vec<u64> = (0..instance.num_voters())
            .map(|i| instance.approval_mask(i))
            .collect();
        let w = outcome.to_mask();
        let represented = approvals.iter().map(|a| (a & w).count_ones()).collect();
        ApprovalView {
            approvals,
            represented,
        }
    }
}

/// JR for binary utilities: every `{j}`-cohesive group has a member approving
/// something in `W`.
pub fn check_jr_binary(instance: &PbInstance, outcome: &IntegralOutcome) -> Result<ExPostReport> {
    instance.require_binary()?;
    Ok(jr_binary_unchecked(instance, outcome))
}

pub(crate) fn jr_binary_unchecked(
    instance: &PbInstance,
    outcome: &IntegralOutcome,
) -> ExPostReport {
    let selected = outcome.indicator(instance.num_projects());
    let unrepresented: Vec<usize> = (0..instance.num_voters())
        .filter(|&i| !instance.approvals(i).any(|c| selected[c]))
        .collect();
    for j in 0..instance.num_projects() {
        let deprived: Vec<usize> = unrepresented
            .iter()
            .copied()
            .filter(|&i| instance.approves(i, j))
            .collect();
        if large_enough(instance, deprived.len(), instance.cost(j)) {
            return ExPostReport::new(
                ExPostAxiom::JrBinary,
                Some(CohesivenessWitness {
                    projects: vec![j],
                    beta: None,
                    alpha: None,
                    voters: deprived,
                    note: "all members approve the project and none approves a funded project"
                        .into(),
                }),
            );
        }
    }
    ExPostReport::new(ExPostAxiom::JrBinary, None)
}

/// EJR for binary utilities: every `T`-cohesive group has a member with at
/// least `|T|` approved funded projects.
pub fn check_ejr_binary(
    instance: &PbInstance,
    outcome: &IntegralOutcome,
    limits: &Limits,
) -> Result<ExPostReport> {
    instance.require_binary()?;
    limits.check_projects(instance.num_projects())?;
    Ok(ejr_binary_unchecked(instance, outcome))
}

pub(crate) fn ejr_binary_unchecked(
    instance: &PbInstance,
    outcome: &IntegralOutcome,
) -> ExPostReport {
    let view = ApprovalView::new(instance, outcome);
    for t in subsets_by_size(instance.num_projects()) {
        let size = t.count_ones();
        let deprived: Vec<usize> = (0..instance.num_voters())
            .filter(|&i| view.approvals[i] & t == t && view.represented[i] < size)
            .collect();
        if !deprived.is_empty() && large_enough(instance, deprived.len(), &instance.cost_of_mask(t))
        {
            return ExPostReport::new(
                ExPostAxiom::EjrBinary,
                Some(CohesivenessWitness {
                    projects: mask_members(t).collect(),
                    beta: None,
                    alpha: None,
                    voters: deprived,
                    note: format!("members approve all of T but fewer than {size} funded projects"),
                }),
            );
        }
    }
    ExPostReport::new(ExPostAxiom::EjrBinary, None)
}

/// FJR for binary utilities: every weakly `(β, T)`-cohesive group has a member
/// with at least `β` approved funded projects.
pub fn check_fjr_binary(
    instance: &PbInstance,
    outcome: &IntegralOutcome,
    limits: &Limits,
) -> Result<ExPostReport> {
    instance.require_binary()?;
    limits.check_projects(instance.num_projects())?;
    Ok(fjr_binary_unchecked(instance, outcome))
}

pub(crate) fn fjr_binary_unchecked(
    instance: &PbInstance,
    outcome: &IntegralOutcome,
) -> ExPostReport {
    let view = ApprovalView::new(instance, outcome);
    for t in subsets_by_size(instance.num_projects()) {
        let mut cost = None;
        for beta in 1..=t.count_ones() {
            let deprived: Vec<usize> = (0..instance.num_voters())
                .filter(|&i| {
                    (view.approvals[i] & t).count_ones() >= beta && view.represented[i] < beta
                })
                .collect();
            if deprived.is_empty() {
                continue;
            }
            let cost = cost.get_or_insert_with(|| instance.cost_of_mask(t));
            if large_enough(instance, deprived.len(), cost) {
                return ExPostReport::new(
                    ExPostAxiom::FjrBinary,
                    Some(CohesivenessWitness {
                        projects: mask_members(t).collect(),
                        beta: Some(beta as usize),
                        alpha: None,
                        voters: deprived,
                        note: format!("members approve at least {beta} of T but fewer than {beta} funded projects"),
                    }),
                );
            }
        }
    }
    ExPostReport::new(ExPostAxiom::FjrBinary, None)
}

/// JR for general utilities with per-project thresholds `α ∈ [0, 1]`.
///
/// For project `j` it suffices to try `α ∈ { min(1, u_ij) : u_ij > 0 }`:
/// raising `α` up to the smallest clipped utility in a violating group keeps
/// the group cohesive and its members deprived.
pub fn check_jr_general(instance: &PbInstance, outcome: &IntegralOutcome) -> ExPostReport {
    let current: Vec<Rational> = (0..instance.num_voters())
        .map(|i| instance.utility(i, outcome))
        .collect();
    let one = Rational::one();
    for j in 0..instance.num_projects() {
        let mut thresholds: Vec<Rational> = (0..instance.num_voters())
            .map(|i| instance.utility_of(i, j))
            .filter(|u| u.is_positive())
            .map(|u| u.clone().min(one.clone()))
            .collect();
        thresholds.sort();
        thresholds.dedup();
        for alpha in thresholds {
            let deprived: Vec<usize> = (0..instance.num_voters())
                .filter(|&i| *instance.utility_of(i, j) >= alpha && current[i] < alpha)
                .collect();
            if large_enough(instance, deprived.len(), instance.cost(j)) {
                return ExPostReport::new(
                    ExPostAxiom::JrGeneral,
                    Some(CohesivenessWitness {
                        projects: vec![j],
                        beta: None,
                        note: format!(
                            "members value the project at least {alpha} but the outcome at less"
                        ),
                        alpha: Some(alpha),
                        voters: deprived,
                    }),
                );
            }
        }
    }
    ExPostReport::new(ExPostAxiom::JrGeneral, None)
}

/// EJR up to any project, for cost utilities.
pub fn check_ejrx_cost(
    instance: &PbInstance,
    outcome: &IntegralOutcome,
    limits: &Limits,
) -> Result<ExPostReport> {
    instance.require_cost_utilities()?;
    limits.check_projects(instance.num_projects())?;
    Ok(ejrx_unchecked(instance, outcome))
}

pub(crate) fn ejrx_unchecked(instance: &PbInstance, outcome: &IntegralOutcome) -> ExPostReport {
    let n = instance.num_voters();
    let approvals: Vec<u64> = (0..n).map(|i| instance.approval_mask(i)).collect();
    let w = outcome.to_mask();
    let current: Vec<Rational> = (0..n).map(|i| instance.utility(i, outcome)).collect();
    for t in subsets_by_size(instance.num_projects()) {
        let missing = t & !w;
        if missing == 0 {
            continue;
        }
        let supporters: Vec<usize> = (0..n).filter(|&i| approvals[i] & t == t).collect();
        if supporters.is_empty() {
            continue;
        }
        let deprived: Vec<usize> = supporters
            .into_iter()
            .filter(|&i| {
                let of_t: Rational = mask_members(t).map(|c| instance.utility_of(i, c)).sum();
                mask_members(missing).any(|c| &current[i] + instance.utility_of(i, c) <= of_t)
            })
            .collect();
        if !deprived.is_empty() && large_enough(instance, deprived.len(), &instance.cost_of_mask(t))
        {
            return ExPostReport::new(
                ExPostAxiom::EjrxCost,
                Some(CohesivenessWitness {
                    projects: mask_members(t).collect(),
                    beta: None,
                    alpha: None,
                    voters: deprived,
                    note: "adding some missing project of T does not lift members above u(T)"
                        .into(),
                }),
            );
        }
    }
    ExPostReport::new(ExPostAxiom::EjrxCost, None)
}

impl CohesivenessWitness {
    /// Re-checks the witness directly against the axiom's definition.
    pub fn validate(
        &self,
        instance: &PbInstance,
        outcome: &IntegralOutcome,
        axiom: ExPostAxiom,
    ) -> bool {
        let t = IntegralOutcome::new(self.projects.iter().copied());
        if self.voters.is_empty() || !large_enough(instance, self.voters.len(), &t.cost(instance)) {
            return false;
        }
        let count = |i: usize, set: &IntegralOutcome| {
            set.iter().filter(|&c| instance.approves(i, c)).count()
        };
        self.voters.iter().all(|&i| match axiom {
            ExPostAxiom::JrBinary | ExPostAxiom::EjrBinary => {
                count(i, &t) == t.len() && count(i, outcome) < t.len()
            }
            ExPostAxiom::FjrBinary => {
                let beta = self.beta.unwrap_or(0);
                beta >= 1 && count(i, &t) >= beta && count(i, outcome) < beta
            }
            ExPostAxiom::JrGeneral => match (&self.alpha, t.members()) {
                (Some(alpha), [j]) => {
                    alpha.is_positive()
                        && *alpha <= Rational::one()
                        && instance.utility_of(i, *j) >= alpha
                        && instance.utility(i, outcome) < *alpha
                }
                _ => false,
            },
            ExPostAxiom::EjrxCost => {
                let of_t = instance.utility(i, &t);
                count(i, &t) == t.len()
                    && t.iter().any(|c| {
                        !outcome.contains(c) && instance.utility(i, &outcome.with(c)) <= of_t
                    })
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gen_gfs_jr_family;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn w(ids: &[usize]) -> IntegralOutcome {
        IntegralOutcome::new(ids.iter().copied())
    }

    #[test]
    fn combinations_are_ordered() {
        let all: Vec<u64> = subsets_by_size(3).collect();
        assert_eq!(all, vec![0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]);
        assert_eq!(subsets_by_size(5).count(), 31);
    }

    #[test]
    fn jr_on_gfs_jr_family() {
        let inst = gen_gfs_jr_family(6, &r("1"), &r("1/12")).unwrap();
        let id = |s: &str| inst.project_index(s).unwrap();
        let report = check_jr_binary(&inst, &w(&[id("a1"), id("b1")])).unwrap();
        assert!(!report.holds);
        let witness = report.witness.unwrap();
        assert_eq!(witness.projects, vec![id("g*")]);
        assert_eq!(witness.voters, vec![1, 2, 3, 4, 5]);
        assert!(
            check_jr_binary(&inst, &w(&[id("g*"), id("a1")]))
                .unwrap()
                .holds
        );
    }

    fn two_voter() -> PbInstance {
        PbInstance::from_approvals(r("2"), vec![r("1"); 3], &[vec![0, 1], vec![0, 2]]).unwrap()
    }

    #[test]
    fn ejr_two_voter_example() {
        let inst = two_voter();
        assert!(
            check_ejr_binary(&inst, &w(&[1, 2]), &Limits::default())
                .unwrap()
                .holds
        );
        let unanimous =
            PbInstance::from_approvals(r("2"), vec![r("1"); 2], &[vec![0, 1], vec![0, 1]]).unwrap();
        let report = check_ejr_binary(&unanimous, &w(&[0]), &Limits::default()).unwrap();
        assert!(!report.holds);
        assert_eq!(report.witness.as_ref().unwrap().projects, vec![0, 1]);
        assert!(report
            .witness
            .unwrap()
            .validate(&unanimous, &w(&[0]), ExPostAxiom::EjrBinary));
    }

    #[test]
    fn fjr_empty_outcome_fails() {
        let inst = two_voter();
        let report =
            check_fjr_binary(&inst, &IntegralOutcome::empty(), &Limits::default()).unwrap();
        assert!(!report.holds);
        let witness = report.witness.unwrap();
        assert_eq!(witness.beta, Some(1));
        assert!(witness.validate(&inst, &IntegralOutcome::empty(), ExPostAxiom::FjrBinary));
    }

    #[test]
    fn binary_checks_reject_general_instances() {
        let inst = PbInstance::with_default_ids(r("1"), vec![r("1")], vec![vec![r("2")]]).unwrap();
        assert!(check_jr_binary(&inst, &IntegralOutcome::empty()).is_err());
        assert!(check_ejrx_cost(&inst, &IntegralOutcome::empty(), &Limits::default()).is_err());
    }

    #[test]
    fn general_jr_on_ifs_jr_family() {
        let inst = crate::oracle::gen_ifs_jr_family(4, &r("5")).unwrap();
        let c = inst.project_index("c").unwrap();
        let g1 = inst.project_index("g1a").unwrap();
        let g2 = inst.project_index("g2a").unwrap();
        let report = check_jr_general(&inst, &w(&[g1, g2]));
        assert!(!report.holds);
        let witness = report.witness.unwrap();
        assert_eq!(witness.alpha, Some(r("1")));
        assert!(witness.voters.len() >= 2);
        assert!(witness.validate(&inst, &w(&[g1, g2]), ExPostAxiom::JrGeneral));
        assert!(check_jr_general(&inst, &w(&[c, g1])).holds);
    }

    #[test]
    fn general_jr_counts_deprived_subgroup() {
        // three voters value project 0; one of them is already served by project 1
        let inst = PbInstance::with_default_ids(
            r("3"),
            vec![r("2"), r("1"), r("1")],
            vec![
                vec![r("1"), r("1"), r("0")],
                vec![r("1"), r("0"), r("0")],
                vec![r("1"), r("0"), r("0")],
            ],
        )
        .unwrap();
        // deprived pair has size 2 >= n * cost / B = 2
        let report = check_jr_general(&inst, &w(&[1]));
        assert!(!report.holds);
        assert_eq!(report.witness.unwrap().voters, vec![1, 2]);
    }

    #[test]
    fn ejrx_examples() {
        let inst = PbInstance::with_default_ids(
            r("1"),
            vec![r("1/2"), r("1/2")],
            vec![vec![r("1/2"), r("0")], vec![r("1/2"), r("0")]],
        )
        .unwrap();
        let limits = Limits::default();
        let report = check_ejrx_cost(&inst, &IntegralOutcome::empty(), &limits).unwrap();
        assert!(!report.holds);
        assert!(report.witness.unwrap().validate(
            &inst,
            &IntegralOutcome::empty(),
            ExPostAxiom::EjrxCost
        ));
        assert!(check_ejrx_cost(&inst, &w(&[0]), &limits).unwrap().holds);
    }
}
