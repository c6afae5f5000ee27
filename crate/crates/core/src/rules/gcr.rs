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

use serde::Serialize;
use std::cmp::Ordering;

use crate::error::Result;
use crate::limits::Limits;
use crate::model::{mask_members, IntegralOutcome, PbInstance, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcrStep {
    pub beta: usize,
    pub projects: IntegralOutcome,
    pub voters: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcrTrace {
    pub steps: Vec<GcrStep>,
    /// Union of the selected project sets.
    pub outcome: IntegralOutcome,
}

struct Candidate {
    beta: u32,
    cost: Rational,
    group: usize,
    projects: u64,
}

impl Candidate {
    /// `Less` means preferred: larger `β`, then cheaper, then larger group,
    /// then lexicographically smaller project set.
    fn rank(&self, other: &Candidate) -> Ordering {
        other
            .beta
            .cmp(&self.beta)
            .then_with(|| self.cost.cmp(&other.cost))
            .then_with(|| other.group.cmp(&self.group))
            .then_with(|| mask_members(self.projects).cmp(mask_members(other.projects)))
    }
}

/// Greedy cohesive rule for binary utilities.
///
/// Each step selects, among unselected project sets `T` and active voters
/// with at least `β` approvals in `T`, the weakly cohesive group of largest
/// `β`; that group becomes inactive and `T` is funded.
pub fn gcr(instance: &PbInstance, limits: &Limits) -> Result<GcrTrace> {
    instance.require_binary()?;
    limits.check_projects(instance.num_projects())?;
    let n = instance.num_voters();
    let approvals: Vec<u64> = (0..n).map(|i| instance.approval_mask(i)).collect();
    let all = if instance.num_projects() == 64 {
        u64::MAX
    } else {
        (1u64 << instance.num_projects()) - 1
    };
    let mut active = vec![true; n];
    let mut funded = 0u64;
    let mut steps = Vec::new();
    let budget = instance.budget();
    let n_rat = Rational::from(n);

    loop {
        let open = all & !funded;
        let mut best: Option<Candidate> = None;
        let mut t = open;
        while t != 0 {
            let mut overlaps: Vec<u32> = (0..n)
                .filter(|&i| active[i])
                .map(|i| (approvals[i] & t).count_ones())
                .filter(|&k| k > 0)
                .collect();
            overlaps.sort_unstable_by(|a, b| b.cmp(a));
            let can_win = overlaps
                .first()
                .is_some_and(|&top| best.as_ref().is_none_or(|b| top >= b.beta));
            if can_win {
                let cost = instance.cost_of_mask(t);
                // largest β whose supporters can afford T
                let found = overlaps.iter().find_map(|&beta| {
                    let group = overlaps.iter().filter(|&&k| k >= beta).count();
                    (Rational::from(group) * budget >= &n_rat * &cost).then_some((beta, group))
                });
                if let Some((beta, group)) = found {
                    let candidate = Candidate {
                        beta,
                        cost,
                        group,
                        projects: t,
                    };
                    if best
                        .as_ref()
                        .is_none_or(|b| candidate.rank(b) == Ordering::Less)
                    {
                        best = Some(candidate);
                    }
                }
            }
            t = (t - 1) & open;
        }
        let Some(chosen) = best else { break };
        let voters: Vec<usize> = (0..n)
            .filter(|&i| active[i] && (approvals[i] & chosen.projects).count_ones() >= chosen.beta)
            .collect();
        for &i in &voters {
            active[i] = false;
        }
        funded |= chosen.projects;
        steps.push(GcrStep {
            beta: chosen.beta as usize,
            projects: IntegralOutcome::from_mask(chosen.projects),
            voters,
        });
    }
    Ok(GcrTrace {
        steps,
        outcome: IntegralOutcome::from_mask(funded),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expost::check_fjr_binary;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn two_voter_example() {
        let inst =
            PbInstance::from_approvals(r("2"), vec![r("1"); 3], &[vec![0, 1], vec![0, 2]]).unwrap();
        let trace = gcr(&inst, &Limits::default()).unwrap();
        assert_eq!(
            trace.steps,
            vec![GcrStep {
                beta: 1,
                projects: IntegralOutcome::new([0]),
                voters: vec![0, 1]
            }]
        );
        assert_eq!(trace.outcome.members(), &[0]);
    }

    #[test]
    fn nobody_approves() {
        let inst = PbInstance::from_approvals(r("1"), vec![r("1"); 2], &[vec![], vec![]]).unwrap();
        let trace = gcr(&inst, &Limits::default()).unwrap();
        assert!(trace.steps.is_empty());
        assert!(trace.outcome.is_empty());
    }

    #[test]
    fn unanimous_pair_takes_both() {
        let inst =
            PbInstance::from_approvals(r("2"), vec![r("1"); 2], &vec![vec![0, 1]; 3]).unwrap();
        let trace = gcr(&inst, &Limits::default()).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].beta, 2);
        assert_eq!(trace.outcome.members(), &[0, 1]);
        assert!(
            check_fjr_binary(&inst, &trace.outcome, &Limits::default())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn rejects_general_utilities() {
        let inst =
            PbInstance::with_default_ids(r("1"), vec![r("1")], vec![vec![r("1/2")]]).unwrap();
        assert!(gcr(&inst, &Limits::default()).is_err());
    }
}
