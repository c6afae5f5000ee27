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

use super::{cheapest_first, gcr, group_ladders, spend_capped, GcrTrace, GroupLadder};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{FractionalOutcome, IntegralOutcome, PbInstance, Rational};
use crate::rounding::{dependent_round, RoundingTrace, Seed};

/// Deterministic part of the greedy-cohesive best-of-both-worlds rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BwGcrCore {
    pub p: FractionalOutcome,
    pub trace: GcrTrace,
    pub ladders: Vec<GroupLadder>,
    /// Per-voter budget `b_i`; zero outside cells meeting the cell condition.
    pub budgets: Vec<Rational>,
    /// Indices into `ladders` of the cells meeting the cell condition.
    pub funded_cells: Vec<usize>,
}

/// `cost(T_j)` against `cost(G_S)` for a funded cell `S` inside step `j`'s group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostComparison {
    pub step: usize,
    pub cell: usize,
    pub step_cost: Rational,
    pub ladder_cost: Rational,
}

impl CostComparison {
    pub fn holds(&self) -> bool {
        self.step_cost <= self.ladder_cost
    }
}

/// Builds the fractional outcome: fund the cohesive-rule outcome, let each
/// unanimous cell whose approved funded count equals `|G_S|` spend its
/// leftover share on its cheapest approved projects, then top up to `B`.
///
/// Fails with [`Error::InvariantBreach`] if the cell budgets exceed
/// `B - cost(W_GCR)`.
pub fn bw_gcr_fractional(instance: &PbInstance, limits: &Limits) -> Result<BwGcrCore> {
    let trace = gcr(instance, limits)?;
    let m = instance.num_projects();
    let funded_set = &trace.outcome;
    let mut p: Vec<Rational> = (0..m)
        .map(|c| {
            if funded_set.contains(c) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let ladders = group_ladders(instance);
    let mut budgets = vec![Rational::zero(); instance.num_voters()];
    let mut funded_cells = Vec::new();
    for (z, ladder) in ladders.iter().enumerate() {
        let represented = ladder
            .approvals
            .iter()
            .filter(|&c| funded_set.contains(c))
            .count();
        if represented != ladder.affordable.len() {
            continue;
        }
        funded_cells.push(z);
        let pooled = ladder.leftover(instance);
        let each = &pooled / &Rational::from(ladder.voters.len());
        for &i in &ladder.voters {
            budgets[i] = each.clone();
        }
        // overflow past p = 1 moves on to the next-cheapest approved project
        let mut left = pooled;
        for c in cheapest_first(instance, ladder.approvals.iter()) {
            if left.is_zero() {
                break;
            }
            left = spend_capped(instance, &mut p, c, left);
        }
    }
    let total: Rational = budgets.iter().sum();
    let leftover = instance.budget() - &funded_set.cost(instance);
    if total > leftover {
        return Err(Error::InvariantBreach(format!(
            "cell budgets {total} exceed the budget left after the cohesive outcome, {leftover}"
        )));
    }
    let spent: Rational = p.iter().zip(instance.costs()).map(|(x, c)| x * c).sum();
    let mut need = instance.budget() - &spent;
    for c in 0..m {
        if need.is_zero() {
            break;
        }
        need = spend_capped(instance, &mut p, c, need);
    }
    let p = FractionalOutcome::new(p)?;
    if !p.is_feasible(instance) {
        return Err(Error::InvariantBreach(format!(
            "fractional outcome costs {}, not the budget",
            p.cost(instance)
        )));
    }
    Ok(BwGcrCore {
        p,
        trace,
        ladders,
        budgets,
        funded_cells,
    })
}

/// Runs the rule and samples an outcome; the sample contains `W_GCR` and is
/// budget balanced up to one project.
pub fn bw_gcr(
    instance: &PbInstance,
    seed: Seed,
    limits: &Limits,
) -> Result<(FractionalOutcome, IntegralOutcome, BwGcrCore, RoundingTrace)> {
    let core = bw_gcr_fractional(instance, limits)?;
    let (outcome, rounding) = dependent_round(instance, &core.p, seed)?;
    Ok((core.p.clone(), outcome, core, rounding))
}

impl BwGcrCore {
    /// One comparison per (step, funded cell inside that step's voter group).
    pub fn cost_comparisons(&self, instance: &PbInstance) -> Vec<CostComparison> {
        let mut out = Vec::new();
        for (j, step) in self.trace.steps.iter().enumerate() {
            for &z in &self.funded_cells {
                let ladder = &self.ladders[z];
                if ladder
                    .voters
                    .iter()
                    .all(|i| step.voters.binary_search(i).is_ok())
                {
                    out.push(CostComparison {
                        step: j,
                        cell: z,
                        step_cost: step.projects.cost(instance),
                        ladder_cost: ladder.affordable.cost(instance),
                    });
                }
            }
        }
        out
    }

    /// `Σ_i b_i ≤ B - cost(W_GCR)`.
    pub fn budget_bound_holds(&self, instance: &PbInstance) -> bool {
        let total: Rational = self.budgets.iter().sum();
        total <= instance.budget() - &self.trace.outcome.cost(instance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exante::check_strong_ufs;
    use crate::expost::check_fjr_binary;
    use crate::rounding::is_bb1;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn two_voter_example() {
        let inst =
            PbInstance::from_approvals(r("2"), vec![r("1"); 3], &[vec![0, 1], vec![0, 2]]).unwrap();
        let core = bw_gcr_fractional(&inst, &Limits::default()).unwrap();
        assert_eq!(core.trace.outcome.members(), &[0]);
        assert_eq!(core.budgets, vec![r("0"), r("0")]);
        assert_eq!(core.p.values(), &[r("1"), r("1"), r("0")]);
        assert!(check_strong_ufs(&inst, &core.p).holds);
        assert!(core
            .cost_comparisons(&inst)
            .iter()
            .all(CostComparison::holds));
    }

    #[test]
    fn cohesive_outcome_spending_everything() {
        let inst =
            PbInstance::from_approvals(r("2"), vec![r("1"); 3], &[vec![0, 1], vec![0, 1]]).unwrap();
        let core = bw_gcr_fractional(&inst, &Limits::default()).unwrap();
        assert_eq!(core.p.values(), &[r("1"), r("1"), r("0")]);
    }

    #[test]
    fn unanimous_residue_flows_to_fill() {
        let inst =
            PbInstance::from_approvals(r("2"), vec![r("1"); 4], &vec![vec![0, 1, 2]; 3]).unwrap();
        let core = bw_gcr_fractional(&inst, &Limits::default()).unwrap();
        assert_eq!(core.trace.outcome.members(), &[0, 1]);
        assert_eq!(core.funded_cells, vec![0]);
        assert!(core.budgets.iter().all(Rational::is_zero));
        assert!(core.budget_bound_holds(&inst));
        assert!(core.p.is_feasible(&inst));
        for k in 0..20 {
            let (_, w, _, _) = bw_gcr(&inst, Seed(k), &Limits::default()).unwrap();
            assert!(is_bb1(&inst, &w));
            assert!(w.is_superset_of(&core.trace.outcome));
            assert!(
                check_fjr_binary(&inst, &w, &Limits::default())
                    .unwrap()
                    .holds
            );
        }
    }

    #[test]
    fn cell_spends_on_cheapest_unfunded() {
        // voters 0-1 share {0, 1}; voter 2 alone approves 2
        let inst = PbInstance::from_approvals(
            r("3"),
            vec![r("1"), r("3"), r("2")],
            &[vec![0, 1], vec![0, 1], vec![2]],
        )
        .unwrap();
        let core = bw_gcr_fractional(&inst, &Limits::default()).unwrap();
        assert!(core.budget_bound_holds(&inst));
        assert!(check_strong_ufs(&inst, &core.p).holds);
        assert!(core.p.is_feasible(&inst));
    }
}
