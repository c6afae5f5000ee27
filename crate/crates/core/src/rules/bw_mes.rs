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

use super::{cheapest_first, group_ladders, mes, GroupLadder, MesResult};
use crate::error::{Error, Result};
use crate::model::{FractionalOutcome, IntegralOutcome, PaymentMatrix, PbInstance, Rational};
use crate::rounding::{dependent_round, RoundingTrace, Seed};

/// Deterministic part of the equal-shares best-of-both-worlds rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BwMesCore {
    pub p: FractionalOutcome,
    pub mes: MesResult,
    /// Equal-shares payments plus the spending of leftover budgets.
    pub spend: PaymentMatrix,
    pub ladders: Vec<GroupLadder>,
}

/// `|S| * Σ_{c ∈ A_S ∩ W_MES} y_ic` against `cost(G_S)` for a cell whose
/// approved funded count equals `|G_S|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaymentComparison {
    pub cell: usize,
    pub group_payment: Rational,
    pub ladder_cost: Rational,
}

impl PaymentComparison {
    pub fn holds(&self) -> bool {
        self.group_payment <= self.ladder_cost
    }
}

/// Builds the fractional outcome: run equal shares, then every voter with an
/// approved unfunded project spends their leftover on the cheapest one, and
/// every other voter spends into remaining capacity in project order.
///
/// Fails with [`Error::InvariantBreach`] if some project would be funded past
/// its cost.
pub fn bw_mes_fractional(instance: &PbInstance) -> Result<BwMesCore> {
    let setting = instance.classify();
    if !(instance.is_binary() || instance.is_cost_utilities()) {
        return Err(Error::Setting {
            expected: "binary or cost-utilities",
            found: setting,
        });
    }
    let result = mes(instance);
    let (n, m) = (instance.num_voters(), instance.num_projects());
    let mut spend = result.payments.clone();
    let mut satisfied = Vec::new();
    for i in 0..n {
        let open = instance
            .approvals(i)
            .filter(|&c| !result.outcome.contains(c));
        match cheapest_first(instance, open).first() {
            Some(&kappa) => {
                let amount = spend.remaining[i].clone();
                spend.pay(i, kappa, &amount);
            }
            None => satisfied.push(i),
        }
    }
    let mut funded: Vec<Rational> = (0..m).map(|j| spend.project_total(j)).collect();
    if let Some(j) = (0..m).find(|&j| funded[j] > *instance.cost(j)) {
        return Err(Error::InvariantBreach(format!(
            "project {} receives {} against cost {}",
            instance.project_ids()[j],
            funded[j],
            instance.cost(j)
        )));
    }
    for i in satisfied {
        for (j, total) in funded.iter_mut().enumerate() {
            if spend.remaining[i].is_zero() {
                break;
            }
            let amount = spend.remaining[i].clone().min(instance.cost(j) - &*total);
            if amount.is_positive() {
                spend.pay(i, j, &amount);
                *total += &amount;
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| !spend.remaining[i].is_zero()) {
        return Err(Error::InvariantBreach(format!(
            "voter {} keeps {} unspent",
            instance.voter_ids()[i],
            spend.remaining[i]
        )));
    }
    let p = FractionalOutcome::new(
        funded
            .iter()
            .zip(instance.costs())
            .map(|(y, c)| y / c)
            .collect(),
    )?;
    if !p.is_feasible(instance) {
        return Err(Error::InvariantBreach(format!(
            "fractional outcome costs {}, not the budget",
            p.cost(instance)
        )));
    }
    Ok(BwMesCore {
        p,
        mes: result,
        spend,
        ladders: group_ladders(instance),
    })
}

/// Runs the rule and samples an outcome; the sample contains `W_MES` and is
/// budget balanced up to one project.
pub fn bw_mes(
    instance: &PbInstance,
    seed: Seed,
) -> Result<(FractionalOutcome, IntegralOutcome, BwMesCore, RoundingTrace)> {
    let core = bw_mes_fractional(instance)?;
    let (outcome, rounding) = dependent_round(instance, &core.p, seed)?;
    Ok((core.p.clone(), outcome, core, rounding))
}

impl BwMesCore {
    /// Equal-shares payments of each cell whose approved funded count equals
    /// `|G_S|`, scaled by cell size.
    ///
    /// The comparison `group_payment ≤ ladder_cost` holds for approval
    /// utilities only. Under cost utilities use [`Self::approved_spend_bounds`].
    pub fn payment_comparisons(&self, instance: &PbInstance) -> Vec<PaymentComparison> {
        let outcome = &self.mes.outcome;
        self.ladders
            .iter()
            .enumerate()
            .filter(|(_, ladder)| {
                ladder
                    .approvals
                    .iter()
                    .filter(|&c| outcome.contains(c))
                    .count()
                    == ladder.affordable.len()
            })
            .map(|(z, ladder)| {
                let i = ladder.voters[0];
                let paid: Rational = ladder
                    .approvals
                    .iter()
                    .filter(|&c| outcome.contains(c))
                    .map(|c| &self.mes.payments.spend[i][c])
                    .sum();
                PaymentComparison {
                    cell: z,
                    group_payment: Rational::from(ladder.voters.len()) * paid,
                    ladder_cost: ladder.affordable.cost(instance),
                }
            })
            .collect()
    }

    /// Per voter: `Σ_{j ∈ A_i} y_ij ≥ min(B, cost(A_i)) / n`.
    pub fn approved_spend_bounds(&self, instance: &PbInstance) -> Vec<(Rational, Rational)> {
        let n = Rational::from(instance.num_voters());
        (0..instance.num_voters())
            .map(|i| {
                let spent: Rational = instance.approvals(i).map(|c| &self.spend.spend[i][c]).sum();
                let approved = instance.cost_of_set(instance.approvals(i));
                (spent, approved.min(instance.budget().clone()) / &n)
            })
            .collect()
    }
}
