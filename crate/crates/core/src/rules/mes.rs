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

use crate::model::{IntegralOutcome, PaymentMatrix, PbInstance, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MesStep {
    pub project: usize,
    pub rho: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MesResult {
    pub outcome: IntegralOutcome,
    pub payments: PaymentMatrix,
    /// Selected projects in selection order with their prices.
    pub rho_log: Vec<MesStep>,
}

/// Method of equal shares: voters start with `B / n` each and repeatedly buy
/// the project affordable at the lowest price per unit of utility.
pub fn mes(instance: &PbInstance) -> MesResult {
    let mut payments = PaymentMatrix::new(instance);
    let mut selected = vec![false; instance.num_projects()];
    let mut rho_log = Vec::new();
    loop {
        let mut best: Option<(usize, Rational)> = None;
        for j in (0..instance.num_projects()).filter(|&j| !selected[j]) {
            if let Some(rho) = min_affordable_rho(instance, &payments.remaining, j) {
                if best.as_ref().is_none_or(|(_, b)| rho < *b) {
                    best = Some((j, rho));
                }
            }
        }
        let Some((j, rho)) = best else { break };
        for i in 0..instance.num_voters() {
            let u = instance.utility_of(i, j);
            if u.is_positive() {
                let amount = payments.remaining[i].clone().min(u * &rho);
                payments.pay(i, j, &amount);
            }
        }
        assert_eq!(
            payments.project_total(j),
            *instance.cost(j),
            "equal-shares payments must cover the cost"
        );
        selected[j] = true;
        rho_log.push(MesStep { project: j, rho });
    }
    let outcome = rho_log.iter().map(|s| s.project).collect();
    MesResult {
        outcome,
        payments,
        rho_log,
    }
}

/// Least `ρ` with `Σ_i min(b_i, u_ij ρ) = cost(j)`, if any.
///
/// The left side is continuous and non-decreasing in `ρ`; supporters are
/// capped in order of their breakpoints `b_i / u_ij`.
fn min_affordable_rho(instance: &PbInstance, remaining: &[Rational], j: usize) -> Option<Rational> {
    let cost = instance.cost(j);
    let mut supporters: Vec<(Rational, &Rational, &Rational)> = (0..instance.num_voters())
        .filter(|&i| instance.utility_of(i, j).is_positive())
        .map(|i| {
            let u = instance.utility_of(i, j);
            (&remaining[i] / u, &remaining[i], u)
        })
        .collect();
    let available: Rational = supporters.iter().map(|(_, b, _)| *b).sum();
    if available < *cost {
        return None;
    }
    supporters.sort_by(|a, b| a.0.cmp(&b.0));
    let mut capped = Rational::zero();
    let mut slope: Rational = supporters.iter().map(|(_, _, u)| *u).sum();
    for (breakpoint, b, u) in &supporters {
        let rho = (cost - &capped) / &slope;
        if rho <= *breakpoint {
            return Some(rho);
        }
        capped += *b;
        slope -= *u;
    }
    unreachable!("total available budget covers the cost")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    /// Smallest grid point where the affordability sum reaches the cost.
    fn grid_rho(
        instance: &PbInstance,
        remaining: &[Rational],
        j: usize,
        den: i64,
        max: i64,
    ) -> Option<Rational> {
        (1..=max * den).map(|k| Rational::new(k, den)).find(|rho| {
            let sum: Rational = (0..instance.num_voters())
                .map(|i| remaining[i].clone().min(instance.utility_of(i, j) * rho))
                .sum();
            sum >= *instance.cost(j)
        })
    }

    #[test]
    fn two_voter_example() {
        let inst =
            PbInstance::from_approvals(r("2"), vec![r("1"); 3], &[vec![0, 1], vec![0, 2]]).unwrap();
        let result = mes(&inst);
        assert_eq!(result.outcome.members(), &[0]);
        assert_eq!(
            result.rho_log,
            vec![MesStep {
                project: 0,
                rho: r("1/2")
            }]
        );
        assert_eq!(result.payments.remaining, vec![r("1/2"), r("1/2")]);
    }

    #[test]
    fn single_voter_pays_everything() {
        let inst = PbInstance::from_approvals(r("3"), vec![r("3")], &[vec![0]]).unwrap();
        let result = mes(&inst);
        assert_eq!(result.rho_log[0].rho, r("3"));
        assert!(result.payments.remaining[0].is_zero());
    }

    #[test]
    fn unapproved_project_never_selected() {
        let inst = PbInstance::from_approvals(r("2"), vec![r("1"); 2], &[vec![0]]).unwrap();
        assert_eq!(mes(&inst).outcome.members(), &[0]);
    }

    #[test]
    fn exact_rho_matches_grid_search() {
        // unequal budgets and utilities force a capped supporter
        let inst = PbInstance::with_default_ids(
            r("3"),
            vec![r("2"), r("1")],
            vec![
                vec![r("1"), r("0")],
                vec![r("3"), r("0")],
                vec![r("1"), r("1")],
            ],
        )
        .unwrap();
        let remaining = vec![r("1"), r("1/4"), r("1")];
        let exact = min_affordable_rho(&inst, &remaining, 0).unwrap();
        assert_eq!(exact, r("7/8"));
        assert_eq!(grid_rho(&inst, &remaining, 0, 8, 4), Some(exact));
        assert_eq!(
            min_affordable_rho(&inst, &[r("0"), r("0"), r("1/2")], 1),
            None
        );
    }
}
