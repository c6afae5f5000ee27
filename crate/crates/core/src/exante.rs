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

//! Ex-ante fair-share axioms on fractional outcomes.
//!
//! Every bound is an optimal fractional utility under some budget, computed
//! by the fractional-knapsack greedy in [`optimal_fractional_utility`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{FractionalOutcome, PbInstance, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExAnteAxiom {
    Ifs,
    StrongIfs,
    Ufs,
    StrongUfs,
    Gfs,
}

/// One checked inequality `lhs >= rhs` for a voter or group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExAnteWitness {
    pub voters: Vec<usize>,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl ExAnteWitness {
    pub fn violated(&self) -> bool {
        self.lhs < self.rhs
    }
}

/// `holds` is false exactly when some witness is violated. Failing checks list
/// their violations; GFS always reports its worst-slack group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExAnteReport {
    pub axiom: ExAnteAxiom,
    pub holds: bool,
    pub witnesses: Vec<ExAnteWitness>,
}

impl ExAnteReport {
    fn from_violations(axiom: ExAnteAxiom, witnesses: Vec<ExAnteWitness>) -> Self {
        ExAnteReport {
            axiom,
            holds: witnesses.is_empty(),
            witnesses,
        }
    }
}

/// Projects with positive utility for `voter`, by descending utility per
/// cost; ties by ascending cost, then index.
pub(crate) fn ratio_order(instance: &PbInstance, voter: usize) -> Vec<usize> {
    let mut order: Vec<(usize, Rational)> = instance
        .approvals(voter)
        .map(|c| (c, instance.utility_of(voter, c) / instance.cost(c)))
        .collect();
    order.sort_by(|(a, ra), (b, rb)| {
        rb.cmp(ra)
            .then_with(|| instance.cost(*a).cmp(instance.cost(*b)))
            .then_with(|| a.cmp(b))
    });
    order.into_iter().map(|(c, _)| c).collect()
}

fn greedy_value(
    instance: &PbInstance,
    voter: usize,
    order: &[usize],
    budget: &Rational,
) -> Rational {
    let mut left = budget.clone();
    let mut value = Rational::zero();
    for &c in order {
        if !left.is_positive() {
            break;
        }
        let cost = instance.cost(c);
        let u = instance.utility_of(voter, c);
        if *cost <= left {
            value += u;
            left -= cost;
        } else {
            value += u * &(&left / cost);
            left = Rational::zero();
        }
    }
    value
}

/// `max { u_i(t) : t fractional, cost(t) = b }`.
///
/// Leftover budget after the positive-utility projects can always be placed
/// on zero-utility mass, since `cost(C) >= B >= b`.
pub fn optimal_fractional_utility(
    instance: &PbInstance,
    voter: usize,
    budget: &Rational,
) -> Result<Rational> {
    if budget.is_negative() || budget > instance.budget() {
        return Err(Error::Precondition(format!(
            "budget {budget} outside [0, {}]",
            instance.budget()
        )));
    }
    Ok(greedy_value(
        instance,
        voter,
        &ratio_order(instance, voter),
        budget,
    ))
}

pub(crate) fn full_budget_optima(instance: &PbInstance) -> Vec<Rational> {
    (0..instance.num_voters())
        .map(|i| greedy_value(instance, i, &ratio_order(instance, i), instance.budget()))
        .collect()
}

fn check_voters(
    instance: &PbInstance,
    p: &FractionalOutcome,
    axiom: ExAnteAxiom,
    bound: impl Fn(usize) -> Rational,
) -> ExAnteReport {
    let violations = (0..instance.num_voters())
        .map(|i| ExAnteWitness {
            voters: vec![i],
            lhs: instance.fractional_utility(i, p),
            rhs: bound(i),
        })
        .filter(ExAnteWitness::violated)
        .collect();
    ExAnteReport::from_violations(axiom, violations)
}

/// Each voter gets at least `1/n` of their optimum at budget `B`.
pub fn check_ifs(instance: &PbInstance, p: &FractionalOutcome) -> ExAnteReport {
    let n = Rational::from(instance.num_voters());
    let optima = full_budget_optima(instance);
    check_voters(instance, p, ExAnteAxiom::Ifs, |i| &optima[i] / &n)
}

/// Each voter gets at least their optimum at budget `B/n`.
pub fn check_strong_ifs(instance: &PbInstance, p: &FractionalOutcome) -> ExAnteReport {
    let share = instance.share();
    check_voters(instance, p, ExAnteAxiom::StrongIfs, |i| {
        greedy_value(instance, i, &ratio_order(instance, i), &share)
    })
}

fn check_cells(
    instance: &PbInstance,
    p: &FractionalOutcome,
    axiom: ExAnteAxiom,
    bound: impl Fn(usize, usize) -> Rational,
) -> ExAnteReport {
    let violations = instance
        .unanimous_partition()
        .into_iter()
        .map(|cell| {
            let i = cell[0];
            let rhs = bound(i, cell.len());
            ExAnteWitness {
                lhs: instance.fractional_utility(i, p),
                rhs,
                voters: cell,
            }
        })
        .filter(ExAnteWitness::violated)
        .collect();
    ExAnteReport::from_violations(axiom, violations)
}

/// Unanimous groups `S` get `|S|/n` of the optimum at budget `B`.
///
/// Only maximal unanimous cells are checked: the bound grows with `|S|`, so a
/// cell satisfying it covers all of its subgroups.
pub fn check_ufs(instance: &PbInstance, p: &FractionalOutcome) -> ExAnteReport {
    let n = Rational::from(instance.num_voters());
    let optima = full_budget_optima(instance);
    check_cells(instance, p, ExAnteAxiom::Ufs, |i, size| {
        &optima[i] * &(Rational::from(size) / &n)
    })
}

/// Unanimous groups `S` get their optimum at budget `|S| * B/n`.
pub fn check_strong_ufs(instance: &PbInstance, p: &FractionalOutcome) -> ExAnteReport {
    let share = instance.share();
    check_cells(instance, p, ExAnteAxiom::StrongUfs, |i, size| {
        greedy_value(
            instance,
            i,
            &ratio_order(instance, i),
            &(&share * &Rational::from(size)),
        )
    })
}

/// `sum_j p_j * max_{i in S} u_ij >= (1/n) sum_{i in S} opt_i(B)` for every
/// non-empty voter group `S`.
pub fn check_gfs(
    instance: &PbInstance,
    p: &FractionalOutcome,
    limits: &Limits,
) -> Result<ExAnteReport> {
    let n = instance.num_voters();
    limits.check_voters(n)?;
    let m = instance.num_projects();
    let n_r = Rational::from(n);
    let entitlement: Vec<Rational> = full_budget_optima(instance)
        .iter()
        .map(|o| o / &n_r)
        .collect();
    let zero = Rational::zero();

    let mut worst: Option<(Rational, ExAnteWitness)> = None;
    for group in 1u64..(1u64 << n) {
        let members: Vec<usize> = (0..n).filter(|i| group >> i & 1 == 1).collect();
        let lhs: Rational = (0..m)
            .filter(|&j| !p.get(j).is_zero())
            .map(|j| {
                let best = members
                    .iter()
                    .map(|&i| instance.utility_of(i, j))
                    .max()
                    .unwrap_or(&zero);
                p.get(j) * best
            })
            .sum();
        let rhs: Rational = members.iter().map(|&i| &entitlement[i]).sum();
        let slack = &lhs - &rhs;
        if worst.as_ref().is_none_or(|(s, _)| slack < *s) {
            worst = Some((
                slack,
                ExAnteWitness {
                    voters: members,
                    lhs,
                    rhs,
                },
            ));
        }
    }
    let (slack, witness) = worst.expect("at least one voter");
    Ok(ExAnteReport {
        axiom: ExAnteAxiom::Gfs,
        holds: !slack.is_negative(),
        witnesses: vec![witness],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn rs(values: &[&str]) -> Vec<Rational> {
        values.iter().map(|s| r(s)).collect()
    }

    fn p(values: &[&str]) -> FractionalOutcome {
        FractionalOutcome::new(rs(values)).unwrap()
    }

    /// Brute force over a grid of split points for two projects.
    fn grid_optimum(u: [Rational; 2], c: [Rational; 2], b: &Rational, steps: i64) -> Rational {
        let mut best = Rational::zero();
        for k in 0..=steps {
            let x = Rational::new(k, steps);
            // spend x*b on project 0, rest on project 1, capped at full funding
            let f0 = (&x * b / &c[0]).min(Rational::one());
            let f1 = ((&(Rational::one() - &x) * b) / &c[1]).min(Rational::one());
            let v = &u[0] * &f0 + &u[1] * &f1;
            best = best.max(v);
        }
        best
    }

    #[test]
    fn optimum_examples() {
        let binary =
            PbInstance::with_default_ids(r("2"), rs(&["1", "2"]), vec![vec![r("1"), r("1")]])
                .unwrap();
        assert_eq!(
            optimal_fractional_utility(&binary, 0, &r("0")).unwrap(),
            r("0")
        );
        let value = optimal_fractional_utility(&binary, 0, &r("3/2")).unwrap();
        assert_eq!(value, r("5/4"));
        assert_eq!(
            value,
            grid_optimum([r("1"), r("1")], [r("1"), r("2")], &r("3/2"), 60)
        );

        let general =
            PbInstance::with_default_ids(r("4"), rs(&["1", "4"]), vec![vec![r("3"), r("4")]])
                .unwrap();
        let value = optimal_fractional_utility(&general, 0, &r("2")).unwrap();
        assert_eq!(value, r("4"));
        assert_eq!(
            value,
            grid_optimum([r("3"), r("4")], [r("1"), r("4")], &r("2"), 60)
        );
        assert!(optimal_fractional_utility(&general, 0, &r("5")).is_err());
    }

    fn two_disjoint() -> PbInstance {
        PbInstance::with_default_ids(
            r("1"),
            rs(&["1", "1"]),
            vec![vec![r("2"), r("0")], vec![r("0"), r("1")]],
        )
        .unwrap()
    }

    #[test]
    fn ifs_examples() {
        let inst = two_disjoint();
        let half = p(&["1/2", "1/2"]);
        assert!(check_ifs(&inst, &half).holds);
        assert!(check_strong_ifs(&inst, &half).holds);
        let skewed = p(&["1", "0"]);
        let report = check_ifs(&inst, &skewed);
        assert!(!report.holds);
        assert_eq!(report.witnesses.len(), 1);
        assert_eq!(report.witnesses[0].voters, vec![1]);
        assert_eq!(report.witnesses[0].rhs, r("1/2"));
    }

    #[test]
    fn single_voter_ifs_needs_optimum() {
        let inst =
            PbInstance::with_default_ids(r("1"), rs(&["1", "1"]), vec![vec![r("2"), r("1")]])
                .unwrap();
        assert!(check_ifs(&inst, &p(&["1", "0"])).holds);
        assert!(!check_ifs(&inst, &p(&["1/2", "1/2"])).holds);
    }

    #[test]
    fn strong_ufs_bound_for_unanimous_pair() {
        let inst = PbInstance::from_approvals(
            r("2"),
            rs(&["1", "1", "1"]),
            &[vec![0, 1, 2], vec![0, 1, 2]],
        )
        .unwrap();
        let report = check_strong_ufs(&inst, &p(&["1", "1/2", "1/2"]));
        assert!(report.holds);
        let report = check_strong_ufs(&inst, &p(&["1", "1/2", "0"]));
        assert!(!report.holds);
        assert_eq!(report.witnesses[0].rhs, r("2"));
        assert_eq!(report.witnesses[0].voters, vec![0, 1]);
    }

    #[test]
    fn gfs_disjoint_concentration_fails() {
        let inst = two_disjoint();
        let limits = Limits::default();
        let report = check_gfs(&inst, &p(&["1", "0"]), &limits).unwrap();
        assert!(!report.holds);
        assert_eq!(report.witnesses[0].voters, vec![1]);
        assert!(
            check_gfs(&inst, &p(&["1/2", "1/2"]), &limits)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn gfs_scale_error() {
        let inst = PbInstance::with_default_ids(r("1"), rs(&["1"]), vec![vec![r("1")]; 3]).unwrap();
        let limits = Limits {
            max_voters: 2,
            max_projects: 20,
        };
        assert!(matches!(
            check_gfs(&inst, &p(&["1"]), &limits),
            Err(Error::Scale { .. })
        ));
    }
}
