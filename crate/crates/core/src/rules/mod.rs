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

//! Rules producing fractional and integral outcomes.

mod bw_gcr;
mod bw_mes;
mod frd;
mod gcr;
mod mes;

use serde::Serialize;

pub use bw_gcr::{bw_gcr, bw_gcr_fractional, BwGcrCore, CostComparison};
pub use bw_mes::{bw_mes, bw_mes_fractional, BwMesCore, PaymentComparison};
pub use frd::fractional_random_dictator;
pub use gcr::{gcr, GcrStep, GcrTrace};
pub use mes::{mes, MesResult, MesStep};

use crate::model::{IntegralOutcome, PbInstance, Rational};

/// What a unanimous cell can fully afford from its pooled share.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupLadder {
    pub voters: Vec<usize>,
    pub approvals: IntegralOutcome,
    /// Longest ascending-cost prefix of `approvals` costing at most `|S| * B / n`.
    pub affordable: IntegralOutcome,
    /// First approved project past the prefix.
    pub next: Option<usize>,
    /// Fraction of `next` the leftover share buys; always below one.
    pub delta: Rational,
}

impl GroupLadder {
    pub fn new(instance: &PbInstance, voters: Vec<usize>) -> Self {
        let approvals: IntegralOutcome = instance.approvals(voters[0]).collect();
        let pooled = Rational::from(voters.len()) * instance.share();
        let mut left = pooled;
        let mut affordable = Vec::new();
        let mut next = None;
        for c in cheapest_first(instance, approvals.iter()) {
            if *instance.cost(c) <= left {
                left -= instance.cost(c);
                affordable.push(c);
            } else {
                next = Some(c);
                break;
            }
        }
        let delta = match next {
            Some(g) => &left / instance.cost(g),
            None => Rational::zero(),
        };
        GroupLadder {
            voters,
            approvals,
            affordable: IntegralOutcome::new(affordable),
            next,
            delta,
        }
    }

    /// `|S| * B / n - cost(G_S)`.
    pub fn leftover(&self, instance: &PbInstance) -> Rational {
        Rational::from(self.voters.len()) * instance.share() - self.affordable.cost(instance)
    }
}

/// One ladder per maximal unanimous cell.
pub fn group_ladders(instance: &PbInstance) -> Vec<GroupLadder> {
    instance
        .unanimous_partition()
        .into_iter()
        .map(|cell| GroupLadder::new(instance, cell))
        .collect()
}

/// Ascending cost, ties by index.
pub(crate) fn cheapest_first(
    instance: &PbInstance,
    projects: impl IntoIterator<Item = usize>,
) -> Vec<usize> {
    let mut order: Vec<usize> = projects.into_iter().collect();
    order.sort_by(|a, b| instance.cost(*a).cmp(instance.cost(*b)).then(a.cmp(b)));
    order
}

/// Moves up to `amount` of spending onto `project` without passing `p = 1`;
/// returns what was not absorbed.
pub(crate) fn spend_capped(
    instance: &PbInstance,
    p: &mut [Rational],
    project: usize,
    amount: Rational,
) -> Rational {
    let cost = instance.cost(project);
    let room = (Rational::one() - &p[project]) * cost;
    if amount <= room {
        p[project] += &amount / cost;
        Rational::zero()
    } else {
        p[project] = Rational::one();
        amount - room
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn ladder_prefix_and_delta() {
        // one cell of two voters out of four: pooled share 3
        let inst = PbInstance::from_approvals(
            r("6"),
            vec![r("2"), r("1"), r("2"), r("4")],
            &[vec![0, 1, 2], vec![0, 1, 2], vec![3], vec![3]],
        )
        .unwrap();
        let ladders = group_ladders(&inst);
        assert_eq!(ladders.len(), 2);
        assert_eq!(ladders[0].affordable.members(), &[0, 1]);
        assert_eq!(ladders[0].next, Some(2));
        assert_eq!(ladders[0].delta, r("0"));
        assert_eq!(ladders[1].affordable.members(), &[] as &[usize]);
        assert_eq!(ladders[1].delta, r("3/4"));
    }

    #[test]
    fn capped_spending_returns_residue() {
        let inst = PbInstance::from_approvals(r("2"), vec![r("2"), r("2")], &[vec![0]]).unwrap();
        let mut p = vec![r("1/2"), r("0")];
        assert_eq!(spend_capped(&inst, &mut p, 0, r("3/2")), r("1/2"));
        assert_eq!(p[0], r("1"));
    }
}
