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
use std::collections::BTreeMap;

use super::instance::mask_members;
use super::{PbInstance, Rational};
use crate::error::{Error, Result};

/// A set of funded projects, stored as sorted project indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct IntegralOutcome(Vec<usize>);

impl IntegralOutcome {
    pub fn new(projects: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = projects.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        IntegralOutcome(members)
    }

    pub fn empty() -> Self {
        IntegralOutcome(Vec::new())
    }

    pub fn from_mask(mask: u64) -> Self {
        IntegralOutcome(mask_members(mask).collect())
    }

    /// Panics if a member index is 64 or larger.
    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0u64, |mask, &c| {
            assert!(c < 64, "project index {c} does not fit a mask");
            mask | (1 << c)
        })
    }

    pub fn contains(&self, project: usize) -> bool {
        self.0.binary_search(&project).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn is_superset_of(&self, other: &IntegralOutcome) -> bool {
        other.iter().all(|c| self.contains(c))
    }

    pub fn with(&self, project: usize) -> Self {
        IntegralOutcome::new(self.iter().chain(std::iter::once(project)))
    }

    pub fn cost(&self, instance: &PbInstance) -> Rational {
        instance.cost_of_set(self.iter())
    }

    pub fn indicator(&self, m: usize) -> Vec<bool> {
        let mut v = vec![false; m];
        for &c in &self.0 {
            v[c] = true;
        }
        v
    }

    pub fn ids(&self, instance: &PbInstance) -> Vec<String> {
        self.iter()
            .map(|c| instance.project_ids()[c].clone())
            .collect()
    }
}

impl FromIterator<usize> for IntegralOutcome {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        IntegralOutcome::new(iter)
    }
}

/// Per-project funded fractions, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FractionalOutcome(Vec<Rational>);

impl FractionalOutcome {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(c) = values.iter().position(|x| !x.in_unit_interval()) {
            return Err(Error::Precondition(format!(
                "component {c} = {} outside [0, 1]",
                values[c]
            )));
        }
        Ok(FractionalOutcome(values))
    }

    pub fn zeros(m: usize) -> Self {
        FractionalOutcome(vec![Rational::zero(); m])
    }

    pub fn from_integral(outcome: &IntegralOutcome, m: usize) -> Self {
        FractionalOutcome(
            outcome
                .indicator(m)
                .into_iter()
                .map(|x| if x { Rational::one() } else { Rational::zero() })
                .collect(),
        )
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, project: usize) -> &Rational {
        &self.0[project]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum_c p_c * cost(c)`.
    pub fn cost(&self, instance: &PbInstance) -> Rational {
        self.0
            .iter()
            .zip(instance.costs())
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, c)| x * c)
            .sum()
    }

    /// Feasible means spending exactly the budget.
    pub fn is_feasible(&self, instance: &PbInstance) -> bool {
        self.0.len() == instance.num_projects() && self.cost(instance) == *instance.budget()
    }

    pub fn to_id_map(&self, instance: &PbInstance) -> BTreeMap<String, Rational> {
        instance
            .project_ids()
            .iter()
            .cloned()
            .zip(self.0.iter().cloned())
            .collect()
    }
}

/// An explicit probability distribution over integral outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lottery {
    support: Vec<(Rational, IntegralOutcome)>,
}

impl Lottery {
    /// Weights must lie in `(0, 1]`, sum to one, and outcomes must be distinct.
    pub fn new(support: Vec<(Rational, IntegralOutcome)>) -> Result<Self> {
        if let Some((w, _)) = support
            .iter()
            .find(|(w, _)| !w.is_positive() || *w > Rational::one())
        {
            return Err(Error::Precondition(format!(
                "lottery weight {w} outside (0, 1]"
            )));
        }
        let total: Rational = support.iter().map(|(w, _)| w).sum();
        if !total.is_one() {
            return Err(Error::Precondition(format!(
                "lottery weights sum to {total}, not 1"
            )));
        }
        let mut outcomes: Vec<&IntegralOutcome> = support.iter().map(|(_, w)| w).collect();
        outcomes.sort();
        if outcomes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition(
                "lottery support has duplicate outcomes".into(),
            ));
        }
        Ok(Lottery { support })
    }

    /// Builds a lottery, merging duplicate outcomes by summing their weights.
    pub fn merged(entries: impl IntoIterator<Item = (Rational, IntegralOutcome)>) -> Result<Self> {
        let mut acc: BTreeMap<IntegralOutcome, Rational> = BTreeMap::new();
        for (w, outcome) in entries {
            *acc.entry(outcome).or_default() += w;
        }
        Lottery::new(
            acc.into_iter()
                .filter(|(_, w)| !w.is_zero())
                .map(|(o, w)| (w, o))
                .collect(),
        )
    }

    pub fn point_mass(outcome: IntegralOutcome) -> Self {
        Lottery {
            support: vec![(Rational::one(), outcome)],
        }
    }

    pub fn support(&self) -> &[(Rational, IntegralOutcome)] {
        &self.support
    }

    /// Per-project marginal probabilities over `m` projects.
    pub fn marginals(&self, m: usize) -> Vec<Rational> {
        let mut p = vec![Rational::zero(); m];
        for (w, outcome) in &self.support {
            for c in outcome.iter() {
                p[c] += w;
            }
        }
        p
    }

    /// True iff `sum_j lambda_j * 1_{W_j} = p` component-wise.
    pub fn implements(&self, p: &FractionalOutcome) -> bool {
        if self
            .support
            .iter()
            .any(|(_, o)| o.iter().any(|c| c >= p.len()))
        {
            return false;
        }
        self.marginals(p.len()) == p.values()
    }

    pub fn expected_cost(&self, instance: &PbInstance) -> Rational {
        self.support.iter().map(|(w, o)| w * o.cost(instance)).sum()
    }
}

pub fn implements(lottery: &Lottery, p: &FractionalOutcome) -> bool {
    lottery.implements(p)
}

/// Per-voter, per-project spending and each voter's remaining budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaymentMatrix {
    /// `spend[voter][project]`.
    pub spend: Vec<Vec<Rational>>,
    pub remaining: Vec<Rational>,
}

impl PaymentMatrix {
    /// Every voter starts with `B / n` and has spent nothing.
    pub fn new(instance: &PbInstance) -> Self {
        let (n, m) = (instance.num_voters(), instance.num_projects());
        PaymentMatrix {
            spend: vec![vec![Rational::zero(); m]; n],
            remaining: vec![instance.share(); n],
        }
    }

    pub fn voter_total(&self, voter: usize) -> Rational {
        self.spend[voter].iter().sum()
    }

    pub fn project_total(&self, project: usize) -> Rational {
        self.spend.iter().map(|row| &row[project]).sum()
    }

    /// Records a payment and deducts it from the voter's remaining budget.
    pub fn pay(&mut self, voter: usize, project: usize, amount: &Rational) {
        self.spend[voter][project] += amount;
        self.remaining[voter] -= amount;
    }
}
