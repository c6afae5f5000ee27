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

//! Seeded random instances and fractional outcomes for sweeps and tests.

use rand::Rng;
use std::ops::RangeInclusive;

use crate::model::{FractionalOutcome, PbInstance, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UtilityKind {
    /// Non-negative rational utilities.
    General,
    /// Approvals.
    Binary,
    /// Approved projects are worth their cost.
    Cost,
}

/// A valid instance: costs `k/d` with `k ∈ 1..=8`, `d ∈ 1..=3`, budget between
/// the largest cost and the total cost. Each voter after the first copies the
/// previous ballot with probability 1/3, so unanimous cells occur.
pub fn random_instance(
    rng: &mut impl Rng,
    voters: RangeInclusive<usize>,
    projects: RangeInclusive<usize>,
    kind: UtilityKind,
) -> PbInstance {
    let n = rng.random_range(voters);
    let m = rng.random_range(projects);
    let costs: Vec<Rational> = (0..m)
        .map(|_| Rational::new(rng.random_range(1..=8), rng.random_range(1..=3)))
        .collect();
    let max = costs.iter().max().cloned().expect("at least one project");
    let total: Rational = costs.iter().sum();
    let budget = &max + &((&total - &max) * Rational::new(rng.random_range(0..=8), 8));
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 && rng.random_ratio(1, 3) {
            rows.push(rows[i - 1].clone());
            continue;
        }
        let row = (0..m)
            .map(|c| match kind {
                UtilityKind::General => {
                    Rational::new(rng.random_range(0..=6), rng.random_range(1..=2))
                }
                UtilityKind::Binary => Rational::from_integer(rng.random_bool(0.5) as i64),
                UtilityKind::Cost => {
                    if rng.random_bool(0.5) {
                        costs[c].clone()
                    } else {
                        Rational::zero()
                    }
                }
            })
            .collect();
        rows.push(row);
    }
    PbInstance::with_default_ids(budget, costs, rows).expect("generated instances are valid")
}

/// A fractional outcome spending exactly `B`, with some entries at 0 or 1.
pub fn random_feasible_fractional(rng: &mut impl Rng, instance: &PbInstance) -> FractionalOutcome {
    let x: Vec<Rational> = (0..instance.num_projects())
        .map(|_| match rng.random_range(0..5) {
            0 => Rational::zero(),
            1 => Rational::one(),
            _ => Rational::new(rng.random_range(1..12), 12),
        })
        .collect();
    let spent: Rational = x.iter().zip(instance.costs()).map(|(a, c)| a * c).sum();
    let budget = instance.budget();
    let p = if spent >= *budget {
        let scale = budget / &spent;
        x.iter().map(|a| a * &scale).collect()
    } else {
        // raise every entry toward 1 by the same fraction t
        let t = (budget - &spent) / (instance.total_cost() - &spent);
        x.iter()
            .map(|a| a + &(&t * &(Rational::one() - a)))
            .collect()
    };
    let p = FractionalOutcome::new(p).expect("scaled entries stay in [0, 1]");
    debug_assert!(p.is_feasible(instance));
    p
}
