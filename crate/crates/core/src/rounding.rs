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

//! Dependent rounding of fractional outcomes and the ex-post budget
//! predicates it is measured against.
//!
//! Each round either moves cost-weighted mass between the two lowest-index
//! fractional projects (keeping `sum_c cost(c) * q_c` fixed) until one of them
//! hits 0 or 1, or, with a single fractional project left, flips it with its
//! own probability. Marginals are preserved in expectation, and since total
//! cost only moves in the final single-project round, every outcome is
//! budget balanced up to one project.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{dyadic_below, FractionalOutcome, IntegralOutcome, PbInstance, Rational};

/// Seed of one rounding run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed for sample `index` of a multi-sample run: splitmix64 applied to
/// `base + index`.
pub fn derive_seed(base: Seed, index: u64) -> Seed {
    let mut z = base.0.wrapping_add(index).wrapping_add(SPLITMIX_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    Seed(z ^ (z >> 31))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairBranch {
    /// `q_i += alpha`, `q_j -= cost(i)/cost(j) * alpha`.
    RaiseFirst,
    /// `q_i -= beta`, `q_j += cost(i)/cost(j) * beta`.
    RaiseSecond,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RoundStep {
    Pair {
        first: usize,
        second: usize,
        alpha: Rational,
        beta: Rational,
        branch: PairBranch,
    },
    Single {
        project: usize,
        funded: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub step: RoundStep,
    /// The vector before this round's update.
    pub before: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundingTrace {
    pub seed: Seed,
    pub rounds: Vec<RoundRecord>,
    pub outcome: IntegralOutcome,
}

impl RoundingTrace {
    /// `q^0, q^1, …, q^{t_f}` where the last entry is the 0/1 indicator of the
    /// outcome.
    pub fn snapshots(&self) -> Vec<Vec<Rational>> {
        let m = match self.rounds.first() {
            Some(r) => r.before.len(),
            None => return Vec::new(),
        };
        let mut out: Vec<Vec<Rational>> = self.rounds.iter().map(|r| r.before.clone()).collect();
        out.push(
            self.outcome
                .indicator(m)
                .into_iter()
                .map(|x| if x { Rational::one() } else { Rational::zero() })
                .collect(),
        );
        out
    }
}

/// Validated rounding input that can be sampled repeatedly.
#[derive(Debug, Clone)]
pub struct DependentRounder<'a> {
    instance: &'a PbInstance,
    start: Vec<Rational>,
}

impl<'a> DependentRounder<'a> {
    /// Requires `cost(p) = B` exactly.
    pub fn new(instance: &'a PbInstance, p: &FractionalOutcome) -> Result<Self> {
        Self::with_target(instance, p, instance.budget())
    }

    fn with_target(
        instance: &'a PbInstance,
        p: &FractionalOutcome,
        target: &Rational,
    ) -> Result<Self> {
        if p.len() != instance.num_projects() {
            return Err(Error::Precondition(format!(
                "fractional outcome has {} components, instance has {} projects",
                p.len(),
                instance.num_projects()
            )));
        }
        let spent = p.cost(instance);
        if spent != *target {
            return Err(Error::Precondition(format!(
                "fractional outcome spends {spent}, expected exactly {target}"
            )));
        }
        Ok(DependentRounder {
            instance,
            start: p.values().to_vec(),
        })
    }

    pub fn sample(&self, seed: Seed) -> IntegralOutcome {
        self.run(seed, None)
    }

    pub fn sample_traced(&self, seed: Seed) -> (IntegralOutcome, RoundingTrace) {
        let mut rounds = Vec::new();
        let outcome = self.run(seed, Some(&mut rounds));
        let trace = RoundingTrace {
            seed,
            rounds,
            outcome: outcome.clone(),
        };
        (outcome, trace)
    }

    fn run(&self, seed: Seed, mut trace: Option<&mut Vec<RoundRecord>>) -> IntegralOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
        let mut q = self.start.clone();
        let mut round = 0;
        loop {
            let mut fractional = q
                .iter()
                .enumerate()
                .filter(|(_, x)| x.is_strictly_fractional())
                .map(|(c, _)| c);
            let (Some(first), second) = (fractional.next(), fractional.next()) else {
                break;
            };
            let before = trace.as_ref().map(|_| q.clone());
            let step = match second {
                Some(second) => self.pair_update(&mut q, first, second, rng.next_u64()),
                None => {
                    let funded = dyadic_below(rng.next_u64(), &q[first]);
                    q[first] = if funded {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    RoundStep::Single {
                        project: first,
                        funded,
                    }
                }
            };
            if let (Some(t), Some(before)) = (trace.as_deref_mut(), before) {
                t.push(RoundRecord {
                    round,
                    step,
                    before,
                });
            }
            round += 1;
        }
        debug_assert!(round <= q.len());
        IntegralOutcome::new(
            q.iter()
                .enumerate()
                .filter(|(_, x)| x.is_one())
                .map(|(c, _)| c),
        )
    }

    fn pair_update(&self, q: &mut [Rational], i: usize, j: usize, draw: u64) -> RoundStep {
        let ratio = self.instance.cost(i) / self.instance.cost(j);
        let one = Rational::one();
        let alpha = (&one - &q[i]).min(&q[j] / &ratio);
        let beta = q[i].clone().min((&one - &q[j]) / &ratio);
        assert!(
            alpha.is_positive() && beta.is_positive(),
            "degenerate rounding step on strictly fractional entries"
        );
        let raise_first = &beta / (&alpha + &beta);
        let branch = if dyadic_below(draw, &raise_first) {
            q[i] += &alpha;
            q[j] -= &ratio * &alpha;
            PairBranch::RaiseFirst
        } else {
            q[i] -= &beta;
            q[j] += &ratio * &beta;
            PairBranch::RaiseSecond
        };
        RoundStep::Pair {
            first: i,
            second: j,
            alpha,
            beta,
            branch,
        }
    }
}

/// Rounds a feasible fractional outcome; the result is budget balanced up to
/// one project and contains every fully funded project.
pub fn dependent_round(
    instance: &PbInstance,
    p: &FractionalOutcome,
    seed: Seed,
) -> Result<(IntegralOutcome, RoundingTrace)> {
    Ok(DependentRounder::new(instance, p)?.sample_traced(seed))
}

/// Rounds a fractional outcome spending `B - max_c cost(c)`; every result
/// costs at most `B`.
pub fn round_with_hard_cap(
    instance: &PbInstance,
    p: &FractionalOutcome,
    seed: Seed,
) -> Result<IntegralOutcome> {
    Ok(hard_cap_rounder(instance, p)?.sample(seed))
}

pub fn hard_cap_rounder<'a>(
    instance: &'a PbInstance,
    p: &FractionalOutcome,
) -> Result<DependentRounder<'a>> {
    let reduced = instance.budget() - instance.max_cost();
    DependentRounder::with_target(instance, p, &reduced)
}

/// Budget balanced up to one project.
pub fn is_bb1(instance: &PbInstance, outcome: &IntegralOutcome) -> bool {
    bb1_indicator(instance, &outcome.indicator(instance.num_projects()))
}

/// Budget feasible up to any project.
pub fn is_bfx(instance: &PbInstance, outcome: &IntegralOutcome) -> bool {
    bfx_indicator(instance, &outcome.indicator(instance.num_projects()))
}

pub(crate) fn bb1_indicator(instance: &PbInstance, selected: &[bool]) -> bool {
    let budget = instance.budget();
    let cost: Rational = instance
        .costs()
        .iter()
        .zip(selected)
        .filter(|(_, s)| **s)
        .map(|(c, _)| c)
        .sum();
    let under = cost <= *budget && {
        let gap = budget - &cost;
        instance
            .costs()
            .iter()
            .zip(selected)
            .any(|(c, s)| !*s && *c >= gap)
    };
    under
        || (cost >= *budget && {
            let excess = &cost - budget;
            instance
                .costs()
                .iter()
                .zip(selected)
                .any(|(c, s)| *s && *c >= excess)
        })
}

pub(crate) fn bfx_indicator(instance: &PbInstance, selected: &[bool]) -> bool {
    let cost: Rational = instance
        .costs()
        .iter()
        .zip(selected)
        .filter(|(_, s)| **s)
        .map(|(c, _)| c)
        .sum();
    let excess = &cost - instance.budget();
    instance
        .costs()
        .iter()
        .zip(selected)
        .all(|(c, s)| !*s || *c >= excess)
}
