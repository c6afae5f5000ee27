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

use crate::exante::ratio_order;
use crate::model::{FractionalOutcome, PbInstance, Rational};

/// Averages every voter's greedy fractional optimum at budget `B`.
///
/// Each dictator funds the longest prefix of their ratio order that fits,
/// followed by zero-utility projects in index order, and spends the rest on
/// the first project that does not fit. Every dictator spends exactly `B`.
pub fn fractional_random_dictator(instance: &PbInstance) -> FractionalOutcome {
    let m = instance.num_projects();
    let mut total = vec![Rational::zero(); m];
    for voter in 0..instance.num_voters() {
        for (c, x) in dictator(instance, voter).into_iter().enumerate() {
            total[c] += &x;
        }
    }
    let n = Rational::from(instance.num_voters());
    let p = total.into_iter().map(|x| x / &n).collect();
    FractionalOutcome::new(p).expect("averages of unit-interval vectors stay in range")
}

fn dictator(instance: &PbInstance, voter: usize) -> Vec<Rational> {
    let mut order = ratio_order(instance, voter);
    order.extend((0..instance.num_projects()).filter(|&c| instance.utility_of(voter, c).is_zero()));
    let mut x = vec![Rational::zero(); instance.num_projects()];
    let mut left = instance.budget().clone();
    for c in order {
        if left.is_zero() {
            break;
        }
        if *instance.cost(c) <= left {
            x[c] = Rational::one();
            left -= instance.cost(c);
        } else {
            x[c] = &left / instance.cost(c);
            break;
        }
    }
    x
}
