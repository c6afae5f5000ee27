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

//! Instances on which fair-share and representation guarantees collide.

use crate::error::{Error, Result};
use crate::model::{FractionalOutcome, PbInstance, Rational};

fn voter_ids(n: usize) -> impl Iterator<Item = String> {
    (1..=n).map(|i| format!("v{i}"))
}

/// Three projects `a, b, c` with costs `ε, B/2 + ε, B/2 + ε`, one voter
/// approving all of them, and `p = (1, x, x)` with `x = (B - ε) / (B + 2ε)`.
///
/// Requires `0 < ε < B/4`: from `ε = B/4` on, `{a, b}` costs at least `B`
/// and `p` becomes implementable by budget-feasible-up-to-any outcomes.
pub fn gen_bfx_family(
    budget: &Rational,
    eps: &Rational,
) -> Result<(PbInstance, FractionalOutcome)> {
    let quarter = budget / &Rational::from_integer(4);
    if !budget.is_positive() || !eps.is_positive() || *eps >= quarter {
        return Err(Error::Precondition(format!(
            "need B > 0 and 0 < ε < B/4, got B = {budget}, ε = {eps}"
        )));
    }
    bfx_construction(budget, eps)
}

fn bfx_construction(budget: &Rational, eps: &Rational) -> Result<(PbInstance, FractionalOutcome)> {
    let half = budget / &Rational::from_integer(2);
    let big = &half + eps;
    let projects = vec![
        ("a".to_string(), eps.clone()),
        ("b".to_string(), big.clone()),
        ("c".to_string(), big),
    ];
    let instance = PbInstance::new(
        budget.clone(),
        projects,
        vec![("v1".into(), vec![Rational::one(); 3])],
    )?;
    let x = (budget - eps) / (budget + &(eps * &Rational::from_integer(2)));
    let p = FractionalOutcome::new(vec![Rational::one(), x.clone(), x])?;
    assert!(
        p.is_feasible(&instance),
        "family fractional outcome spends the budget"
    );
    Ok((instance, p))
}

/// `n` voters; voter `i` approves `g*` (cost `B/2`) and three personal
/// projects `a_i, b_i, c_i` (cost `B/2 - ε` each).
pub fn gen_gfs_jr_family(n: usize, budget: &Rational, eps: &Rational) -> Result<PbInstance> {
    if n < 6 {
        return Err(Error::Precondition(format!("need n >= 6, got {n}")));
    }
    let half = budget / &Rational::from_integer(2);
    let limit = &half - &(budget * &Rational::new(2, n as i64));
    if !budget.is_positive() || !eps.is_positive() || *eps >= limit {
        return Err(Error::Precondition(format!(
            "need 0 < ε < B/2 - 2B/n = {limit}, got ε = {eps}"
        )));
    }
    let personal = &half - eps;
    let mut projects = vec![("g*".to_string(), half)];
    for prefix in ["a", "b", "c"] {
        projects.extend((1..=n).map(|i| (format!("{prefix}{i}"), personal.clone())));
    }
    let ids: Vec<&String> = projects.iter().map(|(id, _)| id).collect();
    let voters = voter_ids(n)
        .enumerate()
        .map(|(i, v)| {
            let own = [
                format!("a{}", i + 1),
                format!("b{}", i + 1),
                format!("c{}", i + 1),
                "g*".to_string(),
            ];
            let row = ids
                .iter()
                .map(|&id| {
                    if own.contains(id) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            (v, row)
        })
        .collect();
    PbInstance::new(budget.clone(), projects, voters)
}

/// Unit costs, `B = 2`; every agent values `c` at 1 and their own two
/// projects `g{i}a, g{i}b` at `H`.
pub fn gen_ifs_jr_family(n: usize, h: &Rational) -> Result<PbInstance> {
    if n < 4 {
        return Err(Error::Precondition(format!("need n >= 4, got {n}")));
    }
    if *h <= Rational::from(n) {
        return Err(Error::Precondition(format!(
            "need H > n = {n}, got H = {h}"
        )));
    }
    let mut projects = vec![("c".to_string(), Rational::one())];
    for i in 1..=n {
        projects.push((format!("g{i}a"), Rational::one()));
        projects.push((format!("g{i}b"), Rational::one()));
    }
    let ids: Vec<&String> = projects.iter().map(|(id, _)| id).collect();
    let voters = voter_ids(n)
        .enumerate()
        .map(|(i, v)| {
            let own = [format!("g{}a", i + 1), format!("g{}b", i + 1)];
            let row = ids
                .iter()
                .map(|&id| match id.as_str() {
                    "c" => Rational::one(),
                    _ if own.contains(id) => h.clone(),
                    _ => Rational::zero(),
                })
                .collect();
            (v, row)
        })
        .collect();
    PbInstance::new(Rational::from_integer(2), projects, voters)
}
