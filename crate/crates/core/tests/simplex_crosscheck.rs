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

//! The exact simplex against brute force. Fixed-mode verdicts are compared
//! with a basis enumeration over the outcome columns; free-mode verdicts with
//! the cost range of the admissible outcomes.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pb_bobw::oracle::{
    certifies_infeasibility, enumerate_outcomes, lottery_feasible, FeasibilityMode,
    LinearConstraintSet, OutcomePredicate,
};
use pb_bobw::random::{random_instance, UtilityKind};
use pb_bobw::{FractionalOutcome, IntegralOutcome, Limits, PbInstance, Rational};

/// Unique solution of `columns · λ = rhs`, or `None` when the columns are
/// dependent or the system is inconsistent.
fn solve_basis(columns: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let k = columns.len();
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            columns
                .iter()
                .map(|col| col[r].clone())
                .chain([rhs[r].clone()])
                .collect()
        })
        .collect();
    for col in 0..k {
        let found = (col..rows).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, found);
        let lead = a[col][col].clone();
        let pivot: Vec<Rational> = a[col].iter().map(|x| x / &lead).collect();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &(&factor * y);
                }
            }
        }
        a[col] = pivot;
    }
    if a[k..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(a[..k].iter().map(|row| row[k].clone()).collect())
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if n < size {
        return vec![];
    }
    let mut out = subsets(n - 1, size);
    for mut s in subsets(n - 1, size - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Carathéodory: a nonnegative solution exists iff one exists on a linearly
/// independent set of columns.
fn brute_implementable(outcomes: &[IntegralOutcome], p: &FractionalOutcome) -> bool {
    let m = p.len();
    let columns: Vec<Vec<Rational>> = outcomes
        .iter()
        .map(|w| {
            std::iter::once(Rational::one())
                .chain((0..m).map(|c| {
                    if w.contains(c) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }))
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = std::iter::once(Rational::one())
        .chain(p.values().iter().cloned())
        .collect();
    (1..=(m + 1).min(columns.len())).any(|size| {
        subsets(columns.len(), size).into_iter().any(|s| {
            let chosen: Vec<Vec<Rational>> = s.iter().map(|&t| columns[t].clone()).collect();
            solve_basis(&chosen, &rhs).is_some_and(|l| l.iter().all(|x| !x.is_negative()))
        })
    })
}

fn predicates() -> Vec<OutcomePredicate> {
    vec![
        OutcomePredicate::All,
        OutcomePredicate::WithinBudget,
        OutcomePredicate::Bb1,
        OutcomePredicate::Bfx,
    ]
}

fn quarter_grid(rng: &mut impl Rng, m: usize) -> FractionalOutcome {
    FractionalOutcome::new(
        (0..m)
            .map(|_| Rational::new(rng.random_range(0..=4), 4))
            .collect(),
    )
    .unwrap()
}

fn small_instance(seed: u64) -> (PbInstance, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_instance(&mut rng, 1..=3, 1..=4, UtilityKind::General);
    (inst, rng)
}

#[test]
fn basis_solver_sanity() {
    let one = Rational::one;
    let zero = Rational::zero;
    let cols = vec![vec![one(), one()], vec![one(), zero()]];
    assert_eq!(
        solve_basis(&cols, &[one(), Rational::new(1, 3)]),
        Some(vec![Rational::new(1, 3), Rational::new(2, 3)])
    );
    let dependent = vec![vec![one(), one()], vec![one(), one()]];
    assert_eq!(solve_basis(&dependent, &[one(), one()]), None);
    assert_eq!(subsets(4, 2).len(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fixed_mode_matches_basis_enumeration(seed in any::<u64>()) {
        let (inst, mut rng) = small_instance(seed);
        let limits = Limits::default();
        let extra = LinearConstraintSet::empty();
        for _ in 0..3 {
            let p = quarter_grid(&mut rng, inst.num_projects());
            for predicate in predicates() {
                let outcomes = enumerate_outcomes(&inst, &predicate, &limits).unwrap();
                let expected = brute_implementable(&outcomes, &p);
                let mode = FeasibilityMode::Fixed(p.clone());
                let verdict = lottery_feasible(&inst, &mode, &predicate, &extra, &limits).unwrap();
                prop_assert_eq!(verdict.feasible, expected, "predicate {:?} p {:?}", predicate, p.values());
                if let Some(farkas) = &verdict.farkas {
                    prop_assert!(certifies_infeasibility(&inst, &mode, &predicate, &extra, &limits, farkas).unwrap());
                }
            }
        }
    }

    #[test]
    fn free_mode_matches_cost_range(seed in any::<u64>()) {
        let (inst, _) = small_instance(seed);
        let limits = Limits::default();
        let extra = LinearConstraintSet::empty();
        for predicate in predicates() {
            let costs: Vec<Rational> = enumerate_outcomes(&inst, &predicate, &limits)
                .unwrap()
                .iter()
                .map(|w| inst.cost_of_set(w.members().iter().copied()))
                .collect();
            let b = inst.budget();
            let expected = costs.iter().any(|c| c <= b) && costs.iter().any(|c| c >= b);
            let verdict = lottery_feasible(&inst, &FeasibilityMode::Free, &predicate, &extra, &limits).unwrap();
            prop_assert_eq!(verdict.feasible, expected, "predicate {:?}", predicate);
        }
    }
}
