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

//! Exact phase-one revised simplex over implicitly generated columns.
//!
//! Column `t` is `base + Σ_{c ∈ masks[t]} per_project[c]`; every inequality
//! row also gets a slack column. Entering and leaving variables follow
//! Bland's rule, so the method terminates without tolerances.

use super::Relation;
use crate::model::{mask_members, Rational};

pub(crate) struct ImplicitSystem<'a> {
    pub base: Vec<Rational>,
    /// `per_project[c][row]`.
    pub per_project: Vec<Vec<Rational>>,
    pub masks: &'a [u64],
    pub relations: Vec<Relation>,
    pub rhs: Vec<Rational>,
}

pub(crate) enum PhaseOne {
    /// Positive weights on outcome columns, by column index.
    Feasible {
        weights: Vec<(usize, Rational)>,
        pivots: usize,
    },
    /// `y` with `y·a ≤ 0` for every column and `y·b > 0`.
    Infeasible {
        farkas: Vec<Rational>,
        residual: Rational,
        pivots: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Var {
    Outcome(usize),
    Slack(usize),
    Artificial(usize),
}

impl Var {
    /// Bland order: outcomes, then slacks, then artificials.
    fn key(self, outcomes: usize, rows: usize) -> usize {
        match self {
            Var::Outcome(t) => t,
            Var::Slack(r) => outcomes + r,
            Var::Artificial(r) => outcomes + rows + r,
        }
    }
}

impl ImplicitSystem<'_> {
    fn rows(&self) -> usize {
        self.rhs.len()
    }

    fn slack_sign(&self, row: usize) -> Option<i64> {
        match self.relations[row] {
            Relation::Le => Some(1),
            Relation::Ge => Some(-1),
            Relation::Eq => None,
        }
    }

    fn column(&self, var: Var) -> Vec<Rational> {
        let k = self.rows();
        match var {
            Var::Outcome(t) => {
                let mut col = self.base.clone();
                for c in mask_members(self.masks[t]) {
                    for (r, x) in col.iter_mut().enumerate() {
                        *x += &self.per_project[c][r];
                    }
                }
                col
            }
            Var::Slack(row) => {
                let mut col = vec![Rational::zero(); k];
                col[row] =
                    Rational::from_integer(self.slack_sign(row).expect("slack on inequality row"));
                col
            }
            Var::Artificial(row) => {
                let mut col = vec![Rational::zero(); k];
                col[row] = Rational::one();
                col
            }
        }
    }

    /// Flips rows so that every right-hand side is non-negative; returns
    /// which rows were flipped.
    fn normalize(&mut self) -> Vec<bool> {
        let flipped: Vec<bool> = self.rhs.iter().map(Rational::is_negative).collect();
        for r in 0..self.rows() {
            if flipped[r] {
                self.rhs[r] = -&self.rhs[r];
                self.base[r] = -&self.base[r];
                for per in &mut self.per_project {
                    per[r] = -&per[r];
                }
                self.relations[r] = self.relations[r].flipped();
            }
        }
        flipped
    }

    pub fn solve(mut self) -> PhaseOne {
        let flipped = self.normalize();
        let k = self.rows();
        let outcomes = self.masks.len();
        let mut basis: Vec<Var> = (0..k).map(Var::Artificial).collect();
        let mut inverse: Vec<Vec<Rational>> = (0..k)
            .map(|r| {
                (0..k)
                    .map(|c| {
                        if r == c {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut values = self.rhs.clone();
        let mut pivots = 0;

        loop {
            // phase-one duals: cost 1 on artificials
            let mut duals = vec![Rational::zero(); k];
            for (r, var) in basis.iter().enumerate() {
                if matches!(var, Var::Artificial(_)) {
                    for (d, x) in duals.iter_mut().zip(&inverse[r]) {
                        *d += x;
                    }
                }
            }
            let Some(entering) = self.price(&duals, &basis) else {
                let residual: Rational = basis
                    .iter()
                    .zip(&values)
                    .filter(|(v, _)| matches!(v, Var::Artificial(_)))
                    .map(|(_, x)| x)
                    .sum();
                if residual.is_zero() {
                    let mut weights: Vec<(usize, Rational)> = basis
                        .iter()
                        .zip(&values)
                        .filter_map(|(v, x)| match v {
                            Var::Outcome(t) if x.is_positive() => Some((*t, x.clone())),
                            _ => None,
                        })
                        .collect();
                    weights.sort_by_key(|&(t, _)| t);
                    return PhaseOne::Feasible { weights, pivots };
                }
                let farkas = duals
                    .into_iter()
                    .zip(&flipped)
                    .map(|(y, &f)| if f { -y } else { y })
                    .collect();
                return PhaseOne::Infeasible {
                    farkas,
                    residual,
                    pivots,
                };
            };

            let column = self.column(entering);
            let direction: Vec<Rational> = inverse
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&column)
                        .filter(|(_, a)| !a.is_zero())
                        .map(|(x, a)| x * a)
                        .sum()
                })
                .collect();
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..k {
                if !direction[r].is_positive() {
                    continue;
                }
                let ratio = &values[r] / &direction[r];
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio
                                && basis[r].key(outcomes, k) < basis[*best].key(outcomes, k))
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (row, step) = leave.expect("phase one is bounded below");

            let pivot = direction[row].clone();
            for x in inverse[row].iter_mut() {
                *x = &*x / &pivot;
            }
            values[row] = step.clone();
            let pivot_row = inverse[row].clone();
            for r in 0..k {
                if r == row || direction[r].is_zero() {
                    continue;
                }
                let factor = direction[r].clone();
                for (x, p) in inverse[r].iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &factor * p;
                    }
                }
                values[r] -= &factor * &step;
            }
            basis[row] = entering;
            pivots += 1;
        }
    }

    /// Lowest-index non-artificial column with positive `duals · a`.
    fn price(&self, duals: &[Rational], basis: &[Var]) -> Option<Var> {
        let dot = |v: &[Rational]| -> Rational {
            v.iter()
                .zip(duals)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, d)| a * d)
                .sum()
        };
        let base = dot(&self.base);
        let per: Vec<Rational> = self.per_project.iter().map(|v| dot(v)).collect();
        let is_basic = |var: Var| basis.contains(&var);

        match ScaledWeights::new(&base, &per) {
            Some(scaled) => {
                for (t, &mask) in self.masks.iter().enumerate() {
                    if scaled.positive(mask) && !is_basic(Var::Outcome(t)) {
                        return Some(Var::Outcome(t));
                    }
                }
            }
            None => {
                for (t, &mask) in self.masks.iter().enumerate() {
                    let value: Rational =
                        &base + &mask_members(mask).map(|c| &per[c]).sum::<Rational>();
                    if value.is_positive() && !is_basic(Var::Outcome(t)) {
                        return Some(Var::Outcome(t));
                    }
                }
            }
        }
        (0..self.rows())
            .filter_map(|r| self.slack_sign(r).map(|s| (r, s)))
            .find(|&(r, s)| {
                let value = if s > 0 { duals[r].clone() } else { -&duals[r] };
                value.is_positive() && !is_basic(Var::Slack(r))
            })
            .map(|(r, _)| Var::Slack(r))
    }
}

/// Pricing weights over one common denominator, when they fit in `i128`.
struct ScaledWeights {
    base: i128,
    per: Vec<i128>,
}

impl ScaledWeights {
    /// Each scaled entry stays below `2^120`, so sums of up to 65 entries
    /// cannot overflow.
    fn new(base: &Rational, per: &[Rational]) -> Option<Self> {
        const BOUND: i128 = 1 << 120;
        let parts: Vec<(i128, i128)> = std::iter::once(base)
            .chain(per)
            .map(|x| x.as_small_parts())
            .collect::<Option<_>>()?;
        let mut lcm: i128 = 1;
        for &(_, d) in &parts {
            let g = num_integer::gcd(lcm, d);
            lcm = (lcm / g).checked_mul(d)?;
            if lcm >= BOUND {
                return None;
            }
        }
        let scale = |(n, d): (i128, i128)| -> Option<i128> {
            let v = n.checked_mul(lcm / d)?;
            (v.abs() < BOUND).then_some(v)
        };
        let base_scaled = scale(parts[0])?;
        let per_scaled = parts[1..]
            .iter()
            .map(|&p| scale(p))
            .collect::<Option<Vec<_>>>()?;
        if per_scaled.len() > 64 {
            return None;
        }
        Some(ScaledWeights {
            base: base_scaled,
            per: per_scaled,
        })
    }

    fn positive(&self, mask: u64) -> bool {
        let mut total = self.base;
        let mut rest = mask;
        while rest != 0 {
            total += self.per[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        total > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn system<'a>(
        masks: &'a [u64],
        per: Vec<Vec<&str>>,
        rhs: Vec<&str>,
        rel: Vec<Relation>,
    ) -> ImplicitSystem<'a> {
        let k = rhs.len();
        let mut base = vec![Rational::zero(); k];
        base[0] = Rational::one();
        ImplicitSystem {
            base,
            per_project: per
                .into_iter()
                .map(|v| v.into_iter().map(r).collect())
                .collect(),
            masks,
            relations: rel,
            rhs: rhs.into_iter().map(r).collect(),
        }
    }

    #[test]
    fn half_half_is_feasible() {
        // rows: total weight, marginal of project 0, marginal of project 1
        let masks = [0b01, 0b10];
        let sys = system(
            &masks,
            vec![vec!["0", "1", "0"], vec!["0", "0", "1"]],
            vec!["1", "1/2", "1/2"],
            vec![Relation::Eq; 3],
        );
        match sys.solve() {
            PhaseOne::Feasible { weights, .. } => {
                assert_eq!(weights, vec![(0, r("1/2")), (1, r("1/2"))]);
            }
            PhaseOne::Infeasible { .. } => panic!("expected feasible"),
        }
    }

    #[test]
    fn missing_outcome_is_infeasible_with_farkas_ray() {
        // only {0} and {0,1} available, but marginal of 0 must be 1/2
        let masks = [0b01, 0b11];
        let sys = system(
            &masks,
            vec![vec!["0", "1", "0"], vec!["0", "0", "1"]],
            vec!["1", "1/2", "1/2"],
            vec![Relation::Eq; 3],
        );
        match sys.solve() {
            PhaseOne::Infeasible {
                farkas, residual, ..
            } => {
                assert!(residual.is_positive());
                let b = [r("1"), r("1/2"), r("1/2")];
                let yb: Rational = farkas.iter().zip(&b).map(|(y, b)| y * b).sum();
                assert!(yb.is_positive());
                for col in [[r("1"), r("1"), r("0")], [r("1"), r("1"), r("1")]] {
                    let ya: Rational = farkas.iter().zip(&col).map(|(y, a)| y * a).sum();
                    assert!(!ya.is_positive());
                }
            }
            PhaseOne::Feasible { .. } => panic!("expected infeasible"),
        }
    }

    #[test]
    fn inequality_rows_use_slacks() {
        // one outcome {0}: weight 1, marginal of 0 at least 1/2 and at most 2
        let masks = [0b1];
        let sys = system(
            &masks,
            vec![vec!["0", "1", "1"]],
            vec!["1", "1/2", "2"],
            vec![Relation::Eq, Relation::Ge, Relation::Le],
        );
        assert!(matches!(sys.solve(), PhaseOne::Feasible { .. }));
        let sys = system(
            &masks,
            vec![vec!["0", "1"]],
            vec!["1", "-1"],
            vec![Relation::Eq, Relation::Le],
        );
        assert!(matches!(sys.solve(), PhaseOne::Infeasible { .. }));
    }
}
