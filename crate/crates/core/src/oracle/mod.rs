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

//! Ground truth by exhaustion: outcome enumeration and exact lottery
//! feasibility, plus the instance families where guarantees collide.

mod families;
mod simplex;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;
use std::str::FromStr;

pub use families::{gen_bfx_family, gen_gfs_jr_family, gen_ifs_jr_family};

use crate::error::{Error, Result};
use crate::exante::full_budget_optima;
use crate::expost::{check_jr_general, ejr_binary_unchecked, ejrx_unchecked, fjr_binary_unchecked};
use crate::limits::Limits;
use crate::model::{
    mask_members, FractionalOutcome, IntegralOutcome, Lottery, PbInstance, Rational,
};
use crate::rounding::{bb1_indicator, bfx_indicator};
use simplex::{ImplicitSystem, PhaseOne};

/// Which integral outcomes a lottery may use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomePredicate {
    All,
    WithinBudget,
    Bb1,
    Bfx,
    JrBinary,
    JrGeneral,
    EjrBinary,
    FjrBinary,
    EjrxCost,
    Conjunction(Vec<OutcomePredicate>),
}

impl OutcomePredicate {
    const NAMES: [(&'static str, OutcomePredicate); 9] = [
        ("all", OutcomePredicate::All),
        ("within-budget", OutcomePredicate::WithinBudget),
        ("bb1", OutcomePredicate::Bb1),
        ("bfx", OutcomePredicate::Bfx),
        ("jr-binary", OutcomePredicate::JrBinary),
        ("jr-general", OutcomePredicate::JrGeneral),
        ("ejr-binary", OutcomePredicate::EjrBinary),
        ("fjr-binary", OutcomePredicate::FjrBinary),
        ("ejrx-cost", OutcomePredicate::EjrxCost),
    ];

    /// Errors if the instance is outside the predicate's setting.
    pub fn check_setting(&self, instance: &PbInstance) -> Result<()> {
        match self {
            OutcomePredicate::JrBinary
            | OutcomePredicate::EjrBinary
            | OutcomePredicate::FjrBinary => instance.require_binary(),
            OutcomePredicate::EjrxCost => instance.require_cost_utilities(),
            OutcomePredicate::Conjunction(parts) => {
                parts.iter().try_for_each(|p| p.check_setting(instance))
            }
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, instance: &PbInstance, outcome: &IntegralOutcome) -> bool {
        Evaluator::new(instance, self).holds(outcome.to_mask())
    }
}

impl FromStr for OutcomePredicate {
    type Err = Error;

    /// A name, or comma-separated names for their conjunction.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|name| {
                let name = name.trim();
                OutcomePredicate::NAMES
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, p)| p.clone())
                    .ok_or_else(|| {
                        Error::Precondition(format!("unknown outcome predicate {name:?}"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(match <[_; 1]>::try_from(parts) {
            Ok([single]) => single,
            Err(parts) => OutcomePredicate::Conjunction(parts),
        })
    }
}

impl fmt::Display for OutcomePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let OutcomePredicate::Conjunction(parts) = self {
            let names: Vec<String> = parts.iter().map(ToString::to_string).collect();
            return f.write_str(&names.join(","));
        }
        let name = OutcomePredicate::NAMES
            .iter()
            .find(|(_, p)| p == self)
            .map(|(n, _)| *n)
            .unwrap_or("?");
        f.write_str(name)
    }
}

/// Mask-level predicate evaluation with per-instance precomputation.
struct Evaluator<'a> {
    instance: &'a PbInstance,
    predicate: &'a OutcomePredicate,
    approvals: Vec<u64>,
    /// Smallest deprived-group size that makes `{j}` cohesive.
    jr_need: Vec<usize>,
}

impl<'a> Evaluator<'a> {
    fn new(instance: &'a PbInstance, predicate: &'a OutcomePredicate) -> Self {
        let n = instance.num_voters();
        let approvals = (0..n).map(|i| instance.approval_mask(i)).collect();
        let n_r = Rational::from(n);
        let jr_need = instance
            .costs()
            .iter()
            .map(|cost| {
                let need = &n_r * cost;
                (1..=n)
                    .find(|&k| Rational::from(k) * instance.budget() >= need)
                    .unwrap_or(usize::MAX)
            })
            .collect();
        Evaluator {
            instance,
            predicate,
            approvals,
            jr_need,
        }
    }

    fn holds(&self, mask: u64) -> bool {
        self.eval(self.predicate, mask)
    }

    fn eval(&self, predicate: &OutcomePredicate, mask: u64) -> bool {
        let m = self.instance.num_projects();
        let indicator = || (0..m).map(|c| mask >> c & 1 == 1).collect::<Vec<bool>>();
        match predicate {
            OutcomePredicate::All => true,
            OutcomePredicate::WithinBudget => {
                self.instance.cost_of_mask(mask) <= *self.instance.budget()
            }
            OutcomePredicate::Bb1 => bb1_indicator(self.instance, &indicator()),
            OutcomePredicate::Bfx => bfx_indicator(self.instance, &indicator()),
            OutcomePredicate::JrBinary => self.jr_binary(mask),
            OutcomePredicate::JrGeneral => {
                check_jr_general(self.instance, &IntegralOutcome::from_mask(mask)).holds
            }
            OutcomePredicate::EjrBinary => {
                ejr_binary_unchecked(self.instance, &IntegralOutcome::from_mask(mask)).holds
            }
            OutcomePredicate::FjrBinary => {
                fjr_binary_unchecked(self.instance, &IntegralOutcome::from_mask(mask)).holds
            }
            OutcomePredicate::EjrxCost => {
                ejrx_unchecked(self.instance, &IntegralOutcome::from_mask(mask)).holds
            }
            OutcomePredicate::Conjunction(parts) => parts.iter().all(|p| self.eval(p, mask)),
        }
    }

    fn jr_binary(&self, mask: u64) -> bool {
        (0..self.instance.num_projects()).all(|j| {
            let deprived = self
                .approvals
                .iter()
                .filter(|&&a| a & mask == 0 && a >> j & 1 == 1)
                .count();
            deprived < self.jr_need[j]
        })
    }
}

/// All outcomes satisfying the predicate, in lexicographic order of their
/// sorted member lists.
pub fn enumerate_outcomes(
    instance: &PbInstance,
    predicate: &OutcomePredicate,
    limits: &Limits,
) -> Result<Vec<IntegralOutcome>> {
    Ok(enumerate_masks(instance, predicate, limits)?
        .into_iter()
        .map(IntegralOutcome::from_mask)
        .collect())
}

fn enumerate_masks(
    instance: &PbInstance,
    predicate: &OutcomePredicate,
    limits: &Limits,
) -> Result<Vec<u64>> {
    let m = instance.num_projects();
    limits.check_projects(m)?;
    predicate.check_setting(instance)?;
    let evaluator = Evaluator::new(instance, predicate);
    let mut out = Vec::new();
    // depth-first over increasing member lists yields lexicographic order
    let mut stack: Vec<(u64, usize)> = vec![(0, 0)];
    while let Some((mask, next)) = stack.pop() {
        if evaluator.holds(mask) {
            out.push(mask);
        }
        for c in (next..m).rev() {
            stack.push((mask | 1 << c, c + 1));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=", alias = "le")]
    Le,
    #[serde(rename = "=", alias = "eq")]
    Eq,
    #[serde(rename = ">=", alias = "ge")]
    Ge,
}

impl Relation {
    pub fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// `coefficients · p  relation  bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearRow {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub bound: Rational,
}

impl LinearRow {
    pub fn lhs(&self, p: &FractionalOutcome) -> Rational {
        self.coefficients
            .iter()
            .zip(p.values())
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, x)| a * x)
            .sum()
    }

    pub fn holds(&self, p: &FractionalOutcome) -> bool {
        self.relation.holds(&self.lhs(p), &self.bound)
    }
}

/// Linear constraints on a fractional outcome over `m` projects.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LinearConstraintSet {
    rows: Vec<LinearRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDocument {
    coefficients: Value,
    relation: Relation,
    bound: Rational,
}

impl LinearConstraintSet {
    /// Every row must have exactly `m` coefficients.
    pub fn new(m: usize, rows: Vec<LinearRow>) -> Result<Self> {
        if let Some(r) = rows.iter().position(|row| row.coefficients.len() != m) {
            return Err(Error::Malformed(format!(
                "constraint row {r} has {} coefficients, expected {m}",
                rows[r].coefficients.len()
            )));
        }
        Ok(LinearConstraintSet { rows })
    }

    pub fn empty() -> Self {
        LinearConstraintSet::default()
    }

    pub fn rows(&self) -> &[LinearRow] {
        &self.rows
    }

    pub fn is_satisfied(&self, p: &FractionalOutcome) -> bool {
        self.rows.iter().all(|row| row.holds(p))
    }

    /// Parses `{"rows": [...]}` or a bare array of rows; coefficients are an
    /// array in project order or a map from project id (missing ids are 0).
    pub fn parse(instance: &PbInstance, document: &[u8]) -> Result<Self> {
        let value: Value =
            serde_json::from_slice(document).map_err(|e| Error::Malformed(e.to_string()))?;
        let rows = match value {
            Value::Object(mut map) if map.contains_key("rows") => {
                map.remove("rows").unwrap_or(Value::Null)
            }
            other => other,
        };
        let rows: Vec<RowDocument> =
            serde_json::from_value(rows).map_err(|e| Error::Malformed(e.to_string()))?;
        let m = instance.num_projects();
        let parsed = rows
            .into_iter()
            .enumerate()
            .map(|(r, row)| {
                let coefficients = match row.coefficients {
                    Value::Array(items) => items
                        .into_iter()
                        .map(|v| {
                            serde_json::from_value::<Rational>(v)
                                .map_err(|e| Error::Malformed(e.to_string()))
                        })
                        .collect::<Result<Vec<_>>>()?,
                    Value::Object(map) => {
                        let mut coefficients = vec![Rational::zero(); m];
                        for (id, v) in map {
                            let c = instance.project_index(&id).ok_or_else(|| {
                                Error::Malformed(format!(
                                    "constraint row {r} names unknown project {id:?}"
                                ))
                            })?;
                            coefficients[c] = serde_json::from_value(v)
                                .map_err(|e| Error::Malformed(e.to_string()))?;
                        }
                        coefficients
                    }
                    _ => {
                        return Err(Error::Malformed(format!(
                            "constraint row {r} coefficients must be array or map"
                        )))
                    }
                };
                Ok(LinearRow {
                    coefficients,
                    relation: row.relation,
                    bound: row.bound,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LinearConstraintSet::new(m, parsed)
    }
}

/// One row per voter: `u_i · p ≥ opt_i / n`.
pub fn ifs_rows(instance: &PbInstance) -> LinearConstraintSet {
    let n = Rational::from(instance.num_voters());
    let rows = full_budget_optima(instance)
        .into_iter()
        .enumerate()
        .map(|(i, opt)| LinearRow {
            coefficients: instance.utility_row(i).to_vec(),
            relation: Relation::Ge,
            bound: opt / &n,
        })
        .collect();
    LinearConstraintSet { rows }
}

/// One row per non-empty voter group `S`:
/// `Σ_c p_c max_{i ∈ S} u_ic ≥ Σ_{i ∈ S} opt_i / n`.
pub fn gfs_rows(instance: &PbInstance, limits: &Limits) -> Result<LinearConstraintSet> {
    let n = instance.num_voters();
    limits.check_voters(n)?;
    let n_r = Rational::from(n);
    let entitlement: Vec<Rational> = full_budget_optima(instance)
        .iter()
        .map(|o| o / &n_r)
        .collect();
    let rows = (1u64..1 << n)
        .map(|group| {
            let members: Vec<usize> = mask_members(group).collect();
            let coefficients = (0..instance.num_projects())
                .map(|c| {
                    members
                        .iter()
                        .map(|&i| instance.utility_of(i, c))
                        .max()
                        .cloned()
                        .unwrap_or_default()
                })
                .collect();
            let bound = members.iter().map(|&i| &entitlement[i]).sum();
            LinearRow {
                coefficients,
                relation: Relation::Ge,
                bound,
            }
        })
        .collect();
    Ok(LinearConstraintSet { rows })
}

/// Fixed-p asks whether the given outcome is implementable; free-p asks
/// whether some budget-spending outcome satisfying the extra rows is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityMode {
    Fixed(FractionalOutcome),
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    /// A lottery over predicate outcomes implementing `p`, when feasible.
    pub certificate: Option<Lottery>,
    /// The implemented fractional outcome, when feasible.
    pub p: Option<FractionalOutcome>,
    /// Row multipliers proving infeasibility of the linear system, when the
    /// solver ran and found none.
    pub farkas: Option<Vec<Rational>>,
    pub note: String,
    pub outcomes: usize,
    pub pivots: usize,
}

fn build_system<'a>(
    instance: &PbInstance,
    mode: &FeasibilityMode,
    extra: &LinearConstraintSet,
    masks: &'a [u64],
) -> ImplicitSystem<'a> {
    let m = instance.num_projects();
    match mode {
        FeasibilityMode::Fixed(p) => {
            let k = m + 1;
            let mut base = vec![Rational::zero(); k];
            base[0] = Rational::one();
            let per_project = (0..m)
                .map(|c| {
                    (0..k)
                        .map(|r| {
                            if r == c + 1 {
                                Rational::one()
                            } else {
                                Rational::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            let rhs = std::iter::once(Rational::one())
                .chain(p.values().iter().cloned())
                .collect();
            ImplicitSystem {
                base,
                per_project,
                masks,
                relations: vec![Relation::Eq; k],
                rhs,
            }
        }
        FeasibilityMode::Free => {
            let k = 2 + extra.rows.len();
            let mut base = vec![Rational::zero(); k];
            base[0] = Rational::one();
            let per_project = (0..m)
                .map(|c| {
                    let mut col = vec![Rational::zero(), instance.cost(c).clone()];
                    col.extend(extra.rows.iter().map(|row| row.coefficients[c].clone()));
                    col
                })
                .collect();
            let mut relations = vec![Relation::Eq, Relation::Eq];
            relations.extend(extra.rows.iter().map(|row| row.relation));
            let mut rhs = vec![Rational::one(), instance.budget().clone()];
            rhs.extend(extra.rows.iter().map(|row| row.bound.clone()));
            ImplicitSystem {
                base,
                per_project,
                masks,
                relations,
                rhs,
            }
        }
    }
}

/// Decides whether a lottery over predicate-satisfying outcomes implements
/// the fixed `p`, or, in free mode, some budget-spending `p` meeting `extra`.
///
/// Every feasible verdict is re-checked: the certificate implements `p`, its
/// outcomes satisfy the predicate, and `p` meets `extra`.
pub fn lottery_feasible(
    instance: &PbInstance,
    mode: &FeasibilityMode,
    predicate: &OutcomePredicate,
    extra: &LinearConstraintSet,
    limits: &Limits,
) -> Result<FeasibilityVerdict> {
    let m = instance.num_projects();
    if let Some(r) = extra
        .rows
        .iter()
        .position(|row| row.coefficients.len() != m)
    {
        return Err(Error::Malformed(format!(
            "constraint row {r} does not have {m} coefficients"
        )));
    }
    let mut masks = enumerate_masks(instance, predicate, limits)?;
    if let FeasibilityMode::Fixed(p) = mode {
        if p.len() != m {
            return Err(Error::Precondition(format!(
                "fractional outcome has {} entries, expected {m}",
                p.len()
            )));
        }
        if let Some(r) = extra.rows.iter().position(|row| !row.holds(p)) {
            return Ok(FeasibilityVerdict {
                feasible: false,
                certificate: None,
                p: None,
                farkas: None,
                note: format!("p violates extra constraint row {r}"),
                outcomes: masks.len(),
                pivots: 0,
            });
        }
        // outcomes with a project at p = 0, or missing one at p = 1, get zero weight
        let zeros = (0..m)
            .filter(|&c| p.get(c).is_zero())
            .fold(0u64, |a, c| a | 1 << c);
        let ones = (0..m)
            .filter(|&c| p.get(c).is_one())
            .fold(0u64, |a, c| a | 1 << c);
        masks.retain(|&w| w & zeros == 0 && w & ones == ones);
    }
    let outcomes = masks.len();
    match build_system(instance, mode, extra, &masks).solve() {
        PhaseOne::Feasible { weights, pivots } => {
            let lottery = Lottery::new(
                weights
                    .into_iter()
                    .map(|(t, w)| (w, IntegralOutcome::from_mask(masks[t])))
                    .collect(),
            )?;
            let p = FractionalOutcome::new(lottery.marginals(m))?;
            let evaluator = Evaluator::new(instance, predicate);
            let sound = match mode {
                FeasibilityMode::Fixed(target) => lottery.implements(target),
                FeasibilityMode::Free => p.is_feasible(instance) && extra.is_satisfied(&p),
            } && lottery
                .support()
                .iter()
                .all(|(_, w)| evaluator.holds(w.to_mask()));
            if !sound {
                return Err(Error::InvariantBreach(
                    "solver certificate failed re-validation".into(),
                ));
            }
            Ok(FeasibilityVerdict {
                feasible: true,
                note: format!("lottery over {} outcomes", lottery.support().len()),
                certificate: Some(lottery),
                p: Some(p),
                farkas: None,
                outcomes,
                pivots,
            })
        }
        PhaseOne::Infeasible {
            farkas,
            residual,
            pivots,
        } => Ok(FeasibilityVerdict {
            feasible: false,
            certificate: None,
            p: None,
            farkas: Some(farkas),
            note: format!("phase-one minimum {residual} over {outcomes} outcomes"),
            outcomes,
            pivots,
        }),
    }
}

/// Independently checks a Farkas vector from an infeasible verdict: `y · a ≤ 0`
/// on every outcome column, sign-compatible on inequality rows, `y · b > 0`.
pub fn certifies_infeasibility(
    instance: &PbInstance,
    mode: &FeasibilityMode,
    predicate: &OutcomePredicate,
    extra: &LinearConstraintSet,
    limits: &Limits,
    farkas: &[Rational],
) -> Result<bool> {
    let mut masks = enumerate_masks(instance, predicate, limits)?;
    if let FeasibilityMode::Fixed(p) = mode {
        let m = instance.num_projects();
        let zeros = (0..m)
            .filter(|&c| p.get(c).is_zero())
            .fold(0u64, |a, c| a | 1 << c);
        let ones = (0..m)
            .filter(|&c| p.get(c).is_one())
            .fold(0u64, |a, c| a | 1 << c);
        masks.retain(|&w| w & zeros == 0 && w & ones == ones);
    }
    let system = build_system(instance, mode, extra, &masks);
    if farkas.len() != system.rhs.len() {
        return Ok(false);
    }
    let dot = |v: &[Rational]| -> Rational { v.iter().zip(farkas).map(|(a, y)| a * y).sum() };
    let base = dot(&system.base);
    let per: Vec<Rational> = system.per_project.iter().map(|v| dot(v)).collect();
    let columns_ok = masks
        .iter()
        .all(|&w| !(&base + &mask_members(w).map(|c| &per[c]).sum::<Rational>()).is_positive());
    let signs_ok = system
        .relations
        .iter()
        .zip(farkas)
        .all(|(rel, y)| match rel {
            Relation::Le => !y.is_positive(),
            Relation::Ge => !y.is_negative(),
            Relation::Eq => true,
        });
    Ok(columns_ok && signs_ok && dot(&system.rhs).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn two_unit() -> PbInstance {
        PbInstance::from_approvals(r("1"), vec![r("1"), r("1")], &[vec![0, 1]]).unwrap()
    }

    fn members(list: &[IntegralOutcome]) -> Vec<Vec<usize>> {
        list.iter().map(|w| w.members().to_vec()).collect()
    }

    #[test]
    fn within_budget_enumeration() {
        let out = enumerate_outcomes(
            &two_unit(),
            &OutcomePredicate::WithinBudget,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(members(&out), vec![vec![], vec![0], vec![1]]);
    }

    #[test]
    fn bb1_enumeration_brute_force() {
        let inst = two_unit();
        let out = enumerate_outcomes(&inst, &OutcomePredicate::Bb1, &Limits::default()).unwrap();
        assert_eq!(members(&out), vec![vec![], vec![0], vec![0, 1], vec![1]]);
    }

    #[test]
    fn lexicographic_order() {
        let inst = PbInstance::from_approvals(r("3"), vec![r("1"); 3], &[vec![0]]).unwrap();
        let out = enumerate_outcomes(&inst, &OutcomePredicate::All, &Limits::default()).unwrap();
        assert_eq!(
            members(&out),
            vec![
                vec![],
                vec![0],
                vec![0, 1],
                vec![0, 1, 2],
                vec![0, 2],
                vec![1],
                vec![1, 2],
                vec![2]
            ]
        );
    }

    #[test]
    fn predicate_names_round_trip() {
        for (name, _) in OutcomePredicate::NAMES {
            assert_eq!(name.parse::<OutcomePredicate>().unwrap().to_string(), name);
        }
        let conj: OutcomePredicate = "bb1, jr-binary".parse().unwrap();
        assert_eq!(
            conj,
            OutcomePredicate::Conjunction(vec![OutcomePredicate::Bb1, OutcomePredicate::JrBinary])
        );
        assert!("nope".parse::<OutcomePredicate>().is_err());
    }

    #[test]
    fn point_mass_certificate() {
        let inst = two_unit();
        let p = FractionalOutcome::new(vec![r("1"), r("0")]).unwrap();
        let verdict = lottery_feasible(
            &inst,
            &FeasibilityMode::Fixed(p.clone()),
            &OutcomePredicate::Bb1,
            &LinearConstraintSet::empty(),
            &Limits::default(),
        )
        .unwrap();
        assert!(verdict.feasible);
        assert_eq!(
            verdict.certificate.unwrap(),
            Lottery::point_mass(IntegralOutcome::new([0]))
        );
    }

    #[test]
    fn bfx_family_is_not_implementable() {
        let (inst, p) = gen_bfx_family(&r("1"), &r("1/10")).unwrap();
        let mode = FeasibilityMode::Fixed(p);
        let none = LinearConstraintSet::empty();
        let limits = Limits::default();
        let verdict =
            lottery_feasible(&inst, &mode, &OutcomePredicate::Bfx, &none, &limits).unwrap();
        assert!(!verdict.feasible);
        let farkas = verdict.farkas.unwrap();
        assert!(certifies_infeasibility(
            &inst,
            &mode,
            &OutcomePredicate::Bfx,
            &none,
            &limits,
            &farkas
        )
        .unwrap());
        let verdict =
            lottery_feasible(&inst, &mode, &OutcomePredicate::Bb1, &none, &limits).unwrap();
        assert!(verdict.feasible);
    }

    #[test]
    fn ifs_jr_family_is_jointly_infeasible() {
        let inst = gen_ifs_jr_family(4, &r("5")).unwrap();
        let rows = ifs_rows(&inst);
        assert!(rows.rows().iter().all(|row| row.bound == r("5/2")));
        let limits = Limits::default();
        let verdict = lottery_feasible(
            &inst,
            &FeasibilityMode::Free,
            &OutcomePredicate::JrGeneral,
            &rows,
            &limits,
        )
        .unwrap();
        assert!(!verdict.feasible);
        let farkas = verdict.farkas.unwrap();
        assert!(certifies_infeasibility(
            &inst,
            &FeasibilityMode::Free,
            &OutcomePredicate::JrGeneral,
            &rows,
            &limits,
            &farkas
        )
        .unwrap());
        // dropping the fair-share rows leaves a feasible system
        let verdict = lottery_feasible(
            &inst,
            &FeasibilityMode::Free,
            &OutcomePredicate::JrGeneral,
            &LinearConstraintSet::empty(),
            &limits,
        )
        .unwrap();
        assert!(verdict.feasible);
    }

    #[test]
    fn extra_rows_checked_in_fixed_mode() {
        let inst = two_unit();
        let p = FractionalOutcome::new(vec![r("1/2"), r("1/2")]).unwrap();
        let rows = LinearConstraintSet::new(
            2,
            vec![LinearRow {
                coefficients: vec![r("1"), r("0")],
                relation: Relation::Ge,
                bound: r("1"),
            }],
        )
        .unwrap();
        let verdict = lottery_feasible(
            &inst,
            &FeasibilityMode::Fixed(p),
            &OutcomePredicate::All,
            &rows,
            &Limits::default(),
        )
        .unwrap();
        assert!(!verdict.feasible);
        assert!(verdict.farkas.is_none());
    }

    #[test]
    fn constraint_documents() {
        let inst = two_unit();
        let doc = br#"{"rows": [{"coefficients": {"p01": "1/2"}, "relation": ">=", "bound": "1/4"},
                                  {"coefficients": ["1", "1"], "relation": "le", "bound": "1"}]}"#;
        let set = LinearConstraintSet::parse(&inst, doc).unwrap();
        assert_eq!(set.rows()[0].coefficients, vec![r("1/2"), r("0")]);
        assert_eq!(set.rows()[1].relation, Relation::Le);
        assert!(LinearConstraintSet::parse(
            &inst,
            br#"[{"coefficients": ["1"], "relation": "=", "bound": "1"}]"#
        )
        .is_err());
        assert!(LinearConstraintSet::parse(
            &inst,
            br#"[{"coefficients": {"zz": "1"}, "relation": "=", "bound": "1"}]"#
        )
        .is_err());
    }
}
