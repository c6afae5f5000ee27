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

//! The `pb-bobw` command line: run rules, verify axioms, query the lottery
//! oracle and generate counterexample instances.
//!
//! Exit codes: 0 when everything holds or is feasible, 1 when an axiom fails
//! or the oracle answers infeasible, 2 on usage, parse, setting or scale
//! errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::exante::{
    check_gfs, check_ifs, check_strong_ifs, check_strong_ufs, check_ufs, ExAnteReport,
};
use crate::expost::{
    check_ejr_binary, check_ejrx_cost, check_fjr_binary, check_jr_binary, check_jr_general,
    ExPostReport,
};
use crate::limits::Limits;
use crate::model::{FractionalOutcome, IntegralOutcome, PbInstance, Rational};
use crate::oracle::{
    gen_bfx_family, gen_gfs_jr_family, gen_ifs_jr_family, gfs_rows, ifs_rows, lottery_feasible,
    FeasibilityMode, LinearConstraintSet, OutcomePredicate,
};
use crate::report::{
    exante_json, expost_json, fractional_json, fractional_outcome_json, outcome_json, project_ids,
    verdict_json, voter_ids, AxiomResult, RunReport,
};
use crate::rounding::{derive_seed, is_bb1, is_bfx, DependentRounder, Seed};
use crate::rules::{
    bw_gcr_fractional, bw_mes_fractional, fractional_random_dictator, gcr, mes, GcrTrace, MesResult,
};

#[derive(Debug, Parser)]
#[command(
    name = "pb-bobw",
    version,
    about = "Fair lotteries over participatory-budgeting outcomes"
)]
pub struct Cli {
    /// Caps for exhaustive checks: `<voters>,<projects>` or one value for both.
    /// Overrides PB_BOBW_LIMIT.
    #[arg(long, global = true, value_name = "LIMIT")]
    pub limit_exp: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a rule, sample outcomes and check the rule's guarantees.
    Run(RunArgs),
    /// Check axioms on a fractional or integral outcome.
    Verify(VerifyArgs),
    /// Decide whether a lottery over predicate outcomes exists.
    Oracle(OracleArgs),
    /// Write one of the counterexample instances.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleName {
    Frd,
    Gcr,
    Mes,
    BwGcr,
    BwMes,
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(
            self.to_possible_value()
                .expect("no skipped variants")
                .get_name(),
        )
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub rule: RuleName,
    #[arg(long, default_value = "0", value_parser = parse_count)]
    pub seed: u64,
    #[arg(long, default_value = "1", value_parser = parse_count)]
    pub samples: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// `{"fractional": {id: r, ...}}` or `{"outcome": [id, ...]}`.
    #[arg(long)]
    pub target: PathBuf,
    /// Comma-separated axiom names.
    #[arg(long, value_delimiter = ',', required = true)]
    pub axioms: Vec<AxiomName>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    /// Is the given fractional outcome a mixture of predicate outcomes?
    Implementable,
    /// Does some budget-spending mixture of predicate outcomes meet the rows?
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinRows {
    Ifs,
    Gfs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub mode: OracleMode,
    /// Outcome predicate name, or comma-separated names for a conjunction.
    #[arg(long, default_value = "all")]
    pub predicate: String,
    #[arg(long, conflicts_with = "builtin")]
    pub constraints: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<BuiltinRows>,
    /// Fractional outcome document; required in implementable mode.
    #[arg(long)]
    pub fractional: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Bfx,
    GfsJr,
    IfsJr,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long, value_parser = parse_count)]
    pub n: Option<u64>,
    #[arg(long = "B", visible_alias = "budget")]
    pub budget: Option<Rational>,
    #[arg(long)]
    pub eps: Option<Rational>,
    #[arg(long = "H")]
    pub h: Option<Rational>,
    /// Instance path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where the bfx family's fractional outcome goes.
    #[arg(long)]
    pub fractional_out: Option<PathBuf>,
}

/// Every axiom `verify` understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomName {
    Ifs,
    StrongIfs,
    Ufs,
    StrongUfs,
    Gfs,
    SpendsBudget,
    JrBinary,
    EjrBinary,
    FjrBinary,
    JrGeneral,
    EjrxCost,
    Bb1,
    Bfx,
    WithinBudget,
}

impl AxiomName {
    /// Canonical name first, then aliases.
    const NAMES: [(&'static str, AxiomName); 22] = [
        ("ifs", AxiomName::Ifs),
        ("strong-ifs", AxiomName::StrongIfs),
        ("sifs", AxiomName::StrongIfs),
        ("ufs", AxiomName::Ufs),
        ("strong-ufs", AxiomName::StrongUfs),
        ("sufs", AxiomName::StrongUfs),
        ("gfs", AxiomName::Gfs),
        ("spends-budget", AxiomName::SpendsBudget),
        ("jr-binary", AxiomName::JrBinary),
        ("jr", AxiomName::JrBinary),
        ("ejr-binary", AxiomName::EjrBinary),
        ("ejr", AxiomName::EjrBinary),
        ("fjr-binary", AxiomName::FjrBinary),
        ("fjr", AxiomName::FjrBinary),
        ("jr-general", AxiomName::JrGeneral),
        ("ejrx-cost", AxiomName::EjrxCost),
        ("ejrx", AxiomName::EjrxCost),
        ("ejr-x", AxiomName::EjrxCost),
        ("bb1", AxiomName::Bb1),
        ("bfx", AxiomName::Bfx),
        ("within-budget", AxiomName::WithinBudget),
        ("feasible", AxiomName::WithinBudget),
    ];

    pub fn is_exante(self) -> bool {
        matches!(
            self,
            AxiomName::Ifs
                | AxiomName::StrongIfs
                | AxiomName::Ufs
                | AxiomName::StrongUfs
                | AxiomName::Gfs
                | AxiomName::SpendsBudget
        )
    }
}

impl FromStr for AxiomName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let name = s.trim().to_ascii_lowercase();
        AxiomName::NAMES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, a)| *a)
            .ok_or_else(|| {
                let known: Vec<&str> = AxiomName::NAMES.iter().map(|(n, _)| *n).collect();
                format!("unknown axiom {s:?}; known: {}", known.join(", "))
            })
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = AxiomName::NAMES
            .iter()
            .find(|(_, a)| a == self)
            .map(|(n, _)| *n)
            .expect("every axiom is named");
        f.write_str(name)
    }
}

/// A non-negative integer given as a rational string.
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let value: Rational = s.parse().map_err(|e| format!("{e}"))?;
    value
        .to_u64()
        .ok_or_else(|| format!("{s:?} is not a non-negative integer"))
}

/// What a command reports back to `main`.
#[derive(Debug)]
pub struct Outcome {
    pub document: Value,
    pub out: Option<PathBuf>,
    /// False when an axiom failed or the oracle answered infeasible.
    pub success: bool,
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let limits = match &cli.limit_exp {
        Some(spec) => Limits::parse(spec)?,
        None => Limits::from_env()?,
    };
    match &cli.command {
        Command::Run(args) => cmd_run(args, &limits),
        Command::Verify(args) => cmd_verify(args, &limits),
        Command::Oracle(args) => cmd_oracle(args, &limits),
        Command::Gen(args) => cmd_gen(args),
    }
}

/// Writes `document` as pretty JSON to `out`, or stdout.
pub fn emit(document: &Value, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(document).expect("values serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_instance(path: &Path) -> Result<PbInstance> {
    PbInstance::parse(&std::fs::read(path)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetDocument {
    fractional: Option<BTreeMap<String, String>>,
    outcome: Option<Vec<String>>,
}

/// A verify target or oracle input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Fractional(FractionalOutcome),
    Integral(IntegralOutcome),
}

/// Parses a target document; projects missing from a fractional map are 0.
pub fn parse_target(instance: &PbInstance, document: &[u8]) -> Result<Target> {
    let doc: TargetDocument =
        serde_json::from_slice(document).map_err(|e| Error::Malformed(e.to_string()))?;
    let index = |id: &str, field: String| {
        instance.project_index(id).ok_or_else(|| Error::Validation {
            field,
            message: "unknown project id".into(),
        })
    };
    match (doc.fractional, doc.outcome) {
        (Some(map), None) => {
            let mut values = vec![Rational::zero(); instance.num_projects()];
            for (id, text) in &map {
                let c = index(id, format!("fractional.{id}"))?;
                values[c] = text.parse()?;
            }
            Ok(Target::Fractional(FractionalOutcome::new(values)?))
        }
        (None, Some(ids)) => {
            let members = ids
                .iter()
                .map(|id| index(id, format!("outcome.{id}")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Target::Integral(IntegralOutcome::new(members)))
        }
        _ => Err(Error::Malformed(
            "target needs exactly one of \"fractional\" and \"outcome\"".into(),
        )),
    }
}

fn exante_result(instance: &PbInstance, report: &ExAnteReport, target: &str) -> AxiomResult {
    AxiomResult {
        axiom: serde_json::to_value(report.axiom)
            .expect("axiom serializes")
            .as_str()
            .unwrap_or_default()
            .to_string(),
        target: target.into(),
        holds: report.holds,
        failures: None,
        detail: exante_json(instance, report),
    }
}

fn spends_budget_result(instance: &PbInstance, p: &FractionalOutcome) -> AxiomResult {
    AxiomResult {
        axiom: AxiomName::SpendsBudget.to_string(),
        target: "fractional".into(),
        holds: p.is_feasible(instance),
        failures: None,
        detail: json!({ "cost": p.cost(instance).to_string(), "budget": instance.budget().to_string() }),
    }
}

/// Checks an ex-ante axiom on `p`.
pub fn check_fractional(
    instance: &PbInstance,
    p: &FractionalOutcome,
    axiom: AxiomName,
    limits: &Limits,
) -> Result<AxiomResult> {
    let report = match axiom {
        AxiomName::Ifs => check_ifs(instance, p),
        AxiomName::StrongIfs => check_strong_ifs(instance, p),
        AxiomName::Ufs => check_ufs(instance, p),
        AxiomName::StrongUfs => check_strong_ufs(instance, p),
        AxiomName::Gfs => check_gfs(instance, p, limits)?,
        AxiomName::SpendsBudget => return Ok(spends_budget_result(instance, p)),
        other => {
            return Err(Error::Precondition(format!(
                "{other} applies to integral outcomes, not fractional ones"
            )))
        }
    };
    Ok(exante_result(instance, &report, "fractional"))
}

fn expost_report(
    instance: &PbInstance,
    w: &IntegralOutcome,
    axiom: AxiomName,
    limits: &Limits,
) -> Result<ExPostReport> {
    match axiom {
        AxiomName::JrBinary => check_jr_binary(instance, w),
        AxiomName::EjrBinary => check_ejr_binary(instance, w, limits),
        AxiomName::FjrBinary => check_fjr_binary(instance, w, limits),
        AxiomName::JrGeneral => Ok(check_jr_general(instance, w)),
        AxiomName::EjrxCost => check_ejrx_cost(instance, w, limits),
        other => Err(Error::Precondition(format!(
            "{other} is not a representation axiom"
        ))),
    }
}

/// Checks an ex-post axiom or budget predicate on `w`.
pub fn check_integral(
    instance: &PbInstance,
    w: &IntegralOutcome,
    axiom: AxiomName,
    limits: &Limits,
) -> Result<AxiomResult> {
    let budget_detail =
        || json!({ "cost": w.cost(instance).to_string(), "budget": instance.budget().to_string() });
    let (holds, detail) = match axiom {
        AxiomName::Bb1 => (is_bb1(instance, w), budget_detail()),
        AxiomName::Bfx => (is_bfx(instance, w), budget_detail()),
        AxiomName::WithinBudget => (w.cost(instance) <= *instance.budget(), budget_detail()),
        a if a.is_exante() => {
            return Err(Error::Precondition(format!(
                "{a} applies to fractional outcomes, not integral ones"
            )))
        }
        a => {
            let report = expost_report(instance, w, a, limits)?;
            (report.holds, expost_json(instance, &report))
        }
    };
    Ok(AxiomResult {
        axiom: axiom.to_string(),
        target: "outcome".into(),
        holds,
        failures: None,
        detail,
    })
}

/// Counts failures of each axiom over sampled outcomes; the detail keeps the
/// first failing sample.
fn check_samples(
    instance: &PbInstance,
    samples: &[IntegralOutcome],
    axioms: &[AxiomName],
    limits: &Limits,
) -> Result<Vec<AxiomResult>> {
    let mut results = Vec::with_capacity(axioms.len());
    for &axiom in axioms {
        let mut failures = 0;
        let mut first = Value::Null;
        for (k, w) in samples.iter().enumerate() {
            let result = check_integral(instance, w, axiom, limits)?;
            if !result.holds {
                if failures == 0 {
                    first = json!({ "sample": k, "outcome": outcome_json(instance, w), "detail": result.detail });
                }
                failures += 1;
            }
        }
        results.push(AxiomResult {
            axiom: axiom.to_string(),
            target: "samples".into(),
            holds: failures == 0,
            failures: Some(failures),
            detail: first,
        });
    }
    Ok(results)
}

fn gcr_trace_json(instance: &PbInstance, trace: &GcrTrace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "beta": s.beta,
                "projects": outcome_json(instance, &s.projects),
                "voters": voter_ids(instance, s.voters.iter().copied()),
            })
        })
        .collect();
    json!({ "steps": steps, "outcome": outcome_json(instance, &trace.outcome) })
}

fn mes_trace_json(instance: &PbInstance, result: &MesResult) -> Value {
    let steps: Vec<Value> = result
        .rho_log
        .iter()
        .map(|s| json!({ "project": instance.project_ids()[s.project], "rho": s.rho.to_string() }))
        .collect();
    let remaining: Map<String, Value> = instance
        .voter_ids()
        .iter()
        .zip(&result.payments.remaining)
        .map(|(id, b)| (id.clone(), Value::String(b.to_string())))
        .collect();
    json!({ "steps": steps, "outcome": outcome_json(instance, &result.outcome), "remaining": remaining })
}

fn voter_map(instance: &PbInstance, values: &[Rational]) -> Value {
    Value::Object(
        instance
            .voter_ids()
            .iter()
            .zip(values)
            .map(|(id, x)| (id.clone(), Value::String(x.to_string())))
            .collect(),
    )
}

/// Samples `count` outcomes from seeds derived from `seed`.
fn draw(
    instance: &PbInstance,
    p: &FractionalOutcome,
    seed: u64,
    count: u64,
) -> Result<Vec<IntegralOutcome>> {
    let rounder = DependentRounder::new(instance, p)?;
    Ok((0..count)
        .map(|k| rounder.sample(derive_seed(Seed(seed), k)))
        .collect())
}

fn empirical_marginals(instance: &PbInstance, samples: &[IntegralOutcome]) -> Value {
    let mut hits = vec![0usize; instance.num_projects()];
    for w in samples {
        for c in w.iter() {
            hits[c] += 1;
        }
    }
    let k = samples.len().max(1);
    let values: Vec<Rational> = hits
        .into_iter()
        .map(|h| Rational::from(h) / Rational::from(k))
        .collect();
    fractional_json(instance, &values)
}

fn cmd_run(args: &RunArgs, limits: &Limits) -> Result<Outcome> {
    let instance = read_instance(&args.instance)?;
    let start = Instant::now();
    let mut report = RunReport::new("run", &instance);
    report.rule = Some(args.rule.to_string());
    let mut deterministic: Option<IntegralOutcome> = None;
    let mut fractional: Option<FractionalOutcome> = None;
    let mut fractional_axioms: Vec<AxiomName> = Vec::new();
    let mut sample_axioms: Vec<AxiomName> = vec![AxiomName::Bb1];
    match args.rule {
        RuleName::Frd => {
            fractional = Some(fractional_random_dictator(&instance));
            fractional_axioms.push(AxiomName::Gfs);
        }
        RuleName::Gcr => {
            let trace = gcr(&instance, limits)?;
            report.trace = Some(gcr_trace_json(&instance, &trace));
            deterministic = Some(trace.outcome);
        }
        RuleName::Mes => {
            let result = mes(&instance);
            report.trace = Some(mes_trace_json(&instance, &result));
            deterministic = Some(result.outcome);
        }
        RuleName::BwGcr => {
            let core = bw_gcr_fractional(&instance, limits)?;
            let claims: Vec<Value> = core
                .cost_comparisons(&instance)
                .iter()
                .map(|c| {
                    json!({
                        "step": c.step,
                        "cell": voter_ids(&instance, core.ladders[c.cell].voters.iter().copied()),
                        "step_cost": c.step_cost.to_string(),
                        "ladder_cost": c.ladder_cost.to_string(),
                        "holds": c.holds(),
                    })
                })
                .collect();
            report.trace = Some(json!({
                "gcr": gcr_trace_json(&instance, &core.trace),
                "budgets": voter_map(&instance, &core.budgets),
                "cost_comparisons": claims,
            }));
            fractional_axioms.push(AxiomName::StrongUfs);
            sample_axioms.push(AxiomName::FjrBinary);
            fractional = Some(core.p);
        }
        RuleName::BwMes => {
            let core = bw_mes_fractional(&instance)?;
            let mut trace = json!({ "mes": mes_trace_json(&instance, &core.mes) });
            if instance.is_binary() {
                let comparisons: Vec<Value> = core
                    .payment_comparisons(&instance)
                    .iter()
                    .map(|c| {
                        json!({
                            "cell": voter_ids(&instance, core.ladders[c.cell].voters.iter().copied()),
                            "group_payment": c.group_payment.to_string(),
                            "ladder_cost": c.ladder_cost.to_string(),
                            "holds": c.holds(),
                        })
                    })
                    .collect();
                trace["payment_comparisons"] = Value::Array(comparisons);
            } else {
                let bounds: Vec<Value> = core
                    .approved_spend_bounds(&instance)
                    .iter()
                    .enumerate()
                    .map(|(i, (spent, bound))| {
                        json!({
                            "voter": instance.voter_ids()[i],
                            "spent": spent.to_string(),
                            "bound": bound.to_string(),
                            "holds": spent >= bound,
                        })
                    })
                    .collect();
                trace["spend_bounds"] = Value::Array(bounds);
            }
            report.trace = Some(trace);
            fractional_axioms.push(AxiomName::StrongUfs);
            if instance.is_binary() {
                sample_axioms.push(AxiomName::EjrBinary);
            } else {
                fractional_axioms.push(AxiomName::Gfs);
                sample_axioms.push(AxiomName::EjrxCost);
            }
            fractional = Some(core.p);
        }
    }

    if let Some(w) = deterministic {
        if instance.is_binary() {
            let axiom = if args.rule == RuleName::Gcr {
                AxiomName::FjrBinary
            } else {
                AxiomName::EjrBinary
            };
            report
                .axioms
                .push(check_integral(&instance, &w, axiom, limits)?);
        } else if instance.is_cost_utilities() {
            report
                .axioms
                .push(check_integral(&instance, &w, AxiomName::EjrxCost, limits)?);
        }
        report.axioms.push(check_integral(
            &instance,
            &w,
            AxiomName::WithinBudget,
            limits,
        )?);
        report.outcomes.push(outcome_json(&instance, &w));
    }
    if let Some(p) = fractional {
        report.seed = Some(args.seed);
        report.samples = Some(args.samples as usize);
        report.spends_budget = Some(p.is_feasible(&instance));
        report.fractional = Some(fractional_outcome_json(&instance, &p));
        for &axiom in &fractional_axioms {
            report
                .axioms
                .push(check_fractional(&instance, &p, axiom, limits)?);
        }
        let samples = draw(&instance, &p, args.seed, args.samples)?;
        report
            .axioms
            .extend(check_samples(&instance, &samples, &sample_axioms, limits)?);
        if samples.len() > 1 {
            report.empirical_marginals = Some(empirical_marginals(&instance, &samples));
        }
        report
            .outcomes
            .extend(samples.iter().map(|w| outcome_json(&instance, w)));
    }
    report.timing_ms = start.elapsed().as_secs_f64() * 1000.0;
    let success = report.all_hold() && report.spends_budget != Some(false);
    Ok(Outcome {
        document: report.to_json(),
        out: args.out.clone(),
        success,
    })
}

fn cmd_verify(args: &VerifyArgs, limits: &Limits) -> Result<Outcome> {
    let instance = read_instance(&args.instance)?;
    let target = parse_target(&instance, &std::fs::read(&args.target)?)?;
    let start = Instant::now();
    let mut report = RunReport::new("verify", &instance);
    for &axiom in &args.axioms {
        let result = match &target {
            Target::Fractional(p) => check_fractional(&instance, p, axiom, limits)?,
            Target::Integral(w) => check_integral(&instance, w, axiom, limits)?,
        };
        report.axioms.push(result);
    }
    match &target {
        Target::Fractional(p) => {
            report.fractional = Some(fractional_outcome_json(&instance, p));
            report.spends_budget = Some(p.is_feasible(&instance));
        }
        Target::Integral(w) => report.outcomes.push(outcome_json(&instance, w)),
    }
    report.timing_ms = start.elapsed().as_secs_f64() * 1000.0;
    let success = report.all_hold();
    Ok(Outcome {
        document: report.to_json(),
        out: args.out.clone(),
        success,
    })
}

fn cmd_oracle(args: &OracleArgs, limits: &Limits) -> Result<Outcome> {
    let instance = read_instance(&args.instance)?;
    let predicate: OutcomePredicate = args.predicate.parse()?;
    predicate.check_setting(&instance)?;
    let extra = match (&args.constraints, args.builtin) {
        (Some(path), _) => LinearConstraintSet::parse(&instance, &std::fs::read(path)?)?,
        (None, Some(BuiltinRows::Ifs)) => ifs_rows(&instance),
        (None, Some(BuiltinRows::Gfs)) => gfs_rows(&instance, limits)?,
        (None, None) => LinearConstraintSet::empty(),
    };
    let mode = match args.mode {
        OracleMode::Implementable => {
            let path = args.fractional.as_ref().ok_or_else(|| {
                Error::Precondition("implementable mode needs --fractional".into())
            })?;
            match parse_target(&instance, &std::fs::read(path)?)? {
                Target::Fractional(p) => FeasibilityMode::Fixed(p),
                Target::Integral(w) => FeasibilityMode::Fixed(FractionalOutcome::from_integral(
                    &w,
                    instance.num_projects(),
                )),
            }
        }
        OracleMode::Joint => FeasibilityMode::Free,
    };
    let start = Instant::now();
    let verdict = lottery_feasible(&instance, &mode, &predicate, &extra, limits)?;
    let mut document = verdict_json(&instance, &verdict);
    let map = document.as_object_mut().expect("verdicts are objects");
    map.insert("command".into(), json!("oracle"));
    map.insert("instance_digest".into(), json!(instance.digest()));
    map.insert(
        "mode".into(),
        json!(args.mode.to_possible_value().expect("named").get_name()),
    );
    map.insert("predicate".into(), json!(predicate.to_string()));
    map.insert("rows".into(), json!(extra.rows().len()));
    map.insert(
        "timing_ms".into(),
        json!(start.elapsed().as_secs_f64() * 1000.0),
    );
    Ok(Outcome {
        document,
        out: args.out.clone(),
        success: verdict.feasible,
    })
}

fn required<T: Clone>(value: &Option<T>, flag: &str) -> Result<T> {
    value
        .clone()
        .ok_or_else(|| Error::Precondition(format!("this family needs --{flag}")))
}

fn cmd_gen(args: &GenArgs) -> Result<Outcome> {
    let count = |n: u64| {
        usize::try_from(n).map_err(|_| Error::Precondition(format!("n = {n} is too large")))
    };
    let (instance, p) = match args.family {
        Family::Bfx => {
            let (instance, p) =
                gen_bfx_family(&required(&args.budget, "B")?, &required(&args.eps, "eps")?)?;
            (instance, Some(p))
        }
        Family::GfsJr => {
            let n = count(required(&args.n, "n")?)?;
            (
                gen_gfs_jr_family(
                    n,
                    &required(&args.budget, "B")?,
                    &required(&args.eps, "eps")?,
                )?,
                None,
            )
        }
        Family::IfsJr => (
            gen_ifs_jr_family(count(required(&args.n, "n")?)?, &required(&args.h, "H")?)?,
            None,
        ),
    };
    if let (Some(p), Some(path)) = (&p, &args.fractional_out) {
        emit(
            &json!({ "fractional": fractional_outcome_json(&instance, p) }),
            Some(path),
        )?;
    }
    Ok(Outcome {
        document: instance.to_json_value(),
        out: args.out.clone(),
        success: true,
    })
}

/// Project ids of an outcome, for callers building target documents.
pub fn outcome_document(instance: &PbInstance, w: &IntegralOutcome) -> Value {
    json!({ "outcome": project_ids(instance, w.iter()) })
}

/// A fractional target document.
pub fn fractional_document(instance: &PbInstance, p: &FractionalOutcome) -> Value {
    json!({ "fractional": fractional_outcome_json(instance, p) })
}
