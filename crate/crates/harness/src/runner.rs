//! Executes experiment plans, one rayon task per `(cell, seed)`.

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use rayon::prelude::*;
use restartlab_core::solver::{solve_formula, solve_with_sink, SolveReport, Preset};
use restartlab_core::verify::{AuditOptions, AuditReport, Auditor};

use crate::cells::{build_config, build_instance, CellChoices};
use crate::plan::ExperimentPlan;
use crate::record::{encode_params, sort_records, RunRecord};

pub const WORKERS_ENV: &str = "RESTARTLAB_WORKERS";

/// Audit results for one run, keyed like its record.
#[derive(Clone, Debug)]
pub struct AuditedRun {
    pub config: Preset,
    pub params: String,
    pub seed: u64,
    pub report: AuditReport,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub audits: Vec<AuditedRun>,
}

fn workers() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()).filter(|&n| n > 0)
}

fn record(generator: &str, params: &str, config: Preset, seed: u64, report: &SolveReport) -> RunRecord {
    RunRecord {
        config: config.name().into(),
        family: generator.into(),
        params: params.into(),
        seed,
        status: report.status.label().into(),
        decisions: report.stats.decisions,
        propagations: report.stats.propagations,
        conflicts: report.stats.conflicts,
        restarts: report.stats.restarts,
        learned: report.stats.learned,
        wall_ms: report.wall_time.as_secs_f64() * 1e3,
    }
}

type Job = (BTreeMap<String, String>, u64);

fn run_job(plan: &ExperimentPlan, (cell, seed): &Job, audit: bool) -> Result<Vec<(RunRecord, Option<AuditedRun>)>> {
    let params = encode_params(cell);
    let inst = build_instance(plan.generator, cell, *seed)
        .with_context(|| format!("building {} [{params}] seed {seed}", plan.generator.name()))?;
    let choices = CellChoices {
        restart: &plan.restart,
        variables: &plan.variables,
        values: &plan.values,
        budget: plan.budget,
    };
    let mut out = Vec::with_capacity(plan.configs.len());
    for &config in &plan.configs {
        let cfg = build_config(&inst, config, &choices, *seed)?;
        let ctx = || format!("{} on {} [{params}] seed {seed}", config.name(), plan.generator.name());
        let (report, audited) = if audit {
            let mut auditor = Auditor::new(&inst.formula, AuditOptions::for_config(&cfg));
            let report = solve_with_sink(&inst.formula, &cfg, &mut auditor).with_context(ctx)?;
            let a = auditor.finish(&report.status, &inst.formula);
            (report, Some(AuditedRun { config, params: params.clone(), seed: *seed, report: a }))
        } else {
            (solve_formula(&inst.formula, &cfg).with_context(ctx)?, None)
        };
        out.push((record(plan.generator.name(), &params, config, *seed, &report), audited));
    }
    Ok(out)
}

/// Runs every cell of the plan. With `audit` set each run streams its
/// trace through an [`Auditor`].
pub fn run_plan(plan: &ExperimentPlan, audit: bool) -> Result<ExperimentOutcome> {
    plan.validate()?;
    let jobs: Vec<Job> = plan
        .parameter_cells()
        .into_iter()
        .flat_map(|cell| (0..plan.seeds).map(move |s| (cell.clone(), plan.seed_base + s)))
        .collect();
    let go = || -> Result<Vec<_>> {
        let nested: Result<Vec<_>> = jobs.par_iter().map(|j| run_job(plan, j, audit)).collect();
        Ok(nested?.into_iter().flatten().collect())
    };
    let results = match workers() {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(go)?,
        None => go()?,
    };
    let mut outcome = ExperimentOutcome::default();
    for (r, a) in results {
        outcome.records.push(r);
        outcome.audits.extend(a);
    }
    sort_records(&mut outcome.records);
    Ok(outcome)
}

pub fn run_experiment(plan: &ExperimentPlan) -> Result<Vec<RunRecord>> {
    Ok(run_plan(plan, false)?.records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::{Generator, RestartChoice};

    #[test]
    fn small_random_sweep() {
        let mut plan = ExperimentPlan::new(Generator::Random3).param("n", &["8", "12"]).param("ratio", &["4.3"]);
        plan.configs = vec![Preset::CJrVsPs, Preset::CJVsPs];
        plan.seeds = 3;
        plan.restart = RestartChoice::EachConflict;
        let out = run_plan(&plan, true).unwrap();
        assert_eq!(out.records.len(), 12);
        assert_eq!(out.audits.len(), 12);
        assert!(out.records.iter().all(RunRecord::solved));
        assert!(out.audits.iter().all(|a| a.report.passed));
        assert_eq!(out.records[0].params, "n=8;ratio=4.3");
        assert_eq!(out.records.last().unwrap().params, "n=12;ratio=4.3");
        let strip = |rs: Vec<RunRecord>| -> Vec<RunRecord> { rs.into_iter().map(|r| RunRecord { wall_ms: 0.0, ..r }).collect() };
        assert_eq!(strip(run_experiment(&plan).unwrap()), strip(out.records));
    }
}
