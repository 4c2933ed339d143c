use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use restartlab::cells::{build_config, build_instance, CellChoices};
use restartlab::plan::{ExperimentPlan, Generator, RestartChoice, Source};
use restartlab::plot::{emit_plot_data, PlotKind};
use restartlab::record::{read_records, write_records};
use restartlab::runner::run_plan;
use restartlab_core::cnf::Var;
use restartlab_core::dimacs;
use restartlab_core::instance::CnfInstance;
use restartlab_core::solver::{parse_trace, solve_traced, write_trace, Budget, SolveStatus, Preset, TraceEvent};
use restartlab_core::verify::{
    audit_run_with, check_dpll_value_order_invariance, check_ladder_weak_backdoor, check_pitfall_conflict_pairs,
    check_static_restart_equivalence, check_strong_backdoor, AuditOptions,
};

#[derive(Parser)]
#[command(name = "restartlab", version, about = "Generate, solve and audit restart experiments")]
struct Cli {
    /// Seed for generators and randomized heuristics.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance: writes `<out>.cnf` and `<out>.meta`.
    Gen {
        family: String,
        /// Generator parameters as `key=value`.
        #[arg(short, long = "param")]
        params: Vec<String>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Solve a DIMACS file with one configuration.
    Solve {
        cnf: PathBuf,
        #[arg(short, long)]
        config: Preset,
        /// Restart policy: default, never, each-conflict, cprobe or script:<file>.
        #[arg(long, default_value = "default")]
        restart: String,
        #[arg(long)]
        variables: Option<PathBuf>,
        #[arg(long)]
        values: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        max_conflicts: u64,
        /// Write the event trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run an experiment plan and write run records as CSV.
    Experiment {
        plan: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Audit every run and fail on any violation.
        #[arg(long)]
        audit: bool,
    },
    #[command(subcommand)]
    Check(Check),
    /// Summarize run records as a data file and an SVG.
    Plot {
        records: PathBuf,
        #[arg(long, default_value = "scaling")]
        kind: String,
        /// Parameter on the x axis of scaling plots.
        #[arg(long, default_value = "n")]
        x: String,
        #[arg(long)]
        config: Vec<String>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Exhaustively check a strong backdoor (comma-separated variables).
    Backdoor { cnf: PathBuf, vars: String },
    /// Check that every pitfall pair of zeros conflicts.
    Pairs { cnf: PathBuf },
    /// Check the c-variable weak backdoor of a ladder instance.
    Ladder { cnf: PathBuf },
    /// Audit a trace file against its formula.
    Audit {
        cnf: PathBuf,
        trace: PathBuf,
        #[arg(short, long)]
        config: Preset,
        /// SAT, UNSAT or budget-exhausted.
        #[arg(long, default_value = "budget-exhausted")]
        status: String,
    },
    /// Compare scripted-restart and restart-free static runs.
    Equivalence {
        cnf: PathBuf,
        /// Comma-separated restart schedule in conflicts.
        #[arg(long, default_value = "1,2,4,8")]
        schedule: String,
    },
    /// Check that DPLL node counts ignore the value order on an UNSAT formula.
    Dpll {
        cnf: PathBuf,
        #[arg(long, default_value_t = 10)]
        scripts: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv.split_once('=').with_context(|| format!("expected key=value, got `{kv}`"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn meta_path(cnf: &Path) -> PathBuf {
    cnf.with_extension("meta")
}

fn load(cnf: &Path) -> Result<CnfInstance> {
    let text = std::fs::read_to_string(cnf).with_context(|| format!("reading {}", cnf.display()))?;
    let formula = dimacs::parse_dimacs(&text)?;
    let meta = meta_path(cnf);
    Ok(match std::fs::read_to_string(&meta) {
        Ok(side) => CnfInstance::from_sidecar(formula, &side)?,
        Err(_) => CnfInstance::raw(formula),
    })
}

fn parse_vars(s: &str) -> Result<Vec<Var>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let i: usize = t.trim().parse()?;
            if i == 0 {
                bail!("variables are 1-based");
            }
            Ok(Var::new(i))
        })
        .collect()
}

/// Assignment left on the trail after the last event; unassigned
/// variables read as false.
fn final_assignment(events: &[TraceEvent], n: usize) -> Vec<bool> {
    let mut trail: Vec<(usize, bool, usize)> = Vec::new();
    let mut level = 0;
    for e in events {
        match *e {
            TraceEvent::Decide { var, value, level: l } => {
                level = l;
                trail.push((var.index(), value, l));
            }
            TraceEvent::Propagate { var, value, .. } => trail.push((var.index(), value, level)),
            TraceEvent::Backtrack { level: l } => {
                trail.retain(|&(_, _, at)| at <= l);
                level = l;
            }
            TraceEvent::Restart => {
                trail.retain(|&(_, _, at)| at == 0);
                level = 0;
            }
            TraceEvent::Conflict { .. } | TraceEvent::Learn { .. } => {}
        }
    }
    let mut model = vec![false; n + 1];
    for (v, b, _) in trail {
        model[v] = b;
    }
    model
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn run(cli: Cli) -> Result<bool> {
    let seed = cli.seed;
    match cli.command {
        Command::Gen { family, params, out } => {
            let generator = Generator::parse(&family).with_context(|| format!("unknown family `{family}`"))?;
            let inst = build_instance(generator, &parse_params(&params)?, seed)?;
            let cnf = out.with_extension("cnf");
            std::fs::write(&cnf, dimacs::write_dimacs(&inst.formula, &[]))?;
            std::fs::write(meta_path(&cnf), inst.sidecar())?;
            println!(
                "{}: {} variables, {} clauses",
                cnf.display(),
                inst.formula.num_variables(),
                inst.formula.len()
            );
            Ok(true)
        }
        Command::Solve { cnf, config, restart, variables, values, max_conflicts, trace } => {
            let inst = load(&cnf)?;
            let restart = RestartChoice::parse(&restart).with_context(|| format!("bad restart `{restart}`"))?;
            let choices = CellChoices {
                restart: &restart,
                variables: &variables.map_or(Source::Default, Source::Script),
                values: &values.map_or(Source::Default, Source::Script),
                budget: Budget { max_conflicts, ..Budget::default() },
            };
            let cfg = build_config(&inst, config, &choices, seed)?;
            let report = solve_traced(&inst, &cfg)?;
            if let Some(path) = trace {
                std::fs::write(&path, write_trace(report.trace.as_deref().unwrap_or_default()))?;
            }
            let s = report.stats;
            println!("s {}", report.status.label());
            println!(
                "c decisions={} propagations={} conflicts={} restarts={} learned={} wall_ms={:.3}",
                s.decisions,
                s.propagations,
                s.conflicts,
                s.restarts,
                s.learned,
                report.wall_time.as_secs_f64() * 1e3
            );
            if let SolveStatus::Sat(model) = &report.status {
                let lits: Vec<String> = (1..model.len())
                    .map(|v| if model[v] { v.to_string() } else { format!("-{v}") })
                    .collect();
                println!("v {} 0", lits.join(" "));
            }
            Ok(true)
        }
        Command::Experiment { plan, out, audit } => {
            let plan = ExperimentPlan::load(&plan)?;
            let outcome = run_plan(&plan, audit)?;
            let dest = out.or_else(|| plan.output.clone());
            match dest {
                Some(p) => write_records(BufWriter::new(File::create(&p)?), &outcome.records)?,
                None => write_records(std::io::stdout().lock(), &outcome.records)?,
            }
            let bad: Vec<_> = outcome.audits.iter().filter(|a| !a.report.passed).collect();
            for a in &bad {
                eprintln!("audit failed: {} [{}] seed {}\n{}", a.config, a.params, a.seed, a.report.render());
            }
            Ok(bad.is_empty())
        }
        Command::Check(check) => run_check(check, seed),
        Command::Plot { records, kind, x, config, out } => {
            let kind = PlotKind::parse(&kind).with_context(|| format!("unknown plot kind `{kind}`"))?;
            let mut rs = read_records(BufReader::new(File::open(&records)?))?;
            if !config.is_empty() {
                rs.retain(|r| config.contains(&r.config));
            }
            emit_plot_data(&rs, kind, &x, &out)?;
            println!("wrote {} and {}", out.with_extension("dat").display(), out.with_extension("svg").display());
            Ok(true)
        }
    }
}

fn run_check(check: Check, seed: u64) -> Result<bool> {
    match check {
        Check::Backdoor { cnf, vars } => {
            let inst = load(&cnf)?;
            let r = check_strong_backdoor(&inst.formula, &parse_vars(&vars)?)?;
            println!("strong backdoor: {} ({} assignments)", verdict(r.holds), r.assignments_checked);
            if let Some(cx) = r.counterexample {
                println!("counterexample: {cx:?}");
            }
            Ok(r.holds)
        }
        Check::Pairs { cnf } => {
            let r = check_pitfall_conflict_pairs(&load(&cnf)?)?;
            println!("conflict pairs: {} ({} checked)", verdict(r.holds()), r.pairs_checked);
            for (j, a, b) in &r.failures {
                println!("no conflict: block {j}, y{a} = y{b} = 0");
            }
            Ok(r.holds())
        }
        Check::Ladder { cnf } => {
            let r = check_ladder_weak_backdoor(&load(&cnf)?)?;
            println!(
                "weak backdoor: {} (conflicts={}, satisfied={}, max extension {} of bound {})",
                verdict(r.passed()),
                r.conflicts,
                r.satisfied,
                r.extensions.iter().max().copied().unwrap_or(0),
                r.bound
            );
            Ok(r.passed())
        }
        Check::Audit { cnf, trace, config, status } => {
            let inst = load(&cnf)?;
            let events = parse_trace(&std::fs::read_to_string(&trace)?)?;
            let cfg = config.config(&Default::default(), seed, Budget::default());
            let status = match status.as_str() {
                "UNSAT" => SolveStatus::Unsat,
                "budget-exhausted" => SolveStatus::BudgetExhausted,
                "SAT" => SolveStatus::Sat(final_assignment(&events, inst.formula.num_variables())),
                s => bail!("unknown status `{s}`"),
            };
            let r = audit_run_with(&events, &inst.formula, AuditOptions::for_config(&cfg), &status);
            print!("{}", r.render());
            Ok(r.passed)
        }
        Check::Equivalence { cnf, schedule } => {
            let inst = load(&cnf)?;
            let n = inst.formula.num_variables();
            let order: Vec<Var> = (1..=n).map(Var::new).collect();
            let mapping: Vec<bool> = (0..=n).map(|v| (v as u64 ^ seed) & 1 == 1).collect();
            let schedule: Vec<u64> =
                schedule.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>()?;
            let r = check_static_restart_equivalence(&inst.formula, &order, &mapping, &schedule, Budget::default())?;
            println!(
                "restart equivalence: {} (learned={}, restarts={}, status={})",
                verdict(r.equal),
                r.learned,
                r.restarts,
                r.status.label()
            );
            Ok(r.equal)
        }
        Check::Dpll { cnf, scripts } => {
            let inst = load(&cnf)?;
            let n = inst.formula.num_variables();
            let order: Vec<Var> = (1..=n).map(Var::new).collect();
            let r = check_dpll_value_order_invariance(&inst.formula, &order, scripts, seed)?;
            println!("dpll node counts: {} {:?}", verdict(r.equal()), r.node_counts);
            Ok(r.equal())
        }
    }
}
