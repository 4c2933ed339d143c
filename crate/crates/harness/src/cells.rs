//! Turning plan cells into concrete instances and solver configurations.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use restartlab_core::cnf::Var;
use restartlab_core::families::{
    ladder, pitfall, random_k_cnf, tseitin, LadderLayout, LadderParams, PitfallParams,
};
use restartlab_core::graph::{odd_labelling, random_regular_graph, Labelling};
use restartlab_core::instance::CnfInstance;
use restartlab_core::restart::RestartPolicy;
use restartlab_core::solver::{Budget, SolverConfig, Preset, Witness};

use crate::plan::{Generator, RestartChoice, Source};

fn get<T: std::str::FromStr>(params: &BTreeMap<String, String>, key: &str, default: Option<T>) -> Result<T> {
    match params.get(key) {
        Some(v) => v.parse().map_err(|_| anyhow!("bad value `{v}` for parameter `{key}`")),
        None => default.ok_or_else(|| anyhow!("missing parameter `{key}`")),
    }
}

/// Builds the instance for one `(generator, parameters, seed)` triple.
pub fn build_instance(generator: Generator, params: &BTreeMap<String, String>, seed: u64) -> Result<CnfInstance> {
    let inst = match generator {
        Generator::Ladder => {
            let n = get(params, "n", None)?;
            let degree = get(params, "degree", Some(4))?;
            ladder(&LadderParams::random(n, degree, seed)?)?
        }
        Generator::Pitfall => {
            let k = get(params, "k", Some(2))?;
            let n = get(params, "n", None)?;
            let degree = get(params, "degree", Some(4))?;
            pitfall(&PitfallParams::random(k, n, degree, seed)?)?
        }
        Generator::Tseitin => {
            let vertices = get(params, "vertices", None)?;
            let degree = get(params, "degree", Some(3))?;
            let graph = random_regular_graph(vertices, degree, seed)?;
            let labelling = match params.get("parity").map(String::as_str) {
                None | Some("odd") => odd_labelling(&graph, seed ^ 1),
                Some("even") => {
                    let mut l = odd_labelling(&graph, seed ^ 1).values().to_vec();
                    l[0] = !l[0];
                    Labelling::new(l)
                }
                Some(p) => bail!("parity must be odd or even, got `{p}`"),
            };
            tseitin(&graph, &labelling, 1)?
        }
        Generator::Random3 => {
            let n: usize = get(params, "n", None)?;
            let ratio: f64 = get(params, "ratio", Some(4.26))?;
            let f = random_k_cnf(n, (ratio * n as f64).round() as usize, 3, seed)?;
            let mut inst = CnfInstance::raw(f);
            inst.set_parameter("n", n);
            inst.set_parameter("ratio", ratio);
            inst
        }
    };
    Ok(inst)
}

fn read_lines<T: std::str::FromStr>(path: &Path) -> Result<Vec<T>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading script {}", path.display()))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse().map_err(|_| anyhow!("bad script entry `{l}` in {}", path.display())))
        .collect()
}

pub fn read_variable_script(path: &Path) -> Result<Vec<Var>> {
    let raw: Vec<usize> = read_lines(path)?;
    if raw.contains(&0) {
        bail!("variable scripts are 1-based");
    }
    Ok(raw.into_iter().map(Var::new).collect())
}

pub fn read_value_script(path: &Path) -> Result<Vec<bool>> {
    let raw: Vec<u8> = read_lines(path)?;
    raw.into_iter()
        .map(|b| match b {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(anyhow!("value scripts hold 0 or 1")),
        })
        .collect()
}

/// Default branching witness: c-variables first on ladders, a seeded
/// permutation elsewhere.
pub fn default_order(inst: &CnfInstance, seed: u64) -> Vec<Var> {
    let n = inst.formula.num_variables();
    if let (Some(c), Some(ln)) = (inst.backdoor("c-vars"), inst.parameter::<usize>("n")) {
        let lay = LadderLayout::new(ln);
        let mut order = c.to_vec();
        order.extend(lay.ell_vars());
        return order;
    }
    let mut order: Vec<Var> = (1..=n).map(Var::new).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5EED));
    order
}

fn default_restart(inst: &CnfInstance) -> RestartPolicy {
    match inst.backdoor("c-vars") {
        Some(c) if !c.is_empty() => RestartPolicy::CProbe(c.to_vec()),
        _ => RestartPolicy::AfterEachConflict,
    }
}

pub struct CellChoices<'a> {
    pub restart: &'a RestartChoice,
    pub variables: &'a Source,
    pub values: &'a Source,
    pub budget: Budget,
}

/// Longest value script generated when none is supplied.
pub const DEFAULT_SCRIPT_LEN: usize = 1 << 20;

pub fn build_config(inst: &CnfInstance, config: Preset, choices: &CellChoices, seed: u64) -> Result<SolverConfig> {
    let n = inst.formula.num_variables();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB175);
    let order = match choices.variables {
        Source::Default => default_order(inst, seed),
        Source::Script(p) => read_variable_script(p)?,
    };
    let value_script = match choices.values {
        Source::Default => (0..DEFAULT_SCRIPT_LEN).map(|_| rng.gen()).collect(),
        Source::Script(p) => read_value_script(p)?,
    };
    let value_map: Vec<bool> = (0..=n).map(|_| rng.gen()).collect();
    let restart = match choices.restart {
        RestartChoice::Default => default_restart(inst),
        RestartChoice::Never => RestartPolicy::Never,
        RestartChoice::EachConflict => RestartPolicy::AfterEachConflict,
        RestartChoice::CProbe => RestartPolicy::CProbe(
            inst.backdoor("c-vars")
                .ok_or_else(|| anyhow!("cprobe restarts need a c-vars backdoor"))?
                .to_vec(),
        ),
        RestartChoice::Script(p) => RestartPolicy::scripted(read_lines(p)?),
    };
    let witness = Witness { order, value_map, value_script, restart: Some(restart), ..Witness::default() };
    Ok(config.config(&witness, seed, choices.budget))
}
