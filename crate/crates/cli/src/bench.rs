//! Benchmark grids: generate replicate instances per (n, p1, p2) cell, run
//! the configured solvers, and write one CSV row per cell and solver.
//!
//! The config is a flat `key = value` text file; `#` starts a comment.
//!
//! ```text
//! n = 50                     # comma list allowed
//! p1 = 0.1:0.8:0.1           # start:end:step, comma list, or single value
//! p2 = 0.2,0.5,0.8
//! replicates = 10
//! solvers = bnb,da,ltiu,ga   # any of bf,bnb,da,ltiu,ga
//! objective = max-cardinality
//! time_limit_ms = 2000       # 0 = unlimited
//! base_seed = 42
//! ltiu_steps = 5000
//! ltiu_walk_p = 0.2
//! ga_population = 50
//! ga_rounds = 1000
//! ga_crossover_p = 0.7
//! ga_mutation_p = 0.2
//! out = bench.csv
//! ```
//!
//! The instance of replicate r in cell (p1 index i, p2 index j) uses the
//! seed `derive_instance_seed(base_seed, i, j, r)`, and the randomized
//! solvers are seeded with that same value, so every cost column is a pure
//! function of the config. A run counts as solved when it finishes inside
//! the time limit — with a certificate for the exact solvers — and a cell
//! whose runs all miss the limit gets `TO` in its time column.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use smti_core::exact::{branch_and_bound, brute_force, BRUTE_FORCE_MAX_N};
use smti_core::gen::{derive_instance_seed, generate, GenParams};
use smti_core::heuristics::{deferred_acceptance, ga_solve, ltiu_solve, GaParams, LtiuParams};
use smti_core::stability::cost;
use smti_core::{Instance, Objective};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BenchSolver {
    Bf,
    Bnb,
    Ltiu,
    Ga,
    Da,
}

impl BenchSolver {
    fn name(self) -> &'static str {
        match self {
            BenchSolver::Bf => "bf",
            BenchSolver::Bnb => "bnb",
            BenchSolver::Ltiu => "ltiu",
            BenchSolver::Ga => "ga",
            BenchSolver::Da => "da",
        }
    }

    fn exact(self) -> bool {
        matches!(self, BenchSolver::Bf | BenchSolver::Bnb)
    }
}

#[derive(Debug, Clone)]
struct BenchConfig {
    ns: Vec<usize>,
    p1s: Vec<f64>,
    p2s: Vec<f64>,
    replicates: u64,
    solvers: Vec<BenchSolver>,
    objective: Objective,
    time_limit_ms: u64,
    base_seed: u64,
    ltiu_steps: u64,
    ltiu_walk_p: f64,
    ga_population: usize,
    ga_rounds: u64,
    ga_crossover_p: f64,
    ga_mutation_p: f64,
    out: String,
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let parse_one = |v: &str| -> Result<f64, String> {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("expected a number, found `{}`", v.trim()))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected `start:end:step`, found `{text}`"));
        }
        let (start, end, step) = (
            parse_one(parts[0])?,
            parse_one(parts[1])?,
            parse_one(parts[2])?,
        );
        if step <= 0.0 || end < start {
            return Err(format!("bad range `{text}`"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|i| round6(start + step * i as f64))
            .collect())
    } else {
        text.split(',')
            .map(parse_one)
            .map(|v| v.map(round6))
            .collect()
    }
}

fn parse_config(text: &str) -> Result<BenchConfig, String> {
    let mut ns: Option<Vec<usize>> = None;
    let mut p1s: Option<Vec<f64>> = None;
    let mut p2s: Option<Vec<f64>> = None;
    let mut replicates: Option<u64> = None;
    let mut solvers: Option<Vec<BenchSolver>> = None;
    let mut objective = Objective::MaxCardinality;
    let mut time_limit_ms = 0u64;
    let mut base_seed: Option<u64> = None;
    let mut ltiu_steps = 50_000u64;
    let mut ltiu_walk_p = 0.2f64;
    let mut ga_population = 50usize;
    let mut ga_rounds = 1000u64;
    let mut ga_crossover_p = 0.7f64;
    let mut ga_mutation_p = 0.2f64;
    let mut out: Option<String> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| format!("config line {}: {message}", i + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "n" => {
                ns = Some(
                    value
                        .split(',')
                        .map(|v| {
                            v.trim()
                                .parse::<usize>()
                                .map_err(|_| err(format!("bad n `{v}`")))
                        })
                        .collect::<Result<_, _>>()?,
                )
            }
            "p1" => p1s = Some(parse_values(value).map_err(err)?),
            "p2" => p2s = Some(parse_values(value).map_err(err)?),
            "replicates" => {
                replicates = Some(
                    value
                        .parse()
                        .map_err(|_| err(format!("bad replicates `{value}`")))?,
                )
            }
            "solvers" => {
                solvers = Some(
                    value
                        .split(',')
                        .map(|v| match v.trim() {
                            "bf" => Ok(BenchSolver::Bf),
                            "bnb" => Ok(BenchSolver::Bnb),
                            "ltiu" => Ok(BenchSolver::Ltiu),
                            "ga" => Ok(BenchSolver::Ga),
                            "da" => Ok(BenchSolver::Da),
                            other => Err(err(format!("unknown solver `{other}`"))),
                        })
                        .collect::<Result<_, _>>()?,
                )
            }
            "objective" => {
                objective = match value {
                    "max-cardinality" => Objective::MaxCardinality,
                    "egalitarian" => Objective::Egalitarian,
                    "sex-equal" => Objective::SexEqual,
                    other => return Err(err(format!("unknown objective `{other}`"))),
                }
            }
            "time_limit_ms" => {
                time_limit_ms = value
                    .parse()
                    .map_err(|_| err(format!("bad time limit `{value}`")))?
            }
            "base_seed" => {
                base_seed = Some(
                    value
                        .parse()
                        .map_err(|_| err(format!("bad seed `{value}`")))?,
                )
            }
            "ltiu_steps" => {
                ltiu_steps = value
                    .parse()
                    .map_err(|_| err(format!("bad ltiu_steps `{value}`")))?
            }
            "ltiu_walk_p" => {
                ltiu_walk_p = value
                    .parse()
                    .map_err(|_| err(format!("bad ltiu_walk_p `{value}`")))?
            }
            "ga_population" => {
                ga_population = value
                    .parse()
                    .map_err(|_| err(format!("bad ga_population `{value}`")))?
            }
            "ga_rounds" => {
                ga_rounds = value
                    .parse()
                    .map_err(|_| err(format!("bad ga_rounds `{value}`")))?
            }
            "ga_crossover_p" => {
                ga_crossover_p = value
                    .parse()
                    .map_err(|_| err(format!("bad ga_crossover_p `{value}`")))?
            }
            "ga_mutation_p" => {
                ga_mutation_p = value
                    .parse()
                    .map_err(|_| err(format!("bad ga_mutation_p `{value}`")))?
            }
            "out" => out = Some(value.to_string()),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }

    let config = BenchConfig {
        ns: ns.ok_or("config: missing `n`")?,
        p1s: p1s.ok_or("config: missing `p1`")?,
        p2s: p2s.ok_or("config: missing `p2`")?,
        replicates: replicates.ok_or("config: missing `replicates`")?,
        solvers: solvers.ok_or("config: missing `solvers`")?,
        objective,
        time_limit_ms,
        base_seed: base_seed.ok_or("config: missing `base_seed`")?,
        ltiu_steps,
        ltiu_walk_p,
        ga_population,
        ga_rounds,
        ga_crossover_p,
        ga_mutation_p,
        out: out.ok_or("config: missing `out`")?,
    };
    validate(&config)?;
    Ok(config)
}

fn validate(config: &BenchConfig) -> Result<(), String> {
    if config.replicates == 0 {
        return Err("config: replicates must be at least 1".into());
    }
    if config.ns.is_empty() || config.ns.contains(&0) {
        return Err("config: n values must be positive".into());
    }
    for (key, values) in [("p1", &config.p1s), ("p2", &config.p2s)] {
        if values.is_empty() {
            return Err(format!("config: {key} has no values"));
        }
        if values.iter().any(|&v| !(0.0..1.0).contains(&v)) {
            return Err(format!("config: {key} values must lie in [0, 1)"));
        }
    }
    if config.solvers.is_empty() {
        return Err("config: no solvers listed".into());
    }
    if config.solvers.contains(&BenchSolver::Bf) {
        if let Some(&n) = config.ns.iter().find(|&&n| n > BRUTE_FORCE_MAX_N) {
            return Err(format!(
                "config: bf cannot handle n={n} (limit {BRUTE_FORCE_MAX_N})"
            ));
        }
    }
    if config.objective != Objective::MaxCardinality
        && config
            .solvers
            .iter()
            .any(|s| matches!(s, BenchSolver::Ltiu | BenchSolver::Ga))
    {
        return Err("config: ltiu/ga only solve the max-cardinality objective".into());
    }
    Ok(())
}

struct RunOutcome {
    elapsed_ms: f64,
    cost: i64,
    optimal: bool,
}

fn run_one(config: &BenchConfig, solver: BenchSolver, inst: &Instance, seed: u64) -> RunOutcome {
    let start = Instant::now();
    let (run_cost, optimal) = match solver {
        BenchSolver::Bf => {
            let report = brute_force(inst, config.objective).expect("size validated");
            (report.cost, report.optimal)
        }
        BenchSolver::Bnb => {
            let report = branch_and_bound(inst, config.objective, config.time_limit_ms);
            (report.cost, report.optimal)
        }
        BenchSolver::Ltiu => {
            let report = ltiu_solve(
                inst,
                &LtiuParams {
                    step_limit: config.ltiu_steps,
                    random_walk_p: config.ltiu_walk_p,
                    seed,
                },
            );
            (report.cost, false)
        }
        BenchSolver::Ga => {
            let report = ga_solve(
                inst,
                &GaParams {
                    population_size: config.ga_population,
                    evolution_rounds: config.ga_rounds,
                    crossover_p: config.ga_crossover_p,
                    mutation_p: config.ga_mutation_p,
                    seed,
                },
            );
            (report.cost, false)
        }
        BenchSolver::Da => {
            let mu = deferred_acceptance(inst, seed);
            (cost(inst, &mu, config.objective), false)
        }
    };
    RunOutcome {
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        cost: run_cost,
        optimal,
    }
}

/// One CSV row: a (n, p1, p2) cell under one solver.
fn cell_rows(config: &BenchConfig, n: usize, p1_idx: usize, p2_idx: usize) -> Vec<String> {
    let p1 = config.p1s[p1_idx];
    let p2 = config.p2s[p2_idx];
    let instances: Vec<Instance> = (0..config.replicates)
        .map(|rep| {
            let seed = derive_instance_seed(config.base_seed, p1_idx as u64, p2_idx as u64, rep);
            generate(&GenParams { n, p1, p2, seed }).expect("validated parameters")
        })
        .collect();
    config
        .solvers
        .iter()
        .map(|&solver| {
            let outcomes: Vec<RunOutcome> = instances
                .iter()
                .enumerate()
                .map(|(rep, inst)| {
                    let seed = derive_instance_seed(
                        config.base_seed,
                        p1_idx as u64,
                        p2_idx as u64,
                        rep as u64,
                    );
                    run_one(config, solver, inst, seed)
                })
                .collect();
            let within_limit = |o: &RunOutcome| {
                config.time_limit_ms == 0 || o.elapsed_ms <= config.time_limit_ms as f64
            };
            let solved = outcomes
                .iter()
                .filter(|o| {
                    if solver.exact() {
                        o.optimal
                    } else {
                        within_limit(o)
                    }
                })
                .count();
            let optimal = outcomes.iter().filter(|o| o.optimal).count();
            let mean_cost =
                outcomes.iter().map(|o| o.cost as f64).sum::<f64>() / outcomes.len() as f64;
            let mean_time = if solved == 0 {
                "TO".to_string()
            } else {
                let total: f64 = outcomes.iter().map(|o| o.elapsed_ms).sum();
                format!("{:.3}", total / outcomes.len() as f64)
            };
            format!(
                "{},{},{},{},{},{:.4},{},{}",
                solver.name(),
                n,
                p1,
                p2,
                mean_time,
                mean_cost,
                solved,
                optimal
            )
        })
        .collect()
}

pub fn cmd_bench(config_path: &Path, jobs: usize) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| format!("cannot read {}: {e}", config_path.display()))?;
    let config = parse_config(&text)?;

    let (p1_count, p2_count) = (config.p1s.len(), config.p2s.len());
    let cells: Vec<(usize, usize, usize)> = config
        .ns
        .iter()
        .flat_map(|&n| (0..p1_count).flat_map(move |i| (0..p2_count).map(move |j| (n, i, j))))
        .collect();

    let rows: Vec<Vec<String>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| {
            use rayon::prelude::*;
            cells
                .par_iter()
                .map(|&(n, i, j)| cell_rows(&config, n, i, j))
                .collect()
        })
    } else {
        cells
            .iter()
            .map(|&(n, i, j)| cell_rows(&config, n, i, j))
            .collect()
    };

    let mut csv =
        String::from("solver,n,p1,p2,mean_time_ms,mean_cost,solved_count,optimal_count\n");
    for group in rows {
        for row in group {
            csv.push_str(&row);
            csv.push('\n');
        }
    }
    std::fs::write(&config.out, &csv).map_err(|e| format!("cannot write {}: {e}", config.out))?;
    let row_count = cells.len() * config.solvers.len();
    println!("wrote {row_count} rows to {}", config.out);
    Ok(ExitCode::SUCCESS)
}
