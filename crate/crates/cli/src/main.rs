//! Command-line front end: generate instance corpora, run solvers, check
//! matchings, encode models, and run benchmark grids.

mod bench;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use smti_core::encode;
use smti_core::exact::{branch_and_bound, brute_force};
use smti_core::gen::{derive_instance_seed, generate, GenParams};
use smti_core::heuristics::{deferred_acceptance, ga_solve, ltiu_solve, GaParams, LtiuParams};
use smti_core::stability::{blocking_pairs, cost, is_stable};
use smti_core::{Instance, Objective, SearchStats, SolveReport};

#[derive(Parser)]
#[command(
    name = "smti",
    version,
    about = "Stable marriage with ties and incomplete lists"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instance files.
    Generate(GenerateArgs),
    /// Solve an instance file and print the report.
    Solve(SolveArgs),
    /// Check a matching file against an instance: stability, blocking
    /// pairs, and all three costs.
    Check(CheckArgs),
    /// Re-emit an instance in a chosen format.
    Encode(EncodeArgs),
    /// Run a benchmark grid from a config file and write a CSV report.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Instance size (men = women = n).
    #[arg(long)]
    n: usize,
    /// Probability of deleting a preference entry, in [0, 1).
    #[arg(long)]
    p1: f64,
    /// Probability of tying an entry with its predecessor, in [0, 1].
    #[arg(long)]
    p2: f64,
    /// Number of instances to generate.
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Base seed; instance k uses a seed derived from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    solver: SolverKind,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::MaxCardinality)]
    objective: ObjectiveArg,
    /// Seed for the randomized solvers (da, ltiu, ga).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget for bnb; 0 means unlimited.
    #[arg(long, default_value_t = 0)]
    time_limit_ms: u64,
    /// ltiu: search step budget.
    #[arg(long, default_value_t = 50_000)]
    steps: u64,
    /// ltiu: probability of a random-walk move.
    #[arg(long, default_value_t = 0.2)]
    walk_p: f64,
    /// ga: population size.
    #[arg(long, default_value_t = 50)]
    population: usize,
    /// ga: evolution rounds.
    #[arg(long, default_value_t = 1000)]
    rounds: u64,
    /// ga: crossover probability.
    #[arg(long, default_value_t = 0.7)]
    crossover_p: f64,
    /// ga: mutation probability.
    #[arg(long, default_value_t = 0.2)]
    mutation_p: f64,
    /// Also write the matching to this file.
    #[arg(long)]
    matching_out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    instance: PathBuf,
    matching: PathBuf,
}

#[derive(Args)]
struct EncodeArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    format: FormatKind,
    /// Objective for asp/lp output; asp without one emits the decision
    /// version, lp defaults to max-cardinality.
    #[arg(long, value_enum)]
    objective: Option<ObjectiveArg>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    config: PathBuf,
    /// Worker threads for benchmark cells.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    /// Exhaustive enumeration (n <= 8).
    Bf,
    /// Branch and bound.
    Bnb,
    /// Stochastic hill-climbing.
    Ltiu,
    /// Genetic algorithm.
    Ga,
    /// Deferred acceptance with random tie-breaking.
    Da,
}

impl SolverKind {
    fn name(self) -> &'static str {
        match self {
            SolverKind::Bf => "bf",
            SolverKind::Bnb => "bnb",
            SolverKind::Ltiu => "ltiu",
            SolverKind::Ga => "ga",
            SolverKind::Da => "da",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    MaxCardinality,
    Egalitarian,
    SexEqual,
}

impl From<ObjectiveArg> for Objective {
    fn from(value: ObjectiveArg) -> Objective {
        match value {
            ObjectiveArg::MaxCardinality => Objective::MaxCardinality,
            ObjectiveArg::Egalitarian => Objective::Egalitarian,
            ObjectiveArg::SexEqual => Objective::SexEqual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatKind {
    Native,
    Asp,
    Lp,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run() -> Result<ExitCode, String> {
    match Cli::parse().command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Check(args) => cmd_check(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Bench(args) => bench::cmd_bench(&args.config, args.jobs),
    }
}

fn read_instance(path: &Path) -> Result<Instance, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    encode::parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, String> {
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| format!("cannot create {}: {e}", args.out_dir.display()))?;
    for k in 0..args.count {
        let params = GenParams {
            n: args.n,
            p1: args.p1,
            p2: args.p2,
            seed: derive_instance_seed(args.seed, 0, 0, k),
        };
        let inst = generate(&params).map_err(|e| e.to_string())?;
        let name = format!("inst_{}_{}_{}_{}.smti", args.n, args.p1, args.p2, k);
        let path = args.out_dir.join(name);
        std::fs::write(&path, encode::emit_instance(&inst))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_solver(
    inst: &Instance,
    solver: SolverKind,
    objective: Objective,
    args: &SolveArgs,
) -> Result<SolveReport, String> {
    if matches!(solver, SolverKind::Ltiu | SolverKind::Ga) && objective != Objective::MaxCardinality
    {
        return Err(format!(
            "{} only solves the max-cardinality variant",
            solver.name()
        ));
    }
    Ok(match solver {
        SolverKind::Bf => brute_force(inst, objective).map_err(|e| e.to_string())?,
        SolverKind::Bnb => branch_and_bound(inst, objective, args.time_limit_ms),
        SolverKind::Ltiu => ltiu_solve(
            inst,
            &LtiuParams {
                step_limit: args.steps,
                random_walk_p: args.walk_p,
                seed: args.seed,
            },
        ),
        SolverKind::Ga => ga_solve(
            inst,
            &GaParams {
                population_size: args.population,
                evolution_rounds: args.rounds,
                crossover_p: args.crossover_p,
                mutation_p: args.mutation_p,
                seed: args.seed,
            },
        ),
        SolverKind::Da => {
            let start = std::time::Instant::now();
            let matching = deferred_acceptance(inst, args.seed);
            let cost = cost(inst, &matching, objective);
            SolveReport {
                matching,
                objective,
                cost,
                optimal: false,
                stats: SearchStats {
                    elapsed_ms: start.elapsed().as_millis() as u64,
                    ..SearchStats::default()
                },
            }
        }
    })
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, String> {
    let inst = read_instance(&args.instance)?;
    let objective: Objective = args.objective.into();
    let report = run_solver(&inst, args.solver, objective, &args)?;

    let mut out = String::new();
    let _ = writeln!(out, "solver: {}", args.solver.name());
    let _ = writeln!(out, "objective: {}", report.objective);
    let _ = writeln!(out, "n: {}", inst.n());
    let _ = writeln!(out, "cost: {}", report.cost);
    let _ = writeln!(out, "cardinality: {}", report.matching.matched_count());
    let _ = writeln!(out, "optimal: {}", report.optimal);
    let _ = writeln!(out, "stable: {}", is_stable(&inst, &report.matching));
    let _ = writeln!(out, "matching:");
    for (m, w) in report.matching.pairs() {
        let _ = writeln!(out, "  {m} {w}");
    }
    let _ = writeln!(out, "nodes_explored: {}", report.stats.nodes_explored);
    let _ = writeln!(out, "steps: {}", report.stats.steps);
    let _ = writeln!(out, "restarts: {}", report.stats.restarts);
    if let Some(raw) = report.stats.raw_eval {
        let _ = writeln!(out, "raw_eval: {raw}");
    }
    if let Some(stabilized) = report.stats.stabilized_eval {
        let _ = writeln!(out, "stabilized_eval: {stabilized}");
    }
    let _ = writeln!(out, "elapsed_ms: {}", report.stats.elapsed_ms);
    print!("{out}");

    if let Some(path) = &args.matching_out {
        std::fs::write(path, encode::emit_matching(&report.matching))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }

    // A bounded exact search that ran out of time has no certificate.
    if args.solver == SolverKind::Bnb && !report.optimal {
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, String> {
    let inst = read_instance(&args.instance)?;
    let text = std::fs::read_to_string(&args.matching)
        .map_err(|e| format!("cannot read {}: {e}", args.matching.display()))?;
    let mu = encode::parse_matching(&text, &inst)
        .map_err(|e| format!("{}: {e}", args.matching.display()))?;

    let bps = blocking_pairs(&inst, &mu);
    println!("n: {}", inst.n());
    println!("matched: {}", mu.matched_count());
    println!("stable: {}", bps.is_empty());
    println!("blocking_pairs: {}", bps.len());
    for bp in &bps {
        println!("  {} {} {}", bp.man, bp.woman, bp.case);
    }
    println!(
        "cost_max_cardinality: {}",
        cost(&inst, &mu, Objective::MaxCardinality)
    );
    println!(
        "cost_egalitarian: {}",
        cost(&inst, &mu, Objective::Egalitarian)
    );
    println!("cost_sex_equal: {}", cost(&inst, &mu, Objective::SexEqual));
    Ok(ExitCode::SUCCESS)
}

fn cmd_encode(args: EncodeArgs) -> Result<ExitCode, String> {
    let inst = read_instance(&args.instance)?;
    let text = match args.format {
        FormatKind::Native => encode::emit_instance(&inst),
        FormatKind::Asp => encode::emit_asp(&inst, args.objective.map(Objective::from)),
        FormatKind::Lp => encode::emit_lp(
            &inst,
            args.objective
                .map(Objective::from)
                .unwrap_or(Objective::MaxCardinality),
        ),
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
