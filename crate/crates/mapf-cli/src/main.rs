//! Command-line front end for the `mapf` library: validate solutions,
//! solve instances, compute exact optima, generate scenarios, and run
//! benchmark sweeps over map/scenario collections.
//!
//! Exit codes
//! - 0: success (for `validate`: the solution is valid)
//! - 1: usage error, unreadable/ill-formed input, or internal failure
//! - 2: `validate` ran and the solution is invalid
//! - 3: `solve` hit its time limit before finding a solution
//! - 4: the instance is provably unsolvable (`solve`, `oracle`)
//! - 5: `solve` ran an incomplete algorithm that gave up without a proof

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use mapf::harness::{problems_csv, run_scenario, summarize_map, summary_csv, summary_table, ScenarioRun};
use mapf::io::{
    generate_scenario, parse_map, parse_scen, read_solution, scenario_instance, serialize_scen,
    write_solution, Scenario, ScenarioMode,
};
use mapf::oracle::{brute_force_optimal, OracleOutcome};
use mapf::solve::{solver_by_name, SolveOutcome, Solver, SolverBudget};
use mapf::validate::validate;
use mapf::{ConflictKind, Grid, Instance, Objective, SemanticsProfile, TargetBehavior, Vertex};

const EXIT_INVALID: i32 = 2;
const EXIT_TIMEOUT: i32 = 3;
const EXIT_UNSOLVABLE: i32 = 4;
const EXIT_INCOMPLETE: i32 = 5;

#[derive(Parser)]
#[command(
    name = "mapf",
    version,
    about = "Multi-agent pathfinding on 4-connected grids: solve, validate, and benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a solution file against an instance and print a report.
    ///
    /// Exits 0 if the solution is valid and 2 if it is not.
    Validate {
        /// Grid map file.
        #[arg(long)]
        map: PathBuf,
        /// Scenario file supplying agent starts and goals.
        #[arg(long)]
        scen: PathBuf,
        /// Number of agents: the first N scenario entries.
        #[arg(long)]
        agents: usize,
        /// Solution file: one line per agent, whitespace-separated x,y locations.
        #[arg(long)]
        solution: PathBuf,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Solve an instance and write the solution as a solution file.
    ///
    /// Exits 0 on success, 3 on timeout, 4 if provably unsolvable, and 5 if
    /// an incomplete algorithm gave up without a proof either way.
    Solve {
        /// Grid map file.
        #[arg(long)]
        map: PathBuf,
        /// Scenario file supplying agent starts and goals.
        #[arg(long)]
        scen: PathBuf,
        /// Number of agents: the first N scenario entries.
        #[arg(long)]
        agents: usize,
        /// Search algorithm.
        #[arg(long, value_enum)]
        algo: Algo,
        /// Time limit in seconds (fractions allowed).
        #[arg(long)]
        time_limit: f64,
        /// Write the solution here instead of to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Exhaustively compute a provably optimal solution for a small instance.
    ///
    /// Prints the optimal cost and a witness solution. Exits 4 if the
    /// instance has no solution within the horizon.
    Oracle {
        /// Grid map file.
        #[arg(long)]
        map: PathBuf,
        /// Scenario file supplying agent starts and goals.
        #[arg(long)]
        scen: PathBuf,
        /// Number of agents: the first N scenario entries.
        #[arg(long)]
        agents: usize,
        /// Cap plan length at this many actions per agent (default: a bound
        /// long enough to settle solvability outright).
        #[arg(long)]
        horizon: Option<usize>,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Generate a scenario file for a map.
    GenScen {
        /// Grid map file.
        #[arg(long)]
        map: PathBuf,
        /// Number of entries (agents) to generate.
        #[arg(long)]
        n: usize,
        /// Placement mode: "random", "clustered:RADIUS", or
        /// "designated:STARTS_FILE,GOALS_FILE" (each file lists candidate
        /// x,y cells, one or more per line; # starts a comment).
        #[arg(long)]
        mode: String,
        /// Random seed; the same seed always yields the same scenario.
        #[arg(long)]
        seed: u64,
        /// Output scenario file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the incremental benchmark protocol over a collection of maps and
    /// scenarios, and write per-problem results as CSV.
    ///
    /// For every `NAME.map` in --maps-dir, all `NAME-*.scen` files in
    /// --scens-dir are run: agent counts grow from 2 until the solver first
    /// fails, each attempt on a fresh time budget.
    Bench {
        /// Directory containing .map files.
        #[arg(long)]
        maps_dir: PathBuf,
        /// Directory containing .scen files.
        #[arg(long)]
        scens_dir: PathBuf,
        /// Search algorithm.
        #[arg(long, value_enum)]
        algo: Algo,
        /// Time limit in seconds per problem (fractions allowed).
        #[arg(long)]
        time_limit: f64,
        /// Output CSV file of per-problem rows.
        #[arg(long)]
        out: PathBuf,
        /// Also write a per-map summary CSV here.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Number of scenarios to run in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        profile: ProfileArgs,
    },
}

/// Conflict-semantics flags shared by every subcommand that needs a profile.
#[derive(clap::Args)]
struct ProfileArgs {
    /// Comma-separated conflict kinds to forbid (vertex, edge, following,
    /// cycle, swapping); the set is closed under dominance.
    #[arg(long, default_value = "vertex,edge,swapping")]
    profile: String,
    /// What an agent does after finishing its plan.
    #[arg(long, value_enum, default_value_t = BehaviorArg::Stay)]
    target_behavior: BehaviorArg,
    /// Objective function to optimize (and report costs under).
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Soc)]
    objective: ObjectiveArg,
}

#[derive(Copy, Clone, ValueEnum)]
enum Algo {
    Cbs,
    Prioritized,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Cbs => "cbs",
            Algo::Prioritized => "prioritized",
        }
    }

    fn solver(self) -> Box<dyn Solver> {
        solver_by_name(self.name()).expect("every Algo variant names a registered solver")
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum BehaviorArg {
    Stay,
    Disappear,
}

#[derive(Copy, Clone, ValueEnum)]
enum ObjectiveArg {
    /// Sum over agents of each agent's individual cost.
    Soc,
    /// Latest arrival time over all agents.
    Makespan,
}

impl ProfileArgs {
    fn build(&self) -> Result<SemanticsProfile> {
        let mut kinds = Vec::new();
        for token in self.profile.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let kind: ConflictKind = token
                .parse()
                .map_err(|e: String| anyhow!("--profile: {e}"))?;
            kinds.push(kind);
        }
        let behavior = match self.target_behavior {
            BehaviorArg::Stay => TargetBehavior::Stay,
            BehaviorArg::Disappear => TargetBehavior::Disappear,
        };
        let objective = match self.objective {
            ObjectiveArg::Soc => Objective::SumOfCosts,
            ObjectiveArg::Makespan => Objective::Makespan,
        };
        Ok(SemanticsProfile::new(kinds, behavior, objective))
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here too; only real usage errors
            // should exit nonzero.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate { map, scen, agents, solution, profile } => {
            let profile = profile.build()?;
            let instance = load_instance(&map, &scen, agents)?;
            let text = fs::read_to_string(&solution)
                .with_context(|| format!("reading solution file {}", solution.display()))?;
            let solution = read_solution(&text)
                .with_context(|| format!("parsing solution file {}", solution.display()))?;
            let report = validate(&instance, &solution, &profile)?;
            print!("{report}");
            Ok(if report.valid { 0 } else { EXIT_INVALID })
        }
        Command::Solve { map, scen, agents, algo, time_limit, out, profile } => {
            let profile = profile.build()?;
            let instance = load_instance(&map, &scen, agents)?;
            let solver = algo.solver();
            let budget = SolverBudget::time_limited(seconds(time_limit)?);
            match solver.solve(&instance, &profile, &budget)? {
                SolveOutcome::Solved(solution) => {
                    let text = write_solution(&solution);
                    match out {
                        Some(path) => fs::write(&path, text)
                            .with_context(|| format!("writing {}", path.display()))?,
                        None => print!("{text}"),
                    }
                    Ok(0)
                }
                SolveOutcome::Timeout => {
                    eprintln!("timeout: no solution within {time_limit} s");
                    Ok(EXIT_TIMEOUT)
                }
                SolveOutcome::Unsolvable => {
                    eprintln!("unsolvable: no solution exists under this profile");
                    Ok(EXIT_UNSOLVABLE)
                }
                SolveOutcome::Incomplete => {
                    eprintln!(
                        "incomplete: {} gave up without proving the instance unsolvable",
                        algo.name()
                    );
                    Ok(EXIT_INCOMPLETE)
                }
            }
        }
        Command::Oracle { map, scen, agents, horizon, profile } => {
            let profile = profile.build()?;
            let instance = load_instance(&map, &scen, agents)?;
            match brute_force_optimal(&instance, &profile, horizon) {
                OracleOutcome::Optimal { cost, solution } => {
                    println!("optimal cost: {cost}");
                    print!("{}", write_solution(&solution));
                    Ok(0)
                }
                OracleOutcome::UnsolvableWithinHorizon { horizon } => {
                    println!("unsolvable within horizon {horizon}");
                    Ok(EXIT_UNSOLVABLE)
                }
            }
        }
        Command::GenScen { map, n, mode, seed, out } => {
            let grid = load_grid(&map)?;
            let map_name = map
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| map.display().to_string());
            let mode = parse_mode(&mode)?;
            let scenario = generate_scenario(&grid, &map_name, n, &mode, seed)?;
            fs::write(&out, serialize_scen(&scenario))
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(0)
        }
        Command::Bench { maps_dir, scens_dir, algo, time_limit, out, summary, jobs, profile } => {
            let profile = profile.build()?;
            let limit = seconds(time_limit)?;
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            bench(&maps_dir, &scens_dir, algo, limit, &out, summary.as_deref(), jobs, &profile)
        }
    }
}

fn seconds(value: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(value).map_err(|_| anyhow!("--time-limit must be a non-negative number of seconds"))
}

fn load_grid(path: &Path) -> Result<Grid> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading map file {}", path.display()))?;
    let grid =
        parse_map(&text).with_context(|| format!("parsing map file {}", path.display()))?;
    Ok(grid)
}

fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading scenario file {}", path.display()))?;
    let scen =
        parse_scen(&text).with_context(|| format!("parsing scenario file {}", path.display()))?;
    Ok(scen)
}

fn load_instance(map: &Path, scen: &Path, agents: usize) -> Result<Instance> {
    let grid = load_grid(map)?;
    let scenario = load_scenario(scen)?;
    let instance = scenario_instance(&grid, &scenario, agents)
        .with_context(|| format!("building a {agents}-agent instance from {}", scen.display()))?;
    Ok(instance)
}

fn parse_mode(text: &str) -> Result<ScenarioMode> {
    if text == "random" {
        return Ok(ScenarioMode::Random);
    }
    if let Some(radius) = text.strip_prefix("clustered:") {
        let radius: u32 = radius
            .parse()
            .map_err(|_| anyhow!("--mode clustered:RADIUS needs an integer radius, got {radius:?}"))?;
        return Ok(ScenarioMode::Clustered { radius });
    }
    if let Some(files) = text.strip_prefix("designated:") {
        let (starts, goals) = files.split_once(',').ok_or_else(|| {
            anyhow!("--mode designated:STARTS_FILE,GOALS_FILE needs two file names separated by a comma")
        })?;
        return Ok(ScenarioMode::Designated {
            sources: read_vertex_list(Path::new(starts))?,
            targets: read_vertex_list(Path::new(goals))?,
        });
    }
    bail!("unknown mode {text:?}: expected random, clustered:RADIUS, or designated:STARTS_FILE,GOALS_FILE");
}

/// Reads a cell-list file: `x,y` tokens separated by whitespace, one or more
/// per line, with `#` starting a comment line.
fn read_vertex_list(path: &Path) -> Result<Vec<Vertex>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading cell list {}", path.display()))?;
    let mut cells = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for token in line.split_whitespace() {
            let (x, y) = token
                .split_once(',')
                .ok_or_else(|| anyhow!("{}:{}: expected x,y but got {token:?}", path.display(), idx + 1))?;
            let x: u32 = x.parse().with_context(|| {
                format!("{}:{}: bad x coordinate in {token:?}", path.display(), idx + 1)
            })?;
            let y: u32 = y.parse().with_context(|| {
                format!("{}:{}: bad y coordinate in {token:?}", path.display(), idx + 1)
            })?;
            cells.push(Vertex { x, y });
        }
    }
    Ok(cells)
}

/// One unit of bench work: a parsed scenario tied to its map.
struct BenchJob {
    map_stem: String,
    scenario_name: String,
    grid_index: usize,
    scenario: Scenario,
}

#[allow(clippy::too_many_arguments)]
fn bench(
    maps_dir: &Path,
    scens_dir: &Path,
    algo: Algo,
    limit: Duration,
    out: &Path,
    summary_out: Option<&Path>,
    jobs: usize,
    profile: &SemanticsProfile,
) -> Result<i32> {
    let mut map_files: Vec<PathBuf> = fs::read_dir(maps_dir)
        .with_context(|| format!("reading maps directory {}", maps_dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "map"))
        .collect();
    map_files.sort();
    if map_files.is_empty() {
        bail!("no .map files found in {}", maps_dir.display());
    }

    let mut scen_files: Vec<PathBuf> = fs::read_dir(scens_dir)
        .with_context(|| format!("reading scenarios directory {}", scens_dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "scen"))
        .collect();
    scen_files.sort();

    let mut grids = Vec::new();
    let mut jobs_list = Vec::new();
    for map_path in &map_files {
        let stem = map_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let grid = load_grid(map_path)?;
        let grid_index = grids.len();
        grids.push(grid);
        let prefix = format!("{stem}-");
        let mut found = 0usize;
        for scen_path in &scen_files {
            let scen_stem = scen_path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            if !scen_stem.starts_with(&prefix) {
                continue;
            }
            jobs_list.push(BenchJob {
                map_stem: stem.clone(),
                scenario_name: scen_stem,
                grid_index,
                scenario: load_scenario(scen_path)?,
            });
            found += 1;
        }
        if found == 0 {
            eprintln!("warning: no {prefix}*.scen files for {} — skipping map", map_path.display());
        }
    }
    if jobs_list.is_empty() {
        bail!("no scenarios matched any map: expected files named MAPSTEM-*.scen");
    }

    let runs = run_bench_jobs(&grids, &jobs_list, algo, limit, jobs.min(jobs_list.len()), profile)?;

    // Group runs per map, preserving the sorted map order.
    let mut by_map: BTreeMap<&str, Vec<ScenarioRun>> = BTreeMap::new();
    for (job, run) in jobs_list.iter().zip(&runs) {
        by_map.entry(&job.map_stem).or_default().push(run.clone());
    }
    let summaries: Vec<_> =
        by_map.iter().map(|(map, runs)| summarize_map(map, runs)).collect();

    fs::write(out, problems_csv(&runs)).with_context(|| format!("writing {}", out.display()))?;
    if let Some(path) = summary_out {
        fs::write(path, summary_csv(&summaries))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{}", summary_table(&summaries));
    Ok(0)
}

/// Runs every job, `jobs` scenarios at a time, and returns results in job
/// order. Each worker grabs the next unclaimed job index, so ordering of
/// the output never depends on scheduling.
fn run_bench_jobs(
    grids: &[Grid],
    jobs_list: &[BenchJob],
    algo: Algo,
    limit: Duration,
    jobs: usize,
    profile: &SemanticsProfile,
) -> Result<Vec<ScenarioRun>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<ScenarioRun>>>> =
        jobs_list.iter().map(|_| Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| {
                let solver = algo.solver();
                loop {
                    let index = next.fetch_add(1, Ordering::Relaxed);
                    let Some(job) = jobs_list.get(index) else { break };
                    let run = run_scenario(
                        &grids[job.grid_index],
                        &job.scenario,
                        &job.scenario_name,
                        solver.as_ref(),
                        profile,
                        limit,
                    )
                    .map_err(|e| anyhow!(e).context(format!("scenario {}", job.scenario_name)));
                    *slots[index].lock().unwrap() = Some(run);
                }
            });
        }
    });

    slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every job slot is filled before the scope ends"))
        .collect()
}
