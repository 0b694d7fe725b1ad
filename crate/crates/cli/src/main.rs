use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mmbp_core::generate::{DEFAULT_WEIGHT_MAX, DEFAULT_WEIGHT_MIN};
use mmbp_core::milp::{parse_solution, Family};
use mmbp_core::protocol::{DEFAULT_K_VALUES, DEFAULT_TIME_LIMIT};
use mmbp_core::{
    build_model, check_solution, emit_lp, generate, standard_suite, run_protocol, solve_bnb,
    solve_enumeration, write_csv, GenConfig, Instance, Method, NamedInstance, ProtocolOptions,
    SolveOptions, Weight,
};

/// Exact solvers for the multidimensional maximum bisection problem.
#[derive(Parser)]
#[command(name = "mmbp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random G(n, m) instances.
    Gen(GenArgs),
    /// Solve an instance exactly.
    Solve(SolveArgs),
    /// Write the MILP model of an instance in LP format.
    EmitLp(EmitLpArgs),
    /// Check a solver's solution file against the MILP model.
    Check(CheckArgs),
    /// Run the vary-dimension protocol over a directory of instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of vertices (even).
    #[arg(short, long, required_unless_present = "standard_suite")]
    n: Option<usize>,
    /// Number of edges.
    #[arg(short, long, required_unless_present = "standard_suite")]
    m: Option<usize>,
    /// Weight dimension.
    #[arg(short, long, default_value_t = 20)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_WEIGHT_MIN)]
    weight_min: Weight,
    #[arg(long, default_value_t = DEFAULT_WEIGHT_MAX)]
    weight_max: Weight,
    /// Generate all 27 experimental instances into the `--out` directory.
    #[arg(long, requires = "out", conflicts_with_all = ["n", "m"])]
    standard_suite: bool,
    /// Output file (directory with --standard-suite). Defaults to stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, default_value = "enum", value_parser = parse_solve_method)]
    method: Method,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Enumeration worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Solve the prefix instance with the first K weight coordinates.
    #[arg(short, long)]
    k: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EmitLpArgs {
    file: PathBuf,
    /// Output file. Defaults to stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    file: PathBuf,
    /// Solution file with `<name> <value>` lines.
    #[arg(long)]
    solution: PathBuf,
    /// Also require y to be the exact cut indicator and U its weight.
    #[arg(long)]
    require_tight: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of `.mmbp` instance files.
    #[arg(long)]
    suite: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "enum,bnb")]
    methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_K_VALUES)]
    k: Vec<usize>,
    /// Per-solve wall-clock limit in seconds.
    #[arg(long, default_value_t = DEFAULT_TIME_LIMIT.as_secs_f64())]
    time_limit: f64,
    /// Solves run concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// External MILP solver command for `milp`, with {lp}, {sol} and {time} placeholders.
    #[arg(long)]
    solver_cmd: Option<String>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_solve_method(s: &str) -> Result<Method, String> {
    match s.parse()? {
        Method::Milp => Err("solve supports enum and bnb; use emit-lp for external solvers".into()),
        m => Ok(m),
    }
}

fn seconds(secs: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(secs).with_context(|| format!("invalid time limit {secs}"))
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    if args.standard_suite {
        let dir = args.out.expect("clap enforces --out");
        fs::create_dir_all(&dir)?;
        for (name, config) in standard_suite(args.seed) {
            let instance = generate(&config)?;
            let path = dir.join(format!("{name}.mmbp"));
            fs::write(&path, instance.to_text())
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        return Ok(());
    }
    let config = GenConfig {
        vertex_count: args.n.expect("clap enforces -n"),
        edge_count: args.m.expect("clap enforces -m"),
        dim: args.k,
        weight_min: args.weight_min,
        weight_max: args.weight_max,
        seed: args.seed,
    };
    let instance = generate(&config)?;
    write_output(args.out.as_deref(), &instance.to_text())
}

#[derive(Serialize)]
struct SolveReport<'a> {
    method: Method,
    status: String,
    value: Weight,
    bisection: &'a [u32],
    coordinate_sums: Vec<Weight>,
    explored: u64,
    t: f64,
    t_tot: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pruned_by_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pruned_by_balance: Option<u64>,
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let mut instance = read_instance(&args.file)?;
    if let Some(k) = args.k {
        instance = instance.prefix(k)?;
    }
    let options = SolveOptions {
        time_limit: args.time_limit.map(seconds).transpose()?,
        jobs: args.jobs.max(1),
    };
    let result = match args.method {
        Method::Enum => solve_enumeration(&instance, &options),
        Method::Bnb => solve_bnb(&instance, &options),
        Method::Milp => unreachable!("rejected by the argument parser"),
    };
    let cut = instance.cut_weight(&result.best_bisection);
    debug_assert_eq!(cut.weight, result.best_value);
    let report = SolveReport {
        method: args.method,
        status: result.status.to_string(),
        value: result.best_value,
        bisection: result.best_bisection.members(),
        coordinate_sums: cut.coordinate_sums,
        explored: result.explored,
        t: result.time_to_best,
        t_tot: result.time_total,
        nodes: result.bnb.map(|s| s.nodes),
        pruned_by_bound: result.bnb.map(|s| s.pruned_by_bound),
        pruned_by_balance: result.bnb.map(|s| s.pruned_by_balance),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(());
    }
    println!("status     {}", report.status);
    println!("value      {}", report.value);
    println!("bisection  {}", result.best_bisection);
    let sums: Vec<String> = report.coordinate_sums.iter().map(Weight::to_string).collect();
    println!("sums       {}", sums.join(" "));
    println!("explored   {}", report.explored);
    if let Some(stats) = result.bnb {
        println!("pruned     {} by bound, {} by balance", stats.pruned_by_bound, stats.pruned_by_balance);
    }
    println!("t          {:.3}", report.t);
    println!("t_tot      {:.3}", report.t_tot);
    Ok(())
}

fn cmd_emit_lp(args: EmitLpArgs) -> Result<()> {
    let instance = read_instance(&args.file)?;
    write_output(args.out.as_deref(), &emit_lp(&build_model(&instance)))
}

fn cmd_check(args: CheckArgs) -> Result<bool> {
    let instance = read_instance(&args.file)?;
    let model = build_model(&instance);
    let text = fs::read_to_string(&args.solution)
        .with_context(|| format!("reading {}", args.solution.display()))?;
    let witness = parse_solution(&model, &text)
        .with_context(|| format!("parsing {}", args.solution.display()))?;
    let report = check_solution(&model, &witness)?;
    println!("{report}");
    println!("U          {}", witness.u_value);
    if report.family(Family::Balance).satisfied() {
        if let Some(s) = witness.bisection() {
            println!("cut weight {}", instance.cut_weight(&s).weight);
        }
    }
    Ok(report.feasible && (report.tight || !args.require_tight))
}

fn load_suite(dir: &Path) -> Result<Vec<NamedInstance>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "mmbp"));
    paths.sort();
    if paths.is_empty() {
        bail!("no .mmbp files in {}", dir.display());
    }
    paths
        .iter()
        .map(|p| {
            Ok(NamedInstance {
                name: p.file_stem().unwrap().to_string_lossy().into_owned(),
                instance: read_instance(p)?,
            })
        })
        .collect()
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let instances = load_suite(&args.suite)?;
    let options = ProtocolOptions {
        time_limit: seconds(args.time_limit)?,
        jobs: args.jobs.max(1),
        solver_command: args.solver_cmd,
    };
    let rows = run_protocol(&instances, &args.methods, &args.k, &options)?;
    fs::write(&args.out, write_csv(&rows)?)
        .with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(path) = args.json {
        fs::write(&path, serde_json::to_string_pretty(&rows)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    eprintln!("{} rows written to {}", rows.len(), args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(args).map(|_| true),
        Command::Solve(args) => cmd_solve(args).map(|_| true),
        Command::EmitLp(args) => cmd_emit_lp(args).map(|_| true),
        Command::Check(args) => cmd_check(args),
        Command::Bench(args) => cmd_bench(args).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
