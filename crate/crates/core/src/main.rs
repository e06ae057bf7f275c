//! Command-line front end: solve queries, generate synthetic maps and
//! scenarios, compare algorithms, and verify optimality against the
//! built-in Dijkstra oracle.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gridpath::bench::{
    load_scen, run_suite, to_scen, AlgoSpec, BenchInstance, ScenarioQuery, SuiteOptions,
    SuiteReport,
};
use gridpath::grid::{gen_clustered_queries, gen_maze, gen_synthetic, load_map, Coord, GridMap};
use gridpath::search::{dijkstra_table, Engine};

#[derive(Parser)]
#[command(
    name = "gridpath",
    version,
    about = "Optimal pathfinding on 8-connected grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve queries on a map and emit per-query results as CSV
    Run(RunArgs),
    /// Generate a synthetic map (and optionally a scenario file)
    Gen(GenArgs),
    /// Compare a baseline and a candidate algorithm, printing improvement factors
    Bench(BenchArgs),
    /// Check algorithms against the built-in Dijkstra oracle
    Verify(VerifyArgs),
}

/// Exactly one map source: a MovingAI file, synthetic parameters, or a maze.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct MapSource {
    /// MovingAI .map file
    #[arg(long, group = "map_source")]
    map: Option<PathBuf>,
    /// Synthetic map spec: s=<side>,b=<blockage>,r=<density>[,seed=<n>]
    #[arg(long, group = "map_source")]
    synthetic: Option<String>,
    /// Perfect maze with the given (odd) side length
    #[arg(long, group = "map_source")]
    maze: Option<i32>,
}

/// Exactly one query source: a scenario file or generated clustered queries.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct QuerySource {
    /// MovingAI .scen file
    #[arg(long, group = "query_source")]
    scen: Option<PathBuf>,
    /// Generate this many clustered queries instead
    #[arg(long, group = "query_source")]
    queries: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    map: MapSource,
    #[command(flatten)]
    queries: QuerySource,
    /// Algorithm spec: astar, jps or cjps, with optional -g/-b/-i flags (e.g. cjps-gb)
    #[arg(long, default_value = "cjps")]
    algo: String,
    /// Check every result against a Dijkstra table
    #[arg(long)]
    verify: bool,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (each gets its own engine and map copy)
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Seed for generated maps/queries (falls back to GRIDPATH_SEED, then entropy)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct GenArgs {
    /// Synthetic map spec: s=<side>,b=<blockage>,r=<density>[,seed=<n>]
    #[arg(long)]
    synthetic: Option<String>,
    /// Perfect maze with the given (odd) side length
    #[arg(long)]
    maze: Option<i32>,
    /// Output .map path
    #[arg(long)]
    out: PathBuf,
    /// Also write a .scen file with clustered queries here
    #[arg(long)]
    scen: Option<PathBuf>,
    /// Query count for the .scen file
    #[arg(long, default_value_t = 100)]
    queries: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    map: MapSource,
    #[command(flatten)]
    queries: QuerySource,
    /// Baseline algorithm spec
    #[arg(long, default_value = "jps")]
    baseline: String,
    /// Candidate algorithm spec
    #[arg(long, default_value = "cjps")]
    candidate: String,
    /// Timed repetitions (median is reported); a warm-up pass always runs
    #[arg(long, default_value_t = 10)]
    reps: u32,
    /// Count suboptimal expansions against a per-query Dijkstra table
    #[arg(long)]
    subopt: bool,
    /// Write the per-query CSV here
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    map: MapSource,
    #[command(flatten)]
    queries: QuerySource,
    /// Comma-separated algorithm specs to verify
    #[arg(
        long,
        default_value = "astar,jps,jps-g,jps-b,jps-i,cjps,cjps-g,cjps-b,cjps-i"
    )]
    algos: String,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

type CliError = Box<dyn std::error::Error>;

/// Flags beat the GRIDPATH_SEED environment variable, which beats entropy.
/// A drawn seed is printed so the run stays reproducible.
fn resolve_seed(flag: Option<u64>) -> u64 {
    if let Some(s) = flag {
        return s;
    }
    if let Some(s) = std::env::var("GRIDPATH_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        return s;
    }
    let drawn = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0)
        ^ std::process::id() as u64;
    eprintln!("seed: {drawn}");
    drawn
}

/// `s=<side>,b=<blockage>,r=<density>[,seed=<n>]`
fn parse_synthetic_spec(spec: &str) -> Result<(i32, f64, f64, Option<u64>), CliError> {
    let (mut s, mut b, mut r, mut seed) = (None, None, None, None);
    for part in spec.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("bad synthetic parameter `{part}` (want key=value)"))?;
        match key.trim() {
            "s" => s = Some(value.parse()?),
            "b" => b = Some(value.parse()?),
            "r" => r = Some(value.parse()?),
            "seed" => seed = Some(value.parse()?),
            other => return Err(format!("unknown synthetic parameter `{other}`").into()),
        }
    }
    Ok((
        s.ok_or("synthetic spec is missing s=")?,
        b.ok_or("synthetic spec is missing b=")?,
        r.ok_or("synthetic spec is missing r=")?,
        seed,
    ))
}

struct LoadedMap {
    name: String,
    r: f64,
    seed: u64,
    map: GridMap,
}

fn load_map_source(source: &MapSource, seed_flag: Option<u64>) -> Result<LoadedMap, CliError> {
    if let Some(path) = &source.map {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let map = load_map(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "map".into());
        return Ok(LoadedMap {
            name,
            r: 0.0,
            seed: 0,
            map,
        });
    }
    if let Some(spec) = &source.synthetic {
        let (s, b, r, spec_seed) = parse_synthetic_spec(spec)?;
        let seed = spec_seed.unwrap_or_else(|| resolve_seed(seed_flag));
        let map = gen_synthetic(s, b, r, seed)?;
        return Ok(LoadedMap {
            name: format!("synthetic-s{s}-b{b}-r{r}-seed{seed}"),
            r,
            seed,
            map,
        });
    }
    if let Some(side) = source.maze {
        let seed = resolve_seed(seed_flag);
        let map = gen_maze(side, seed)?;
        return Ok(LoadedMap {
            name: format!("maze-s{side}-seed{seed}"),
            r: 0.0,
            seed,
            map,
        });
    }
    unreachable!("clap enforces one map source")
}

fn load_queries(
    source: &QuerySource,
    map: &GridMap,
    seed: u64,
) -> Result<Vec<(Coord, Coord)>, CliError> {
    if let Some(path) = &source.scen {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let queries = load_scen(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(queries.iter().map(|q| (q.start, q.target)).collect());
    }
    if let Some(n) = source.queries {
        // decorrelate from the map seed so obstacles and endpoints differ
        return Ok(gen_clustered_queries(map, n, seed ^ 0x71e5)?);
    }
    unreachable!("clap enforces one query source")
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, CliError> {
    let seed = resolve_seed(args.seed);
    let loaded = load_map_source(&args.map, args.seed)?;
    let queries = load_queries(&args.queries, &loaded.map, seed)?;
    let spec = AlgoSpec::parse(&args.algo)?;

    let jobs = args.jobs.clamp(1, queries.len().max(1));
    let mut rows: Vec<(usize, gridpath::search::QueryMetrics)> = if jobs <= 1 {
        let mut engine = Engine::new(loaded.map.clone());
        let mut rows = Vec::new();
        for (qid, &(s, t)) in queries.iter().enumerate() {
            let (_, m) = engine.solve(spec.algorithm, &spec.opts, s, t)?;
            rows.push((qid, m));
        }
        rows
    } else {
        // each worker owns an engine and a map copy; results keep query order
        let chunk = queries.len().div_ceil(jobs);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (w, part) in queries.chunks(chunk).enumerate() {
                let map = loaded.map.clone();
                handles.push(scope.spawn(move || {
                    let mut engine = Engine::new(map);
                    let mut rows = Vec::new();
                    for (i, &(s, t)) in part.iter().enumerate() {
                        let m = engine
                            .solve(spec.algorithm, &spec.opts, s, t)
                            .map(|(_, m)| m)?;
                        rows.push((w * chunk + i, m));
                    }
                    Ok::<_, gridpath::search::SearchError>(rows)
                }));
            }
            let mut all = Vec::new();
            for h in handles {
                all.extend(h.join().expect("worker panicked")?);
            }
            Ok::<_, gridpath::search::SearchError>(all)
        })?
    };
    rows.sort_by_key(|&(qid, _)| qid);

    let mut verified = 0usize;
    if args.verify {
        for (qid, m) in &rows {
            let (s, t) = queries[*qid];
            let truth = dijkstra_table(&loaded.map, s).get(t);
            if m.found != truth.is_finite() || (m.found && m.length != truth) {
                eprintln!(
                    "query {qid}: {} returned {}, truth is {}",
                    spec.label(),
                    m.length,
                    truth
                );
                return Ok(ExitCode::FAILURE);
            }
            verified += 1;
        }
    }

    let report = SuiteReport {
        rows: rows
            .into_iter()
            .map(|(qid, metrics)| gridpath::bench::ReportRow {
                domain: "cli".into(),
                map_name: loaded.name.clone(),
                algo: spec.algo_name().into(),
                flags: spec.flag_string(),
                r: loaded.r,
                seed: loaded.seed,
                query_id: qid,
                metrics,
            })
            .collect(),
    };
    write_or_print(&args.out, &report.to_csv())?;
    if args.verify {
        eprintln!("verified {verified}/{} optimal", queries.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, CliError> {
    let seed = resolve_seed(args.seed);
    let (map, name) = if let Some(spec) = &args.synthetic {
        let (s, b, r, spec_seed) = parse_synthetic_spec(spec)?;
        let seed = spec_seed.unwrap_or(seed);
        (gen_synthetic(s, b, r, seed)?, format!("s{s}-b{b}-r{r}"))
    } else if let Some(side) = args.maze {
        (gen_maze(side, seed)?, format!("maze{side}"))
    } else {
        return Err("gen needs --synthetic or --maze".into());
    };
    std::fs::write(&args.out, map.to_movingai())
        .map_err(|e| format!("{}: {e}", args.out.display()))?;

    if let Some(scen_path) = &args.scen {
        let queries = gen_clustered_queries(&map, args.queries, seed ^ 0x71e5)?;
        let map_name = args
            .out
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or(name);
        let rows: Vec<ScenarioQuery> = queries
            .iter()
            .map(|&(s, t)| {
                let truth = dijkstra_table(&map, s).get(t);
                ScenarioQuery {
                    map_name: map_name.clone(),
                    width: map.width(),
                    height: map.height(),
                    start: s,
                    target: t,
                    reference_length: truth.to_f64(),
                }
            })
            .collect();
        std::fs::write(scen_path, to_scen(&rows))
            .map_err(|e| format!("{}: {e}", scen_path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, CliError> {
    let seed = resolve_seed(args.seed);
    let loaded = load_map_source(&args.map, args.seed)?;
    let queries = load_queries(&args.queries, &loaded.map, seed)?;
    let baseline = AlgoSpec::parse(&args.baseline)?;
    let candidate = AlgoSpec::parse(&args.candidate)?;

    let instances = vec![BenchInstance {
        domain: "cli".into(),
        map_name: loaded.name.clone(),
        r: loaded.r,
        seed: loaded.seed,
        map: loaded.map,
        queries,
    }];
    let opts = SuiteOptions {
        repetitions: args.reps,
        count_suboptimal: args.subopt,
        verify_optimal: true,
        shuffle_seed: seed,
    };
    let report = run_suite(&instances, &[baseline, candidate], &opts)?;

    let f = report.improvement_factors(&baseline.label(), &candidate.label());
    println!(
        "improvement factors {} / {} over {} queries:",
        baseline.label(),
        candidate.label(),
        f.queries
    );
    println!("  hp-opt     {:.2}", f.hp_opt);
    println!("  expansions {:.2}", f.expansions);
    match f.subopt {
        Some(s) => println!("  subopt     {s:.2}"),
        None => println!("  subopt     ---"),
    }
    println!("  scan-steps {:.2}", f.scan_steps);
    println!(
        "  tpe        {:.2} ({:.2}/ {:.2})",
        f.tpe_factor, f.tpe_baseline_us, f.tpe_candidate_us
    );
    println!("  runtime    {:.2}", f.runtime);
    println!("per-map runtime factor quantiles (min/25%/50%/75%/max):");
    for (map, q) in report.time_factor_quantiles(&baseline.label(), &candidate.label()) {
        println!(
            "  {map}  {:.2}  {:.2}  {:.2}  {:.2}  {:.2}",
            q[0], q[1], q[2], q[3], q[4]
        );
    }
    if args.out.is_some() {
        write_or_print(&args.out, &report.to_csv())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let seed = resolve_seed(args.seed);
    let loaded = load_map_source(&args.map, args.seed)?;
    let queries = load_queries(&args.queries, &loaded.map, seed)?;
    let specs: Vec<AlgoSpec> = args
        .algos
        .split(',')
        .map(|s| AlgoSpec::parse(s.trim()))
        .collect::<Result<_, _>>()?;

    let mut failures = 0usize;
    let mut checked = 0usize;
    for (qid, &(s, t)) in queries.iter().enumerate() {
        let truth = dijkstra_table(&loaded.map, s).get(t);
        for spec in &specs {
            let mut engine = Engine::new(loaded.map.clone());
            let (r, _) = engine.solve(spec.algorithm, &spec.opts, s, t)?;
            checked += 1;
            if r.found != truth.is_finite() || (r.found && r.length != truth) {
                failures += 1;
                eprintln!(
                    "query {qid} {s}->{t}: {} returned {} (found={}), truth {}",
                    spec.label(),
                    r.length,
                    r.found,
                    truth
                );
            }
        }
    }
    println!(
        "verified {}/{checked} optimal across {} algorithms on {} queries",
        checked - failures,
        specs.len(),
        queries.len()
    );
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_spec_parsing() {
        let (s, b, r, seed) = parse_synthetic_spec("s=64,b=0.75,r=0.01,seed=7").unwrap();
        assert_eq!((s, seed), (64, Some(7)));
        assert!((b - 0.75).abs() < 1e-12 && (r - 0.01).abs() < 1e-12);
        let (_, _, _, seed) = parse_synthetic_spec("s=8,b=0,r=0").unwrap();
        assert_eq!(seed, None);
        assert!(parse_synthetic_spec("s=8,b=0").is_err());
        assert!(parse_synthetic_spec("q=1").is_err());
    }
}
