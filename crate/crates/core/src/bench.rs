//! Benchmark harness: MovingAI scenario loading, dynamic-environment
//! simulation, suboptimality accounting against a Dijkstra truth table, and
//! suite runs that aggregate per-query metrics into improvement factors and
//! CSV reports. Correctness trumps benchmarking: any optimality mismatch
//! against the truth table aborts a suite.

use std::collections::HashMap;

use thiserror::Error;

use crate::grid::{Coord, Cost, GridMap, SplitMix64};
use crate::search::{
    dijkstra_table, Algorithm, DistanceTable, Engine, ExpansionRecord, QueryMetrics, SearchError,
    SearchOpts,
};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("scen line {line}: {reason}")]
    ScenParse { line: usize, reason: String },
    #[error("csv line {line}: {reason}")]
    CsvParse { line: usize, reason: String },
    #[error("expansion log references {0}, which the truth table cannot reach")]
    Accounting(Coord),
    #[error("optimality violation: {algo} on {map} query {query} returned {got}, truth is {want}")]
    OptimalityViolation {
        algo: String,
        map: String,
        query: usize,
        got: String,
        want: String,
    },
    #[error("{algo} metrics changed between repetitions on {map} query {query}")]
    NondeterministicMetrics {
        algo: String,
        map: String,
        query: usize,
    },
    #[error("unknown algorithm spec `{0}`")]
    BadAlgoSpec(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// One row of a MovingAI `.scen` file.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioQuery {
    pub map_name: String,
    pub width: i32,
    pub height: i32,
    pub start: Coord,
    pub target: Coord,
    pub reference_length: f64,
}

/// Parses MovingAI `.scen` text: a `version 1` line, then rows of
/// `bucket map width height start-x start-y goal-x goal-y optimal-length`.
pub fn load_scen(text: &str) -> Result<Vec<ScenarioQuery>, BenchError> {
    let mut lines = text.lines().enumerate();
    let (_, version) = lines.next().ok_or(BenchError::ScenParse {
        line: 1,
        reason: "empty file".into(),
    })?;
    if version.trim() != "version 1" {
        return Err(BenchError::ScenParse {
            line: 1,
            reason: format!("expected `version 1`, got `{}`", version.trim()),
        });
    }
    let mut queries = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 9 {
            return Err(BenchError::ScenParse {
                line: lineno,
                reason: format!("expected 9 fields, got {}", fields.len()),
            });
        }
        let num = |s: &str, what: &str| -> Result<i32, BenchError> {
            s.parse().map_err(|_| BenchError::ScenParse {
                line: lineno,
                reason: format!("bad {what} `{s}`"),
            })
        };
        let width = num(fields[2], "width")?;
        let height = num(fields[3], "height")?;
        let start = Coord::new(num(fields[4], "start-x")?, num(fields[5], "start-y")?);
        let target = Coord::new(num(fields[6], "goal-x")?, num(fields[7], "goal-y")?);
        for c in [start, target] {
            if c.x < 0 || c.y < 0 || c.x >= width || c.y >= height {
                return Err(BenchError::ScenParse {
                    line: lineno,
                    reason: format!("endpoint {c} outside {width}x{height}"),
                });
            }
        }
        let reference_length: f64 = fields[8].parse().map_err(|_| BenchError::ScenParse {
            line: lineno,
            reason: format!("bad optimal-length `{}`", fields[8]),
        })?;
        queries.push(ScenarioQuery {
            map_name: fields[1].to_string(),
            width,
            height,
            start,
            target,
            reference_length,
        });
    }
    Ok(queries)
}

/// Renders queries back to `.scen` text.
pub fn to_scen(queries: &[ScenarioQuery]) -> String {
    let mut out = String::from("version 1\n");
    for (i, q) in queries.iter().enumerate() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            i,
            q.map_name,
            q.width,
            q.height,
            q.start.x,
            q.start.y,
            q.target.x,
            q.target.y,
            q.reference_length
        ));
    }
    out
}

/// Copy of `map` with `floor(r * traversable)` random traversable cells
/// blocked, never touching the `protected` cells (query endpoints stay
/// solvable). Deterministic per seed.
pub fn simulate_dynamic(map: &GridMap, r: f64, seed: u64, protected: &[Coord]) -> GridMap {
    let mut out = map.clone();
    let count = (r * map.traversable_count() as f64).floor() as usize;
    if count == 0 {
        return out;
    }
    let mut eligible: Vec<Coord> = map
        .traversable_cells()
        .filter(|c| !protected.contains(c))
        .collect();
    let count = count.min(eligible.len());
    let mut rng = SplitMix64::new(seed);
    rng.sample_prefix(&mut eligible, count);
    for &c in &eligible[..count] {
        out.set_obstacle(c).unwrap();
    }
    out
}

/// Counts suboptimal expansions in a log: an expansion is suboptimal iff its
/// g strictly exceeds the true distance (exact comparison), and propagated
/// iff it is suboptimal and its parent expanded suboptimally too.
pub fn count_suboptimal(
    log: &[ExpansionRecord],
    truth: &DistanceTable,
) -> Result<(u64, u64), BenchError> {
    let mut subopt = 0u64;
    let mut propagated = 0u64;
    let mut tainted: HashMap<Coord, bool> = HashMap::new();
    for e in log {
        let t = truth.get(e.coord);
        if t.is_infinite() {
            return Err(BenchError::Accounting(e.coord));
        }
        let is_sub = e.g > t;
        if is_sub {
            subopt += 1;
            if e.parent
                .is_some_and(|p| tainted.get(&p).copied().unwrap_or(false))
            {
                propagated += 1;
            }
        }
        *tainted.entry(e.coord).or_insert(false) |= is_sub;
    }
    Ok((subopt, propagated))
}

/// Heap operations restricted to suboptimal nodes: open-list insertions
/// whose g strictly exceeds the true distance, plus suboptimal expansions
/// as counted by [`count_suboptimal`].
pub fn count_suboptimal_ops(
    expansion_log: &[ExpansionRecord],
    insertion_log: &[(Coord, Cost)],
    truth: &DistanceTable,
) -> Result<u64, BenchError> {
    let (sub_exp, _) = count_suboptimal(expansion_log, truth)?;
    let mut sub_ins = 0u64;
    for &(c, g) in insertion_log {
        let t = truth.get(c);
        if t.is_infinite() {
            return Err(BenchError::Accounting(c));
        }
        if g > t {
            sub_ins += 1;
        }
    }
    Ok(sub_exp + sub_ins)
}

/// An algorithm plus its variant flags, as benched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlgoSpec {
    pub algorithm: Algorithm,
    pub opts: SearchOpts,
}

impl AlgoSpec {
    pub fn new(algorithm: Algorithm) -> AlgoSpec {
        AlgoSpec {
            algorithm,
            opts: SearchOpts::default(),
        }
    }

    /// Parses `astar`, `jps`, `cjps`, optionally suffixed with variant
    /// letters: `-g` (diagonal caching), `-b` (backwards scanning), `-i`
    /// (intersection pruning); e.g. `cjps-gb`.
    pub fn parse(s: &str) -> Result<AlgoSpec, BenchError> {
        let (name, flags) = match s.split_once('-') {
            Some((n, f)) => (n, f),
            None => (s, ""),
        };
        let algorithm = match name {
            "astar" => Algorithm::AStar,
            "jps" => Algorithm::Jps,
            "cjps" => Algorithm::Cjps,
            _ => return Err(BenchError::BadAlgoSpec(s.to_string())),
        };
        let mut opts = SearchOpts::default();
        for ch in flags.chars() {
            match ch {
                'g' => opts.diagonal_caching = true,
                'b' => opts.backwards_scanning = true,
                'i' => opts.intersection_pruning = true,
                _ => return Err(BenchError::BadAlgoSpec(s.to_string())),
            }
        }
        Ok(AlgoSpec { algorithm, opts })
    }

    pub fn algo_name(&self) -> &'static str {
        match self.algorithm {
            Algorithm::AStar => "astar",
            Algorithm::Jps => "jps",
            Algorithm::Cjps => "cjps",
        }
    }

    pub fn flag_string(&self) -> String {
        let mut s = String::new();
        if self.opts.diagonal_caching {
            s.push('g');
        }
        if self.opts.backwards_scanning {
            s.push('b');
        }
        if self.opts.intersection_pruning {
            s.push('i');
        }
        s
    }

    pub fn label(&self) -> String {
        let flags = self.flag_string();
        if flags.is_empty() {
            self.algo_name().to_string()
        } else {
            format!("{}-{}", self.algo_name(), flags)
        }
    }
}

/// One map, its metadata, and the queries to run on it.
#[derive(Clone)]
pub struct BenchInstance {
    pub domain: String,
    pub map_name: String,
    pub r: f64,
    pub seed: u64,
    pub map: GridMap,
    pub queries: Vec<(Coord, Coord)>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteOptions {
    /// Timed repetitions per (algorithm, query) cell; the reported time is
    /// their median. An untimed warm-up pass always runs first. 0 keeps the
    /// warm-up pass timing.
    pub repetitions: u32,
    /// Compute a Dijkstra truth table per query and fill the suboptimality
    /// counters (and verify optimality).
    pub count_suboptimal: bool,
    /// Verify lengths against the truth table even without suboptimality
    /// accounting.
    pub verify_optimal: bool,
    /// Seed for the per-repetition query shuffle.
    pub shuffle_seed: u64,
}

/// One (algorithm, query) cell of a suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub domain: String,
    pub map_name: String,
    pub algo: String,
    pub flags: String,
    pub r: f64,
    pub seed: u64,
    pub query_id: usize,
    pub metrics: QueryMetrics,
}

const CSV_HEADER: &str = "domain,map,algo,flags,r,seed,query_id,found,length,expansions,insertions,hp_opt,subopt,propagated,scan_steps,time_ns";

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub rows: Vec<ReportRow>,
}

/// Runs every (algorithm, query) cell of every instance.
///
/// Counts come from a warm-up pass (which also feeds the suboptimality
/// accounting); the timed repetitions re-run the queries in a shuffled order
/// and must reproduce the counts exactly, otherwise the run aborts.
pub fn run_suite(
    instances: &[BenchInstance],
    algorithms: &[AlgoSpec],
    opts: &SuiteOptions,
) -> Result<SuiteReport, BenchError> {
    let mut report = SuiteReport::default();
    for inst in instances {
        let truths: Vec<Option<DistanceTable>> = if opts.count_suboptimal || opts.verify_optimal {
            inst.queries
                .iter()
                .map(|&(s, _)| Some(dijkstra_table(&inst.map, s)))
                .collect()
        } else {
            inst.queries.iter().map(|_| None).collect()
        };

        for spec in algorithms {
            let mut engine = Engine::new(inst.map.clone());
            let mut run_opts = spec.opts;
            run_opts.record_log = opts.count_suboptimal;

            // warm-up pass: counts, logs, verification
            let mut metrics: Vec<QueryMetrics> = Vec::with_capacity(inst.queries.len());
            for (qid, &(start, target)) in inst.queries.iter().enumerate() {
                let (_, mut m) = engine.solve(spec.algorithm, &run_opts, start, target)?;
                if let Some(truth) = &truths[qid] {
                    let want = truth.get(target);
                    if m.found != want.is_finite() || (m.found && m.length != want) {
                        return Err(BenchError::OptimalityViolation {
                            algo: spec.label(),
                            map: inst.map_name.clone(),
                            query: qid,
                            got: m.length.to_string(),
                            want: want.to_string(),
                        });
                    }
                    if opts.count_suboptimal {
                        let (sub, prop) = count_suboptimal(engine.last_log(), truth)?;
                        m.subopt_expansions = sub;
                        m.propagated_subopt = prop;
                    }
                }
                metrics.push(m);
            }

            // timed repetitions in shuffled order
            let mut times: Vec<Vec<u64>> = vec![Vec::new(); inst.queries.len()];
            run_opts.record_log = false;
            let mut order: Vec<usize> = (0..inst.queries.len()).collect();
            for rep in 0..opts.repetitions {
                let mut rng =
                    SplitMix64::new(opts.shuffle_seed ^ (rep as u64 + 1).wrapping_mul(0x9e37));
                let n = order.len();
                rng.sample_prefix(&mut order, n);
                for &qid in &order {
                    let (start, target) = inst.queries[qid];
                    let (_, m) = engine.solve(spec.algorithm, &run_opts, start, target)?;
                    let counted = &metrics[qid];
                    if m.expansions != counted.expansions
                        || m.insertions != counted.insertions
                        || m.scan_steps != counted.scan_steps
                        || m.length != counted.length
                    {
                        return Err(BenchError::NondeterministicMetrics {
                            algo: spec.label(),
                            map: inst.map_name.clone(),
                            query: qid,
                        });
                    }
                    times[qid].push(m.time_ns);
                }
            }

            for (qid, mut m) in metrics.into_iter().enumerate() {
                if !times[qid].is_empty() {
                    times[qid].sort_unstable();
                    m.time_ns = times[qid][times[qid].len() / 2];
                }
                report.rows.push(ReportRow {
                    domain: inst.domain.clone(),
                    map_name: inst.map_name.clone(),
                    algo: spec.algo_name().to_string(),
                    flags: spec.flag_string(),
                    r: inst.r,
                    seed: inst.seed,
                    query_id: qid,
                    metrics: m,
                });
            }
        }
    }
    Ok(report)
}

/// Improvement factors baseline/candidate over the queries both solved,
/// mirroring the benchmark tables: sums ratios for the count metrics, mean
/// ratio for runtime, and raw time-per-expansion for both sides.
#[derive(Clone, Copy, Debug)]
pub struct FactorSummary {
    pub queries: usize,
    pub hp_opt: f64,
    pub expansions: f64,
    pub subopt: Option<f64>,
    pub scan_steps: f64,
    pub runtime: f64,
    pub tpe_factor: f64,
    pub tpe_baseline_us: f64,
    pub tpe_candidate_us: f64,
}

impl SuiteReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let m = &row.metrics;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.domain,
                row.map_name,
                row.algo,
                row.flags,
                row.r,
                row.seed,
                row.query_id,
                m.found,
                m.length.to_f64(),
                m.expansions,
                m.insertions,
                m.hp_opt(),
                m.subopt_expansions,
                m.propagated_subopt,
                m.scan_steps,
                m.time_ns
            ));
        }
        out
    }

    /// Parses text produced by [`SuiteReport::to_csv`]. Lengths round-trip
    /// exactly; the derived `hp_opt` column is checked for consistency.
    pub fn from_csv(text: &str) -> Result<SuiteReport, BenchError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == CSV_HEADER => {}
            _ => {
                return Err(BenchError::CsvParse {
                    line: 1,
                    reason: "missing header".into(),
                })
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 16 {
                return Err(BenchError::CsvParse {
                    line: lineno,
                    reason: format!("expected 16 fields, got {}", f.len()),
                });
            }
            let bad = |what: &str| BenchError::CsvParse {
                line: lineno,
                reason: format!("bad {what}"),
            };
            let length: f64 = f[8].parse().map_err(|_| bad("length"))?;
            let expansions: u64 = f[9].parse().map_err(|_| bad("expansions"))?;
            let insertions: u64 = f[10].parse().map_err(|_| bad("insertions"))?;
            let hp_opt: u64 = f[11].parse().map_err(|_| bad("hp_opt"))?;
            if hp_opt != expansions + insertions {
                return Err(bad("hp_opt consistency"));
            }
            let metrics = QueryMetrics {
                expansions,
                insertions,
                subopt_expansions: f[12].parse().map_err(|_| bad("subopt"))?,
                propagated_subopt: f[13].parse().map_err(|_| bad("propagated"))?,
                scan_steps: f[14].parse().map_err(|_| bad("scan_steps"))?,
                time_ns: f[15].parse().map_err(|_| bad("time_ns"))?,
                length: float_to_cost(length),
                found: f[7].parse().map_err(|_| bad("found"))?,
            };
            rows.push(ReportRow {
                domain: f[0].to_string(),
                map_name: f[1].to_string(),
                algo: f[2].to_string(),
                flags: f[3].to_string(),
                r: f[4].parse().map_err(|_| bad("r"))?,
                seed: f[5].parse().map_err(|_| bad("seed"))?,
                query_id: f[6].parse().map_err(|_| bad("query_id"))?,
                metrics,
            });
        }
        Ok(SuiteReport { rows })
    }

    fn matched_pairs<'a>(
        &'a self,
        baseline: &str,
        candidate: &str,
    ) -> Vec<(&'a ReportRow, &'a ReportRow)> {
        let key = |r: &ReportRow| {
            (
                r.domain.clone(),
                r.map_name.clone(),
                r.seed,
                r.query_id,
                format!("{}", r.r),
            )
        };
        let mut base: HashMap<_, &ReportRow> = HashMap::new();
        for row in &self.rows {
            if row.label() == baseline {
                base.insert(key(row), row);
            }
        }
        let mut pairs = Vec::new();
        for row in &self.rows {
            if row.label() == candidate {
                if let Some(b) = base.get(&key(row)) {
                    if b.metrics.found && row.metrics.found {
                        pairs.push((*b, row));
                    }
                }
            }
        }
        pairs
    }

    /// Factors over all matched, solved queries.
    pub fn improvement_factors(&self, baseline: &str, candidate: &str) -> FactorSummary {
        let pairs = self.matched_pairs(baseline, candidate);
        let sum = |f: &dyn Fn(&QueryMetrics) -> u64| -> (f64, f64) {
            let b: u64 = pairs.iter().map(|(b, _)| f(&b.metrics)).sum();
            let c: u64 = pairs.iter().map(|(_, c)| f(&c.metrics)).sum();
            (b as f64, c as f64)
        };
        let (hp_b, hp_c) = sum(&|m| m.hp_opt());
        let (ex_b, ex_c) = sum(&|m| m.expansions);
        let (su_b, su_c) = sum(&|m| m.subopt_expansions);
        let (sc_b, sc_c) = sum(&|m| m.scan_steps);
        let (t_b, t_c) = sum(&|m| m.time_ns);
        let tpe_b = if ex_b > 0.0 { t_b / ex_b / 1000.0 } else { 0.0 };
        let tpe_c = if ex_c > 0.0 { t_c / ex_c / 1000.0 } else { 0.0 };
        FactorSummary {
            queries: pairs.len(),
            hp_opt: hp_b / hp_c,
            expansions: ex_b / ex_c,
            subopt: if su_b == 0.0 && su_c == 0.0 {
                None
            } else {
                Some(su_b / su_c)
            },
            scan_steps: sc_b / sc_c,
            runtime: t_b / t_c,
            tpe_factor: if tpe_c > 0.0 { tpe_b / tpe_c } else { f64::NAN },
            tpe_baseline_us: tpe_b,
            tpe_candidate_us: tpe_c,
        }
    }

    /// Per-map min/25%/50%/75%/max of the per-query runtime improvement
    /// factor, sorted by map name.
    pub fn time_factor_quantiles(
        &self,
        baseline: &str,
        candidate: &str,
    ) -> Vec<(String, [f64; 5])> {
        let pairs = self.matched_pairs(baseline, candidate);
        let mut per_map: HashMap<String, Vec<f64>> = HashMap::new();
        for (b, c) in pairs {
            if c.metrics.time_ns > 0 {
                per_map
                    .entry(b.map_name.clone())
                    .or_default()
                    .push(b.metrics.time_ns as f64 / c.metrics.time_ns as f64);
            }
        }
        let mut out: Vec<(String, [f64; 5])> = per_map
            .into_iter()
            .map(|(map, mut v)| {
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                (map, quantiles(&v))
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

impl ReportRow {
    pub fn label(&self) -> String {
        if self.flags.is_empty() {
            self.algo.clone()
        } else {
            format!("{}-{}", self.algo, self.flags)
        }
    }
}

/// min/25%/50%/75%/max of a sorted, non-empty slice.
pub fn quantiles(sorted: &[f64]) -> [f64; 5] {
    let n = sorted.len();
    let at = |q: f64| sorted[(((n - 1) as f64) * q).round() as usize];
    [sorted[0], at(0.25), at(0.5), at(0.75), sorted[n - 1]]
}

/// Nearest exact cost for a CSV length value; used only for round-tripping
/// reports, where lengths always originate from exact costs.
fn float_to_cost(len: f64) -> Cost {
    if len.is_infinite() {
        return Cost::INFINITY;
    }
    // reconstruct (cardinals, diagonals) from c + d*sqrt(2)
    let mut best = Cost::ZERO;
    let mut best_err = f64::INFINITY;
    let max_d = (len / std::f64::consts::SQRT_2).ceil() as i64 + 1;
    for d in 0..=max_d {
        let rem = len - d as f64 * std::f64::consts::SQRT_2;
        if rem < -1e-6 {
            break;
        }
        let c = rem.round().max(0.0) as u32;
        let cand = Cost::new(c, d as u32);
        let err = (cand.to_f64() - len).abs();
        if err < best_err {
            best_err = err;
            best = cand;
        }
    }
    best
}
