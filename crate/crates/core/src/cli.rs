//! Command-line surface: single-graph commands plus a graph6 batch runner.
//!
//! Exit codes: 0 success, 1 violated inequality or oracle disagreement,
//! 2 usage/parse errors, 3 budget refusal.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num::BigInt;
use serde_json::{json, Value};

use crate::bounds::{self, VerifyConfig};
use crate::chromatic;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::listcolor::{self, ListAssignment};
use crate::nbc::{self, EdgeOrdering};
use crate::search;

pub const SCHEMA: &str = "1";

#[derive(Parser, Debug)]
#[command(name = "chromabound", version, about = "Exact chromatic and list-coloring bounds")]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone, Debug)]
struct GraphArgs {
    /// Edge-list file: an "n m" header line, then one "u v" line per edge
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    /// Inline graph6 string
    #[arg(long, value_name = "G6")]
    graph6: Option<String>,
    /// Generator spec: complete:N, cycle:N, path:N, star:N, kb:A,B, petersen, empty:N
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        match (&self.graph, &self.graph6, &self.gen) {
            (Some(p), None, None) => Graph::parse_edge_list(&fs::read_to_string(p)?),
            (None, Some(s), None) => Graph::from_graph6(s.trim()),
            (None, None, Some(spec)) => crate::graph::generators::from_spec(spec),
            _ => Err(Error::InvalidInput(
                "exactly one of --graph, --graph6, --gen is required".into(),
            )),
        }
    }
}

#[derive(Args, Clone, Debug)]
struct EtaArgs {
    /// Edge ordering: "canonical", "random:SEED", or a file of labels
    #[arg(long, default_value = "canonical", value_name = "SPEC")]
    eta: String,
}

impl EtaArgs {
    fn load(&self, m: usize) -> Result<EdgeOrdering> {
        parse_eta(&self.eta, m)
    }
}

fn parse_eta(spec: &str, m: usize) -> Result<EdgeOrdering> {
    if spec == "canonical" {
        Ok(EdgeOrdering::canonical(m))
    } else if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad eta seed in {:?}", spec)))?;
        Ok(EdgeOrdering::random(m, seed))
    } else {
        EdgeOrdering::parse(&fs::read_to_string(spec)?, m)
    }
}

#[derive(Args, Clone, Debug)]
struct ListsArgs {
    /// Lists file: one "v: c1 c2 ..." line per vertex
    #[arg(long, value_name = "PATH")]
    lists: Option<PathBuf>,
    /// Random k-assignment: "k=K,universe=U,seed=S"
    #[arg(long, value_name = "PARAMS")]
    random_lists: Option<String>,
}

impl ListsArgs {
    fn load(&self, n: usize) -> Result<Option<ListAssignment>> {
        match (&self.lists, &self.random_lists) {
            (Some(_), Some(_)) => Err(Error::InvalidInput(
                "--lists and --random-lists are mutually exclusive".into(),
            )),
            (Some(p), None) => Ok(Some(ListAssignment::parse(&fs::read_to_string(p)?, n)?)),
            (None, Some(params)) => {
                let (k, universe, seed) = parse_random_lists(params)?;
                Ok(Some(ListAssignment::random(n, k, universe, seed)))
            }
            (None, None) => Ok(None),
        }
    }
}

fn parse_random_lists(params: &str) -> Result<(usize, usize, u64)> {
    let (mut k, mut universe, mut seed) = (None, None, None);
    for part in params.split(',') {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("bad --random-lists part {:?}", part)))?;
        let bad = || Error::InvalidInput(format!("bad --random-lists value {:?}", part));
        match key.trim() {
            "k" => k = Some(val.trim().parse().map_err(|_| bad())?),
            "universe" => universe = Some(val.trim().parse().map_err(|_| bad())?),
            "seed" => seed = Some(val.trim().parse().map_err(|_| bad())?),
            _ => return Err(Error::InvalidInput(format!("unknown key {:?}", key))),
        }
    }
    match (k, universe, seed) {
        (Some(k), Some(u), Some(s)) => Ok((k, u, s)),
        _ => Err(Error::InvalidInput(
            "--random-lists needs k=K,universe=U,seed=S".into(),
        )),
    }
}

#[derive(Args, Clone, Debug)]
struct OutArgs {
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

fn default_budget(fallback: u128) -> u128 {
    std::env::var("CHROMABOUND_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(fallback)
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Chromatic polynomial by deletion-contraction and by the Whitney
    /// expansion, with an agreement check
    Chromatic {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        eta: EtaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// NBC counts, total and per edge
    NbcProfile {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        eta: EtaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The per-edge polynomial Q(G, e, x)
    Qpoly {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        eta: EtaArgs,
        /// Edge index into the canonical sorted edge list
        #[arg(long)]
        edge: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// P(G, L) by backtracking and by the forest expansion, with an
    /// agreement check
    Count {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        eta: EtaArgs,
        #[command(flatten)]
        lists: ListsArgs,
        #[arg(long)]
        budget: Option<u128>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The gap P(G, L) - P(G, k)
    Gap {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        eta: EtaArgs,
        #[command(flatten)]
        lists: ListsArgs,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Verify the inequality suite on one instance
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        eta: EtaArgs,
        #[command(flatten)]
        lists: ListsArgs,
        #[arg(long)]
        k: usize,
        /// "all", "thm1.1", or "cor1.2"
        #[arg(long, default_value = "all")]
        target: String,
        /// Color universe for the exhaustive cor1.2 check
        #[arg(long)]
        universe: Option<usize>,
        #[arg(long)]
        budget: Option<u128>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimize P(G, L) over k-assignments
    SearchMin {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        universe: Option<usize>,
        /// "exact" or "heuristic"
        #[arg(long, default_value = "exact")]
        method: String,
        /// Neighbor-evaluation budget for the heuristic
        #[arg(long, default_value_t = 2000)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u128>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimum-found P(G, L) vs P(G, k) for k = 2..=k-max
    Scan {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_name = "K")]
        k_max: usize,
        #[arg(long)]
        universe: Option<usize>,
        #[arg(long)]
        budget: Option<u128>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the full verifier over a file of graph6 lines
    Batch {
        /// File with one graph6 string per line
        #[arg(long, value_name = "PATH")]
        graph6_file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Universe for the random k-assignments (default 2k)
        #[arg(long)]
        universe: Option<usize>,
        /// Base seed; graph i uses seed + i for its ordering and lists
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use random edge orderings instead of canonical
        #[arg(long, default_value_t = false)]
        random_eta: bool,
        /// Worker threads (0 = rayon default)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Parses argv and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap help/version exit 0; real usage errors exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                Error::BudgetExceeded { .. } => 3,
                Error::OracleMismatch(_) => 1,
                _ => 2,
            }
        }
    }
}

fn emit(out: &OutArgs, value: &Value) -> Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(value).expect("serializable"));
    match &out.json {
        Some(path) => fs::write(path, text)?,
        None => print!("{}", text),
    }
    Ok(())
}

fn graph_header(g: &Graph) -> Value {
    json!({ "graph6": g.to_graph6(), "n": g.n(), "m": g.m() })
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Chromatic { graph, eta, out } => {
            let g = graph.load()?;
            let eta = eta.load(g.m())?;
            let dc = chromatic::chromatic_deletion_contraction(&g);
            let whitney = nbc::chromatic_via_whitney(&g, &eta);
            let agree = dc == whitney;
            emit(
                &out,
                &json!({
                    "schema": SCHEMA,
                    "command": "chromatic",
                    "graph": graph_header(&g),
                    "coefficients": dc.coeff_strings(),
                    "coefficients_whitney": whitney.coeff_strings(),
                    "agreement": agree,
                }),
            )?;
            Ok(if agree { 0 } else { 1 })
        }
        Cmd::NbcProfile { graph, eta, out } => {
            let g = graph.load()?;
            let eta = eta.load(g.m())?;
            let profile = nbc::nbc_profile(&g, &eta);
            emit(
                &out,
                &json!({
                    "schema": SCHEMA,
                    "command": "nbc-profile",
                    "graph": graph_header(&g),
                    "eta": eta.labels(),
                    "profile": profile,
                }),
            )?;
            Ok(0)
        }
        Cmd::Qpoly {
            graph,
            eta,
            edge,
            out,
        } => {
            let g = graph.load()?;
            if edge >= g.m() {
                return Err(Error::InvalidInput(format!(
                    "edge index {} out of range 0..{}",
                    edge,
                    g.m()
                )));
            }
            let eta = eta.load(g.m())?;
            let q = chromatic::q_poly(&g, &eta, edge);
            emit(
                &out,
                &json!({
                    "schema": SCHEMA,
                    "command": "qpoly",
                    "graph": graph_header(&g),
                    "edge": edge,
                    "endpoints": [g.edge(edge).0, g.edge(edge).1],
                    "coefficients": q.coeff_strings(),
                }),
            )?;
            Ok(0)
        }
        Cmd::Count {
            graph,
            eta,
            lists,
            budget,
            out,
        } => {
            let g = graph.load()?;
            let eta = eta.load(g.m())?;
            let la = lists.load(g.n())?.ok_or_else(|| {
                Error::InvalidInput("count needs --lists or --random-lists".into())
            })?;
            let budget = budget.unwrap_or_else(|| default_budget(listcolor::DEFAULT_LIST_BUDGET));
            let direct = listcolor::count_list_colorings_budgeted(&g, &la, budget)?;
            let via_nbc = listcolor::count_list_colorings_nbc(&g, &eta, &la);
            let agree = direct == via_nbc;
            emit(
                &out,
                &json!({
                    "schema": SCHEMA,
                    "command": "count",
                    "graph": graph_header(&g),
                    "lists": la.to_text(),
                    "count": direct.to_string(),
                    "count_nbc": via_nbc.to_string(),
                    "agreement": agree,
                }),
            )?;
            Ok(if agree { 0 } else { 1 })
        }
        Cmd::Gap {
            graph,
            eta,
            lists,
            k,
            out,
        } => {
            let g = graph.load()?;
            let eta = eta.load(g.m())?;
            let la = lists.load(g.n())?.ok_or_else(|| {
                Error::InvalidInput("gap needs --lists or --random-lists".into())
            })?;
            let gap = listcolor::gap(&g, &eta, &la, k)?;
            let p_gk = chromatic::chromatic_deletion_contraction(&g).eval_int(&BigInt::from(k));
            emit(
                &out,
                &json!({
                    "schema": SCHEMA,
                    "command": "gap",
                    "graph": graph_header(&g),
                    "k": k,
                    "lists": la.to_text(),
                    "gap": gap.to_string(),
                    "p_gk": p_gk.to_string(),
                }),
            )?;
            Ok(0)
        }
        Cmd::Verify {
            graph,
            eta,
            lists,
            k,
            target,
            universe,
            budget,
            out,
        } => {
            let g = graph.load()?;
            let eta = eta.load(g.m())?;
            let budget = budget.unwrap_or_else(|| default_budget(bounds::DEFAULT_ENUM_BUDGET));
            let report = match target.as_str() {
                "all" | "thm1.1" => {
                    let la = lists.load(g.n())?.unwrap_or_else(|| {
                        ListAssignment::constant(g.n(), &(1..=k as u32).collect::<Vec<_>>())
                    });
                    if target == "all" {
                        bounds::verify_all(&g, &eta, &la, k, &VerifyConfig::default())?
                    } else {
                        bounds::BoundReport {
                            entries: bounds::verify_theorem_1_1(&g, &eta, &la, k)?,
                        }
                    }
                }
                "cor1.2" => {
                    let u = universe.unwrap_or(k + 2);
                    bounds::BoundReport {
                        entries: vec![bounds::verify_corollary_1_2(&g, k, u, budget)?],
                    }
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown --target {:?} (expected all, thm1.1, cor1.2)",
                        other
                    )))
                }
            };
            let violated = report.any_violated();
            emit(
                &out,
                &json!({
                    "schema": SCHEMA,
                    "command": "verify",
                    "graph": graph_header(&g),
                    "k": k,
                    "target": target,
                    "report": report,
                }),
            )?;
            Ok(if violated { 1 } else { 0 })
        }
        Cmd::SearchMin {
            graph,
            k,
            universe,
            method,
            iters,
            seed,
            budget,
            out,
        } => {
            let g = graph.load()?;
            let u = universe.unwrap_or_else(|| search::default_universe(g.n(), k));
            let budget = budget.unwrap_or_else(|| default_budget(search::DEFAULT_SEARCH_BUDGET));
            let result = match method.as_str() {
                "exact" => search::exact_pl_budgeted(&g, k, u, budget)?,
                "heuristic" => search::heuristic_min(&g, k, u, iters, seed)?,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown --method {:?} (expected exact or heuristic)",
                        other
                    )))
                }
            };
            emit(&out, &search_result_json(&g, &result))?;
            Ok(0)
        }
        Cmd::Scan {
            graph,
            k_max,
            universe,
            budget,
            out,
        } => {
            let g = graph.load()?;
            let budget = budget.unwrap_or_else(|| default_budget(search::DEFAULT_SEARCH_BUDGET));
            let rows = search::threshold_scan(&g, k_max, universe, budget)?;
            let m = g.m();
            let guaranteed_ok = rows
                .iter()
                .filter(|r| r.k + 1 >= m)
                .all(|r| r.equal);
            emit(
                &out,
                &json!({
                    "schema": SCHEMA,
                    "command": "scan",
                    "graph": graph_header(&g),
                    "rows": rows
                        .iter()
                        .map(|r| {
                            json!({
                                "k": r.k,
                                "universe": r.universe,
                                "min_found": r.min_found.to_string(),
                                "p_gk": r.p_gk.to_string(),
                                "equal": r.equal,
                                "method": r.method,
                            })
                        })
                        .collect::<Vec<_>>(),
                }),
            )?;
            Ok(if guaranteed_ok { 0 } else { 1 })
        }
        Cmd::Batch {
            graph6_file,
            k,
            universe,
            seed,
            random_eta,
            jobs,
            out,
        } => run_batch(graph6_file, k, universe, seed, random_eta, jobs, out),
    }
}

fn search_result_json(g: &Graph, r: &search::SearchResult) -> Value {
    json!({
        "schema": SCHEMA,
        "command": "search-min",
        "graph": graph_header(g),
        "value": r.value.to_string(),
        "method": r.method,
        "iterations": r.iterations,
        "seed": r.seed,
        "exhaustive": r.exhaustive,
        "universe": r.universe,
        "assignment": r.assignment.to_text(),
    })
}

fn run_batch(
    graph6_file: PathBuf,
    k: usize,
    universe: Option<usize>,
    seed: u64,
    random_eta: bool,
    jobs: usize,
    out: OutArgs,
) -> Result<i32> {
    use rayon::prelude::*;

    let text = fs::read_to_string(&graph6_file)?;
    let lines: Vec<(usize, String)> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .enumerate()
        .collect();
    let universe = universe.unwrap_or(2 * k);

    let work = |(index, line): &(usize, String)| -> Value {
        match verify_one(line, k, universe, seed + *index as u64, random_eta) {
            Ok((g, report)) => json!({
                "index": index,
                "graph6": line,
                "n": g.n(),
                "m": g.m(),
                "report": report,
            }),
            Err(e) => json!({
                "index": index,
                "graph6": line,
                "error": e.to_string(),
            }),
        }
    };
    let results: Vec<Value> = if jobs == 1 {
        lines.iter().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {}", e)))?;
        pool.install(|| lines.par_iter().map(work).collect())
    };

    let mut holds = 0u64;
    let mut violated = 0u64;
    let mut not_applicable = 0u64;
    let mut errors = 0u64;
    for r in &results {
        if r.get("error").is_some() {
            errors += 1;
            continue;
        }
        for entry in r["report"]["entries"].as_array().expect("entries array") {
            match entry["verdict"].as_str() {
                Some("holds") => holds += 1,
                Some("violated") => violated += 1,
                Some("not-applicable") => not_applicable += 1,
                _ => unreachable!("unknown verdict"),
            }
        }
    }
    emit(
        &out,
        &json!({
            "schema": SCHEMA,
            "command": "batch",
            "k": k,
            "universe": universe,
            "seed": seed,
            "graphs": results,
            "summary": {
                "graphs": lines.len(),
                "holds": holds,
                "violated": violated,
                "not_applicable": not_applicable,
                "errors": errors,
            },
        }),
    )?;
    Ok(if violated > 0 { 1 } else { 0 })
}

fn verify_one(
    line: &str,
    k: usize,
    universe: usize,
    seed: u64,
    random_eta: bool,
) -> Result<(Graph, bounds::BoundReport)> {
    let g = Graph::from_graph6(line)?;
    let eta = if random_eta {
        EdgeOrdering::random(g.m(), seed)
    } else {
        EdgeOrdering::canonical(g.m())
    };
    let la = ListAssignment::random(g.n(), k, universe, seed);
    let report = bounds::verify_all(&g, &eta, &la, k, &VerifyConfig::default())?;
    Ok((g, report))
}
