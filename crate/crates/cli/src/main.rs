//! `lscg`: command-line harness for local sparse connected subgraph queries.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use lscg::generate::{generate, GeneratorKind};
use lscg::graph::write_edge_list;
use lscg::oracle::exact_strong_connectivities;
use lscg::report::{
    scaling_sweep, ConfigEcho, ExperimentReport, GraphSource, GraphSummary, MaterializeSummary, QuerySummary,
    ReportBody,
};
use lscg::suites::{run_suite, DEFAULT_SEED, SUITES};
use lscg::{materialize_subgraph, query_edge, Config, EdgeRef, Graph, TesterConfig};

#[derive(Debug, Parser)]
#[command(name = "lscg", version, about = "Local sparse connected subgraph queries and experiments")]
struct Cli {
    /// Edge-list file: header `n m`, then one `u v` pair per line.
    #[arg(long, global = true, conflicts_with = "gen")]
    graph: Option<PathBuf>,

    /// Generator name (gnp, complete, barbell, random_tree, random_regular,
    /// star, path, petersen), optionally as `name:arg,arg`.
    #[arg(long, global = true)]
    gen: Option<String>,

    /// Generator arguments, comma separated or repeated.
    #[arg(long = "gen-args", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    gen_args: Vec<String>,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Threshold below which guesses are not tested.
    #[arg(long = "T", global = true, default_value_t = 1.0)]
    threshold: f64,

    /// Error exponent.
    #[arg(long, global = true, default_value_t = 2.0)]
    d: f64,

    /// Multiplier on both sampling constants.
    #[arg(long, global = true, default_value_t = 1.0)]
    scale: f64,

    #[arg(long = "log-base", global = true, default_value_t = 2.0)]
    log_base: f64,

    /// Fixed number of tester rounds instead of ⌈log_{3/2} n⌉.
    #[arg(long, global = true)]
    rounds: Option<usize>,

    /// Write a JSON report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide membership of edge (U, V).
    Query { u: usize, v: usize },
    /// Query every edge and report the accepted subgraph.
    Materialize {
        /// Write the accepted edges as an edge list.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean and max probes per random query for each threshold.
    Scaling {
        #[arg(long = "t-list", value_delimiter = ',', required = true)]
        t_list: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        queries: usize,
    },
    /// Run an acceptance suite, or `all`.
    Verify { suite: String },
    /// Exact strong connectivities as `u v s_e` lines.
    Oracle {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Suite,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Suite) => ExitCode::from(2),
    }
}

fn config(cli: &Cli) -> Result<Config, Failure> {
    let config = Config {
        threshold: cli.threshold,
        tester: TesterConfig { d: cli.d, c_scale: cli.scale, log_base: cli.log_base, rounds_override: cli.rounds },
        seed: cli.seed,
    };
    config.validate()?;
    Ok(config)
}

fn load_graph(cli: &Cli) -> Result<(Graph, GraphSource), Failure> {
    match (&cli.graph, &cli.gen) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok((Graph::parse_edge_list(&text)?, GraphSource::File { path: path.display().to_string() }))
        }
        (None, Some(name)) => {
            let kind: GeneratorKind = if cli.gen_args.is_empty() {
                name.parse()?
            } else {
                GeneratorKind::from_args(name, &cli.gen_args)?
            };
            Ok((generate(kind, cli.seed)?, GraphSource::Generated { generator: kind, seed: cli.seed }))
        }
        (None, None) => Err(Failure::Input("no input graph: pass --graph FILE or --gen KIND".into())),
    }
}

fn write_json(cli: &Cli, report: &ExperimentReport) -> Result<(), Failure> {
    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(report)?;
        fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let started = Instant::now();
    let config = config(cli)?;

    if let Command::Verify { suite } = &cli.command {
        let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
        let mut results = Vec::new();
        for name in names {
            let r = run_suite(name, cli.seed)?;
            println!("{r}");
            results.push(r);
        }
        let passed = results.iter().all(|r| r.passed);
        let body = ReportBody::Verify { suite: suite.clone(), criteria: results };
        write_json(cli, &ExperimentReport::new(ConfigEcho::new(&config, None), None, body, started.elapsed().as_secs_f64()))?;
        return if passed { Ok(()) } else { Err(Failure::Suite) };
    }

    let (graph, source) = load_graph(cli)?;
    let summary = GraphSummary::of(&graph);
    let body = match &cli.command {
        Command::Query { u, v } => {
            let e = EdgeRef::new(*u, *v)?;
            let d = query_edge(&graph.view(), e, &config)?;
            println!(
                "{} {} {}: s_hat {} g* {} below_threshold {} keep_probability {} tester_calls {} probes {}",
                e.a,
                e.b,
                if d.accepted { "accept" } else { "reject" },
                d.s_hat,
                d.g_star.map_or("-".to_string(), |g| g.to_string()),
                d.below_threshold,
                d.keep_probability,
                d.tester_calls,
                d.probes.total()
            );
            ReportBody::Query(QuerySummary::from(&d))
        }
        Command::Materialize { out } => {
            if !summary.connected {
                eprintln!("warning: input graph is disconnected; E* connectivity is not guaranteed");
            }
            let outcome = materialize_subgraph(&graph, &config)?;
            let s = MaterializeSummary::new(&graph, &config, &outcome);
            let text = write_edge_list(graph.n(), outcome.edges.iter().copied());
            if out.is_some() {
                write_out(out, &text)?;
            }
            println!(
                "n {} m {} |E*| {} connected {} below_threshold {} tester_calls {} probes total {} mean {:.1} max {}",
                graph.n(),
                graph.m(),
                s.e_star,
                s.output_connected,
                s.accepted_below_threshold,
                s.tester_calls,
                s.probes.total,
                s.probes.mean_per_query,
                s.probes.max_per_query
            );
            if !config.threshold_in_regime(graph.n()) {
                eprintln!("note: T = {} is not above log^2 n", config.threshold);
            }
            ReportBody::Materialize(s)
        }
        Command::Scaling { t_list, queries } => {
            let rows = scaling_sweep(&graph, t_list, &config, *queries)?;
            println!("T\tmean_probes\tmax_probes\tbelow_threshold");
            for r in &rows {
                println!("{}\t{:.1}\t{}\t{}", r.threshold, r.mean_probes, r.max_probes, r.below_threshold);
            }
            ReportBody::Scaling { rows }
        }
        Command::Oracle { out } => {
            let map = exact_strong_connectivities(&graph)?;
            write_out(out, &map.to_text())?;
            ReportBody::Oracle {
                edges: map.values.len(),
                min_s: map.values.values().copied().min().unwrap_or(0),
                max_s: map.values.values().copied().max().unwrap_or(0),
                reciprocal_sum: map.reciprocal_sum(),
            }
        }
        Command::Verify { .. } => unreachable!(),
    };
    write_json(
        cli,
        &ExperimentReport::new(ConfigEcho::new(&config, Some(source)), Some(summary), body, started.elapsed().as_secs_f64()),
    )
}
