use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eon_spectra::conflict::{conflict_matrix, ConflictMatrix};
use eon_spectra::gof::{minimize_gof, minimize_gof_k2, RoutingScheme};
use eon_spectra::harness::seed::{stream, ROUTING_STREAM, SAMPLING_STREAM};
use eon_spectra::harness::{
    default_grid, export, increasing_order, minimum_probability_table, preset, run_scenario, sweep_p1,
    AssignmentMethod, ExportFormat, ScenarioConfig, ScenarioResult, TopologySpec, TrafficSpec,
};
use eon_spectra::rsa::{
    brute_force_optimal_mufi, build_conflict_graph, coloring_to_assignment, corollary_bounds, default_cap,
    exact_chromatic, exact_coloring, first_fit_assignment, greedy_coloring, mufi, mufi_bounds, route_requests,
    validate_assignment, ConflictGraph, FirstFitOrder, SpectrumAssignment,
};
use eon_spectra::topology::{all_candidate_paths, Node};
use eon_spectra::traffic::sample_requests;

#[derive(Parser)]
#[command(name = "eon-spectra", version, about = "Spectrum usage analysis for elastic optical networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario at a fixed routing scheme.
    Simulate(SimulateArgs),
    /// Run a scenario over p1 = 0.0, 0.1, ..., 1.0.
    Sweep(SweepArgs),
    /// Minimum intersecting probability of the six reference scenarios.
    TablePmin {
        /// Print JSON instead of a text table.
        #[arg(long)]
        json: bool,
    },
    /// Conflict matrix of a topology and traffic model.
    Cm(NetworkArgs),
    /// Optimal routing scheme for a conflict matrix.
    Gof(GofArgs),
    /// Sample and route requests; print them or their conflict graph as JSON.
    Route(RouteArgs),
    /// Assign spectrum to a conflict graph.
    Assign(AssignArgs),
    /// MUFI bounds of a conflict graph from its chromatic number.
    Bounds(BoundsArgs),
    /// Exact minimum MUFI of a small conflict graph.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// One of R-U, NSF-U, NJ-U, R-W, NSF-W, NJ-W.
    #[arg(long)]
    preset: Option<String>,
    /// TOML scenario file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replications per grid point.
    #[arg(long)]
    reps: Option<usize>,
    /// Requests per replication.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Guard band in slices.
    #[arg(long)]
    gb: Option<u32>,
    /// Spectrum assignment: first-fit or coloring-stack.
    #[arg(long)]
    method: Option<String>,
    /// First-fit vertex order: descending-weight, descending-degree or input.
    #[arg(long)]
    order: Option<String>,
}

impl ScenarioArgs {
    fn resolve(&self) -> anyhow::Result<ScenarioConfig> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), name) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let file: ScenarioConfig =
                    toml::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))?;
                match name {
                    Some(name) => overlay(preset(name)?, file, &text),
                    None => file,
                }
            }
            (None, Some(name)) => preset(name)?,
            (None, None) => bail!(validation("give --preset or --config")),
        };
        if let Some(v) = self.reps {
            cfg.replications = v;
        }
        if let Some(v) = self.n {
            cfg.n_requests = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.gb {
            cfg.guard_band = v;
        }
        let order = self.order.as_deref().map(str::parse::<FirstFitOrder>).transpose()?;
        match self.method.as_deref() {
            None => {
                if let (Some(order), AssignmentMethod::FirstFit { .. }) = (order, cfg.assignment) {
                    cfg.assignment = AssignmentMethod::FirstFit { order };
                }
            }
            Some("first-fit") => {
                cfg.assignment = AssignmentMethod::FirstFit {
                    order: order.unwrap_or_default(),
                }
            }
            Some("coloring-stack") => cfg.assignment = AssignmentMethod::ColoringStack,
            Some(other) => bail!(validation(format!("unknown assignment method '{other}'"))),
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Applies the keys present in a config file on top of a preset.
fn overlay(base: ScenarioConfig, file: ScenarioConfig, text: &str) -> ScenarioConfig {
    let keys: toml::Table = toml::from_str(text).unwrap_or_default();
    let has = |k: &str| keys.contains_key(k);
    ScenarioConfig {
        name: if has("name") { file.name } else { base.name },
        topology: if has("topology") { file.topology } else { base.topology },
        traffic: if has("traffic") { file.traffic } else { base.traffic },
        k: if has("k") { file.k } else { base.k },
        scheme: if has("scheme") { file.scheme } else { base.scheme },
        n_requests: if has("n_requests") { file.n_requests } else { base.n_requests },
        replications: if has("replications") { file.replications } else { base.replications },
        alpha: if has("alpha") { file.alpha } else { base.alpha },
        beta: if has("beta") { file.beta } else { base.beta },
        guard_band: if has("guard_band") { file.guard_band } else { base.guard_band },
        seed: if has("seed") { file.seed } else { base.seed },
        assignment: if has("assignment") { file.assignment } else { base.assignment },
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Probability of routing on the shortest path (K = 2).
    #[arg(long)]
    p1: Option<f64>,
    /// Full scheme as comma-separated probabilities.
    #[arg(long, conflicts_with = "p1")]
    scheme: Option<String>,
    /// Output file; format from the extension (.csv or .json).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Output file; format from the extension (.csv or .json).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NetworkArgs {
    /// Built-in name (ring, nsfnet, njlata) or a topology file.
    #[arg(long)]
    topology: String,
    /// uniform, weighted, or file:<path>.
    #[arg(long, default_value = "uniform")]
    traffic: String,
    /// Data-center nodes for weighted traffic, as `u,v`.
    #[arg(long, value_parser = parse_node_pair)]
    dc: Option<(Node, Node)>,
    /// Node probability of each data center.
    #[arg(long)]
    dc_mass: Option<f64>,
    /// Candidate paths per pair.
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Args)]
struct GofArgs {
    /// Conflict matrix as a JSON file or inline JSON, e.g. `[[1,0],[0,1]]`.
    #[arg(long)]
    cm: String,
    /// Use the two-path closed form.
    #[arg(long)]
    k2_closed_form: bool,
}

#[derive(Args)]
struct RouteArgs {
    #[command(flatten)]
    network: NetworkArgs,
    /// Routing scheme as comma-separated probabilities.
    #[arg(long)]
    scheme: String,
    /// Number of requests.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    alpha: u32,
    #[arg(long, default_value_t = 4)]
    beta: u32,
    #[arg(long, default_value_t = eon_spectra::harness::DEFAULT_SEED)]
    seed: u64,
    /// Print the conflict graph instead of the routed requests.
    #[arg(long)]
    graph: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AssignMethod {
    FirstFit,
    GreedyColoring,
    ExactColoring,
}

#[derive(Args)]
struct AssignArgs {
    /// Conflict graph JSON file (`-` for stdin).
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = 1)]
    gb: u32,
    #[arg(long, value_enum, default_value_t = AssignMethod::FirstFit)]
    method: AssignMethod,
    /// First-fit vertex order.
    #[arg(long, default_value = "descending-weight")]
    order: FirstFitOrder,
}

#[derive(Args)]
struct BoundsArgs {
    /// Conflict graph JSON file (`-` for stdin).
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = 1)]
    gb: u32,
    /// Chromatic number to use; computed exactly when omitted.
    #[arg(long)]
    chromatic: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    /// Conflict graph JSON file (`-` for stdin).
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = 1)]
    gb: u32,
    /// Largest slice index searched.
    #[arg(long)]
    cap: Option<u32>,
}

/// Input errors raised by the CLI itself.
#[derive(Debug)]
struct ValidationError(String);

impl std::fmt::Display for ValidationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ValidationError {}

fn validation(msg: impl Into<String>) -> ValidationError {
    ValidationError(msg.into())
}

fn parse_node_pair(s: &str) -> Result<(Node, Node), String> {
    let (a, b) = s.split_once(',').ok_or("expected `u,v`")?;
    let parse = |x: &str| x.trim().parse::<Node>().map_err(|e| format!("bad node '{x}': {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn parse_scheme(s: &str) -> anyhow::Result<RoutingScheme> {
    let probs = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| validation(format!("bad probability '{x}': {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RoutingScheme::new(probs)?)
}

fn read_input(source: &str) -> anyhow::Result<String> {
    if source == "-" {
        let mut text = String::new();
        io::Read::read_to_string(&mut io::stdin(), &mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(source).with_context(|| format!("reading {source}"))
    }
}

fn read_graph(source: &str) -> anyhow::Result<ConflictGraph> {
    Ok(serde_json::from_str(&read_input(source)?)?)
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_results(results: &[ScenarioResult], out: Option<&Path>) -> anyhow::Result<()> {
    if let Some(path) = out {
        export(results, ExportFormat::from_path(path), path)?;
        log::info!("wrote {} results to {}", results.len(), path.display());
    }
    Ok(())
}

fn summary_line(r: &ScenarioResult) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"));
    format!(
        "{:<6} p1={:<5} mufi={:>9.2} ±{:<7} p_emp={:<7} ±{:<7} p_theory={:.4}",
        r.scenario,
        r.p1.map_or_else(|| "-".to_string(), |p| format!("{p:.2}")),
        r.mean_mufi,
        r.mufi_ci.map_or_else(|| "-".to_string(), |x| format!("{x:.2}")),
        opt(r.mean_p_emp),
        opt(r.p_emp_ci),
        r.p_theory
    )
}

fn network(args: &NetworkArgs) -> anyhow::Result<(eon_spectra::topology::CandidatePathTable, eon_spectra::traffic::TrafficDistribution)> {
    let topology = args.topology.parse::<TopologySpec>()?.load()?;
    let traffic = TrafficSpec::parse(&args.traffic, args.dc, args.dc_mass)?.build(&topology)?;
    let table = all_candidate_paths(&topology, args.k)?;
    Ok((table, traffic))
}

#[derive(Serialize)]
struct AssignOutput {
    mufi: u32,
    colors: Option<usize>,
    assignment: SpectrumAssignment,
}

#[derive(Serialize)]
struct BoundsOutput {
    chromatic: usize,
    lower: u64,
    upper: u64,
    corollary_lower: u64,
    corollary_upper: u64,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            let mut cfg = args.scenario.resolve()?;
            if let Some(p1) = args.p1 {
                cfg = cfg.with_p1(p1)?;
            }
            if let Some(s) = &args.scheme {
                cfg.scheme = parse_scheme(s)?;
            }
            let result = run_scenario(&cfg)?;
            println!("{}", summary_line(&result));
            write_results(std::slice::from_ref(&result), args.out.as_deref())?;
        }
        Command::Sweep(args) => {
            let cfg = args.scenario.resolve()?;
            let results = sweep_p1(&cfg, &default_grid())?;
            for r in &results {
                println!("{}", summary_line(r));
            }
            write_results(&results, args.out.as_deref())?;
        }
        Command::TablePmin { json } => {
            let rows = minimum_probability_table()?;
            if json {
                print_json(&rows)?;
            } else {
                println!("{:<6} {:>8}  {:<18} certificate", "", "p_min", "scheme");
                for r in &rows {
                    println!(
                        "{:<6} {:>7.2}%  {:<18} {:?}",
                        r.scenario,
                        100.0 * r.solution.p_min,
                        r.solution.scheme.to_string(),
                        r.solution.certificate
                    );
                }
                println!("increasing order: {}", increasing_order(&rows).join(" < "));
            }
        }
        Command::Cm(args) => {
            let (table, traffic) = network(&args)?;
            let cm = conflict_matrix(&table, &traffic)?;
            println!("{}", serde_json::to_string(&cm)?);
            print!("{cm}");
        }
        Command::Gof(args) => {
            let text = if Path::new(&args.cm).exists() {
                read_input(&args.cm)?
            } else {
                args.cm.clone()
            };
            let cm: ConflictMatrix = serde_json::from_str(&text).map_err(|e| validation(format!("conflict matrix: {e}")))?;
            let solution = if args.k2_closed_form {
                minimize_gof_k2(&cm)?
            } else {
                minimize_gof(&cm)
            };
            println!("scheme      {}", solution.scheme);
            println!("p_min       {:.6}", solution.p_min);
            println!("certificate {}", serde_json::to_string(&solution.certificate)?.trim_matches('"'));
        }
        Command::Route(args) => {
            let (table, traffic) = network(&args.network)?;
            let scheme = parse_scheme(&args.scheme)?;
            let mut sampling = stream(args.seed, SAMPLING_STREAM);
            let mut routing = stream(args.seed, ROUTING_STREAM);
            let requests = sample_requests(&traffic, args.n, args.alpha, args.beta, &mut sampling)?;
            let routed = route_requests(&requests, &table, &scheme, &mut routing)?;
            if args.graph {
                print_json(&build_conflict_graph(&routed))?;
            } else {
                print_json(&routed)?;
            }
        }
        Command::Assign(args) => {
            let g = read_graph(&args.graph)?;
            let (assignment, colors) = match args.method {
                AssignMethod::FirstFit => (first_fit_assignment(&g, args.gb, args.order), None),
                AssignMethod::GreedyColoring => {
                    let c = greedy_coloring(&g);
                    (coloring_to_assignment(&g, &c, args.gb)?, Some(c.class_count()))
                }
                AssignMethod::ExactColoring => {
                    let c = exact_coloring(&g)?;
                    (coloring_to_assignment(&g, &c, args.gb)?, Some(c.class_count()))
                }
            };
            let violations = validate_assignment(&g, &assignment, args.gb)?;
            if let Some(v) = violations.first() {
                return Err(eon_spectra::Error::Invariant(format!("assignment invalid: {v}")).into());
            }
            print_json(&AssignOutput {
                mufi: mufi(&assignment)?,
                colors,
                assignment,
            })?;
        }
        Command::Bounds(args) => {
            let g = read_graph(&args.graph)?;
            let chromatic = match args.chromatic {
                Some(c) => c,
                None => exact_chromatic(&g)?,
            };
            let b = mufi_bounds(&g, chromatic, args.gb)?;
            let (alpha, beta) = (
                g.weights().iter().copied().min().unwrap_or(1),
                g.weights().iter().copied().max().unwrap_or(1),
            );
            let c = corollary_bounds(chromatic, args.gb, alpha, beta);
            print_json(&BoundsOutput {
                chromatic,
                lower: b.lower,
                upper: b.upper,
                corollary_lower: c.lower,
                corollary_upper: c.upper,
            })?;
        }
        Command::Oracle(args) => {
            let g = read_graph(&args.graph)?;
            let cap = args.cap.unwrap_or_else(|| default_cap(&g, args.gb));
            println!("{}", brute_force_optimal_mufi(&g, args.gb, cap)?);
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<eon_spectra::Error>() {
        Some(e) if e.is_internal() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
