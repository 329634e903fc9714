use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use minimax_bandit::bandit::init_cover;
use minimax_bandit::experiment::{run_experiment, write_all, ConfigEntries, ConfigError, ExperimentConfig};
use minimax_bandit::io::{load_network, Format, LoadError, Network, ParamDefaults};
use minimax_bandit::oracle::{brute_force_minimax, minimax, minimax_dijkstra, minimax_mst, DEFAULT_PATH_CAP};

const EXIT_CONFIG: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "minimax-bandit", version, about = "Learn bottleneck paths on networks with stochastic edge weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a `key = value` config file.
    Run(Box<RunArgs>),
    /// Print the minimax path between two vertices under fixed weights.
    Bottleneck(BottleneckArgs),
    /// Load a graph and report its size and, optionally, query coverage.
    Validate(ValidateArgs),
}

/// Each flag overrides the config key of the same name.
#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    directed: Option<String>,
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    agents: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "noise_sd", alias = "noise-sd")]
    noise_sd: Option<String>,
    #[arg(long = "prior_sd", alias = "prior-sd")]
    prior_sd: Option<String>,
    #[arg(long = "env_prior_sd", alias = "env-prior-sd")]
    env_prior_sd: Option<String>,
    #[arg(long = "ucb_schedule", alias = "ucb-schedule")]
    ucb_schedule: Option<String>,
    #[arg(long = "mc_samples", alias = "mc-samples")]
    mc_samples: Option<String>,
    #[arg(long)]
    regret: Option<String>,
    #[arg(long = "path_cap", alias = "path-cap")]
    path_cap: Option<String>,
    #[arg(long = "fixed-instance", alias = "fixed_instance")]
    fixed_instance: bool,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long = "exact_mc_samples", alias = "exact-mc-samples")]
    exact_mc_samples: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let keyed = [
            ("graph", &self.graph),
            ("format", &self.format),
            ("directed", &self.directed),
            ("source", &self.source),
            ("target", &self.target),
            ("agents", &self.agents),
            ("horizon", &self.horizon),
            ("reps", &self.reps),
            ("seed", &self.seed),
            ("noise_sd", &self.noise_sd),
            ("prior_sd", &self.prior_sd),
            ("env_prior_sd", &self.env_prior_sd),
            ("ucb_schedule", &self.ucb_schedule),
            ("mc_samples", &self.mc_samples),
            ("regret", &self.regret),
            ("path_cap", &self.path_cap),
            ("workers", &self.workers),
            ("out", &self.out),
            ("exact_mc_samples", &self.exact_mc_samples),
        ];
        let mut out: Vec<_> = keyed.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect();
        if self.fixed_instance {
            out.push(("fixed_instance", "true".into()));
        }
        out
    }
}

#[derive(Args)]
struct GraphArgs {
    graph: PathBuf,
    /// Defaults to the file extension: `.net` is Pajek, anything else an edge list.
    #[arg(long)]
    format: Option<String>,
    /// Read an edge list as undirected.
    #[arg(long)]
    undirected: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightColumn {
    Mu0,
    Sigma,
    Varsigma0,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleChoice {
    Auto,
    Dijkstra,
    Mst,
    Brute,
}

#[derive(Args)]
struct BottleneckArgs {
    #[command(flatten)]
    graph: GraphArgs,
    source: String,
    target: String,
    /// Edge column used as the weight.
    #[arg(long, value_enum, default_value = "mu0")]
    weights: WeightColumn,
    #[arg(long, value_enum, default_value = "auto")]
    oracle: OracleChoice,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, requires = "target")]
    source: Option<String>,
    #[arg(long, requires = "source")]
    target: Option<String>,
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn load(args: &GraphArgs) -> Result<Network, ExitCode> {
    let format = match &args.format {
        Some(f) => f.parse::<Format>().map_err(|e| fail(EXIT_CONFIG, e))?,
        None => Format::from_path(&args.graph),
    };
    load_network(&args.graph, format, !args.undirected, ParamDefaults::default())
        .map_err(|e: LoadError| fail(EXIT_DATA, e))
}

fn vertex(network: &Network, name: &str) -> Result<usize, ExitCode> {
    network.vertex_id(name).ok_or_else(|| fail(EXIT_DATA, format!("vertex `{name}` is not in the graph")))
}

fn run(args: Box<RunArgs>) -> Result<(), ExitCode> {
    let config_err = |e: ConfigError| fail(EXIT_CONFIG, e);
    let mut entries = ConfigEntries::from_file(&args.config).map_err(config_err)?;
    for (key, value) in args.overrides() {
        entries.set(key, value).map_err(config_err)?;
    }
    let config = ExperimentConfig::from_entries(&entries).map_err(config_err)?;
    let result = run_experiment(&config).map_err(|e| fail(e.exit_code() as u8, e))?;
    write_all(&result, &config.out)
        .map_err(|e| fail(EXIT_RUNTIME, format!("writing {}: {e}", config.out.display())))?;
    for s in &result.summaries {
        println!("{:<14} T={:<7} mean={:.4} sd={:.4}", s.agent, s.horizon(), s.final_mean(), s.final_sd());
    }
    println!("results written to {}", config.out.display());
    Ok(())
}

fn bottleneck(args: BottleneckArgs) -> Result<(), ExitCode> {
    let network = load(&args.graph)?;
    let (s, t) = (vertex(&network, &args.source)?, vertex(&network, &args.target)?);
    let weights = match args.weights {
        WeightColumn::Mu0 => &network.params.prior_mean,
        WeightColumn::Sigma => &network.params.noise_sd,
        WeightColumn::Varsigma0 => &network.params.prior_sd,
    };
    let g = &network.graph;
    let result = match args.oracle {
        OracleChoice::Auto => minimax(g, weights, s, t),
        OracleChoice::Dijkstra => minimax_dijkstra(g, weights, s, t),
        OracleChoice::Mst => minimax_mst(g, weights, s, t),
        OracleChoice::Brute => brute_force_minimax(g, weights, s, t, DEFAULT_PATH_CAP),
    }
    .map_err(|e| fail(EXIT_RUNTIME, e))?;

    let names: Vec<&str> =
        result.path.vertices(g).expect("oracle paths are valid").into_iter().map(|v| network.vertex_name(v)).collect();
    let edge = g.edge(result.bottleneck_edge);
    let edges: Vec<String> = result.path.edges.iter().map(|e| e.to_string()).collect();
    println!("path: {}", names.join(" -> "));
    println!("edges: {}", edges.join(" "));
    println!(
        "bottleneck edge: {} ({} -> {})",
        result.bottleneck_edge,
        network.vertex_name(edge.tail),
        network.vertex_name(edge.head)
    );
    println!("bottleneck value: {}", result.bottleneck_value);
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<(), ExitCode> {
    let network = load(&args.graph)?;
    let g = &network.graph;
    println!("{}", if g.is_directed() { "directed" } else { "undirected" });
    println!("vertices: {}", g.vertex_count());
    println!("edges: {}", g.edge_count());
    println!("average degree: {:.4}", g.average_degree());
    if let (Some(source), Some(target)) = (&args.source, &args.target) {
        let (s, t) = (vertex(&network, source)?, vertex(&network, target)?);
        let cover = init_cover(g, s, t).map_err(|e| fail(EXIT_DATA, e))?;
        println!("usable edges: {}", cover.usable_count());
        println!("initial cover paths: {}", cover.paths.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Bottleneck(args) => bottleneck(args),
        Command::Validate(args) => validate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
