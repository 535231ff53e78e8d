use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use relay_core::assignment::{solve_kcard, KCardInstance};
use relay_core::topology::{generate, TopologyConfig};
use relay_core::RadioParams;
use relay_sim::config::{Algorithm, Overrides, ScenarioConfig};
use relay_sim::csv::{to_csv_string, write_csv_file};
use relay_sim::runner::run_scenario;

/// Relay-selection experiments for uplink M2M networks.
#[derive(Parser)]
#[command(name = "relay-sim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario sweep and emit CSV metrics.
    Scenario(ScenarioArgs),
    /// Solve one k-cardinality assignment instance from a matrix file.
    SolveKcard {
        /// Plain-text matrix: whitespace-separated weights, one row per line.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Generate a network instance and dump it as JSON.
    Instance {
        #[arg(long, default_value_t = relay_sim::DEFAULT_SEED)]
        seed: u64,
        /// Number of sources.
        #[arg(long)]
        ns: usize,
        /// Number of relays.
        #[arg(long)]
        nr: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario preset, 1 through 5.
    #[arg(long)]
    id: u8,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    ns_max: Option<usize>,
    #[arg(long)]
    ns_step: Option<usize>,
    /// LTE channel counts, comma separated; one curve each.
    #[arg(long, value_delimiter = ',')]
    channels: Option<Vec<u32>>,
    /// Fading factors, comma separated; one curve each.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Algorithms to run, comma separated (orsa,mrsa,wrsa,rrsa).
    #[arg(long, value_delimiter = ',')]
    algos: Option<Vec<Algorithm>>,
    /// Joint BS budget for ORSA; pass `--strict-quota false` for the relaxed
    /// accounting where relayed paths do not consume channels.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    strict_quota: Option<bool>,
    /// JSON file with the same field names as these flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cap the worker thread count.
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() {
    if let Err(err) = run(Cli::parse()) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Scenario(args) => scenario(args),
        Command::SolveKcard { matrix, k } => solve_kcard_cmd(&matrix, k),
        Command::Instance { seed, ns, nr, out } => instance(seed, ns, nr, out),
    }
}

fn scenario(args: ScenarioArgs) -> Result<()> {
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("setting the worker count")?;
    }
    let mut config = ScenarioConfig::preset(args.id)?;
    let mut overrides = Overrides::default();
    if let Some(path) = &args.config {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        overrides =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    }
    let flag_overrides = Overrides {
        runs: args.runs,
        seed: args.seed,
        ns_max: args.ns_max,
        ns_step: args.ns_step,
        channels: args.channels,
        alpha: args.alpha,
        algos: args.algos,
        strict_quota: args.strict_quota,
        fading_probability: None,
        noise_power_w: None,
    };
    config.apply(&overrides.merged_with(flag_overrides));

    let rows = run_scenario(&config)?;
    match &args.out {
        Some(path) => write_csv_file(&rows, path)?,
        None => print!("{}", to_csv_string(&rows)),
    }
    Ok(())
}

fn solve_kcard_cmd(path: &PathBuf, k: usize) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut weights: Vec<Vec<f64>> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .with_context(|| format!("line {}: bad weight {tok:?}", line_no + 1))
            })
            .collect::<Result<_>>()?;
        weights.push(row);
    }
    if weights.is_empty() {
        bail!("{}: empty matrix", path.display());
    }
    let m = weights[0].len();
    if weights.iter().any(|row| row.len() != m) {
        bail!("{}: rows have differing lengths", path.display());
    }
    if weights.iter().flatten().any(|w| !w.is_finite()) {
        bail!("{}: weights must be finite", path.display());
    }
    if k > weights.len().min(m) {
        bail!("k = {k} exceeds min(n, m) = {}", weights.len().min(m));
    }
    let solution = solve_kcard(&KCardInstance::new(weights, k));
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for &(i, j) in &solution.edges {
        writeln!(out, "edge {i} {j}")?;
    }
    writeln!(out, "total {}", solution.total_weight)?;
    Ok(())
}

fn instance(seed: u64, ns: usize, nr: usize, out: Option<PathBuf>) -> Result<()> {
    let net = generate(&TopologyConfig::new(ns, nr), &RadioParams::default(), seed);
    let json = serde_json::to_string_pretty(&net).context("serializing the instance")?;
    match out {
        Some(path) => fs::write(&path, json.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}
