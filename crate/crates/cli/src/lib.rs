//! The `atrust` command line: solve a trust matrix, simulate a population,
//! sweep attack scenarios, or tabulate solver convergence.

pub mod manifest;
pub mod settings;
pub mod tables;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use atrust_core::{solve_absolute_trust, SolveError};
use atrust_sim::experiments::{
    convergence_study, run_trial, seeded_matrix, sweep, ConvergenceRow, Exponents, Scenario, SweepRow,
};
use atrust_sim::{Algorithm, SimConfig, RNG_ALGORITHM};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

pub use manifest::{Report, RunManifest};
pub use settings::{RunSettings, Settings, ValueSource};

#[derive(Debug, Parser)]
#[command(name = "atrust", version, about = "Absolute Trust solver and reputation simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a trust matrix read from CSV and print the fixed point.
    Solve {
        /// CSV of `rater,ratee,score` triples with a header row.
        #[arg(long)]
        matrix: PathBuf,
        /// Matrix dimension; defaults to one more than the largest peer id.
        #[arg(long)]
        peers: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run one population configuration over several seeded trials.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        population: PopulationArgs,
        #[arg(long)]
        algorithm: Option<String>,
    },
    /// Run every sweep point of a scenario for each algorithm.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// malicious, unpredictable or collective.
        #[arg(long)]
        scenario: String,
        /// Comma-separated list; all three by default.
        #[arg(long, value_delimiter = ',')]
        algorithms: Option<Vec<String>>,
        /// Comma-separated sweep points; the reference points by default.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Residual trace per exponent pair on one seeded random matrix.
    Convergence {
        #[command(flatten)]
        common: CommonArgs,
        /// Solve this matrix instead of a generated one.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Size of the generated matrix.
        #[arg(long, default_value_t = 100)]
        peers: usize,
        /// Comma-separated `p:q` pairs; `1:1,2:1,3:1,4:1,5:1` by default.
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<String>>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Simulate { .. } => "simulate",
            Command::Sweep { .. } => "sweep",
            Command::Convergence { .. } => "convergence",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Command::Solve { common, .. }
            | Command::Simulate { common, .. }
            | Command::Sweep { common, .. }
            | Command::Convergence { common, .. } => common,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file overriding built-in defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Worker threads for concurrent trials.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "atrust-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
    /// Solver stopping residual.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Initial query TTL.
    #[arg(long)]
    pub ttl: Option<u32>,
    #[arg(long = "global-ref")]
    pub global_ref: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PopulationArgs {
    /// Fraction of purely malicious peers.
    #[arg(long)]
    pub malicious: Option<f64>,
    /// Fraction of peers that turn malicious mid-run.
    #[arg(long)]
    pub unpredictable: Option<f64>,
    /// Number of colluding groups.
    #[arg(long)]
    pub groups: Option<usize>,
}

/// What a finished command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub out_dir: PathBuf,
    /// Human-readable summary for the terminal.
    pub text: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from_args<I, T>(args: I) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let raw: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&raw)?;
    let arguments = raw.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    execute(&cli.command, arguments)
}

/// Layers defaults, `--config` and flags for `command`.
pub fn resolve_settings(command: &Command) -> Result<Settings> {
    let common = command.common();
    let mut settings = Settings::new();
    if let Some(path) = &common.config {
        settings.load_file(path)?;
    }
    if let Some(seed) = common.seed {
        settings.set_cli("sim.seed", seed)?;
    }
    if let Some(trials) = common.trials {
        settings.set_cli("run.trials", trials)?;
    }
    if let Some(jobs) = common.jobs {
        settings.set_cli("run.jobs", jobs)?;
    }
    if let Some(p) = common.p {
        settings.set_cli("solver.p", p).context("--p")?;
    }
    if let Some(q) = common.q {
        settings.set_cli("solver.q", q).context("--q")?;
    }
    if let Some(threshold) = common.threshold {
        settings.set_cli("solver.threshold", threshold).context("--threshold")?;
    }
    if let Some(global_ref) = common.global_ref {
        settings.set_cli("sim.global_ref", global_ref).context("--global-ref")?;
    }
    if let Some(ttl) = common.ttl {
        settings.set_cli("sim.ttl_initial", ttl).context("--ttl")?;
        if ttl > settings.sim_config()?.ttl_upper {
            settings.set_cli("sim.ttl_upper", ttl)?;
        }
    }
    if let Command::Simulate { population, algorithm, .. } = command {
        if let Some(m) = population.malicious {
            settings.set_cli("population.malicious_fraction", m).context("--malicious")?;
        }
        if let Some(u) = population.unpredictable {
            settings
                .set_cli("population.unpredictable_fraction", u)
                .context("--unpredictable")?;
        }
        if let Some(g) = population.groups {
            settings.set_cli("population.collective_groups", g).context("--groups")?;
        }
        if let Some(name) = algorithm {
            let algorithm: Algorithm = name.parse().context("--algorithm")?;
            settings.set_cli("sim.algorithm", algorithm.name())?;
        }
    }
    Ok(settings)
}

/// Runs an already parsed command and writes its artifacts.
pub fn execute(command: &Command, arguments: Vec<String>) -> Result<Outcome> {
    let started = Instant::now();
    let settings = resolve_settings(command)?;
    let config = settings.sim_config()?;
    let run = settings.run_settings()?;
    if run.trials == 0 {
        bail!("invalid value for `run.trials`: must be at least 1");
    }
    let out_dir = command.common().out.clone();
    std::fs::create_dir_all(&out_dir).with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(run.jobs).build()?;

    let produced = pool.install(|| match command {
        Command::Solve { matrix, peers, .. } => solve(&config, matrix, *peers, &out_dir),
        Command::Simulate { .. } => simulate(&config, run.trials, &out_dir),
        Command::Sweep {
            scenario,
            algorithms,
            values,
            ..
        } => run_sweep(&config, run.trials, scenario, algorithms.as_deref(), values.as_deref(), &out_dir),
        Command::Convergence {
            matrix,
            peers,
            exponents,
            ..
        } => convergence(&config, matrix.as_deref(), *peers, exponents.as_deref(), &out_dir),
    })?;

    let mut artifacts = produced.artifacts;
    let manifest_path = out_dir.join("manifest.json");
    artifacts.insert("manifest".into(), manifest_path.display().to_string());
    let report = Report {
        manifest: RunManifest {
            tool: "atrust".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.name().into(),
            arguments,
            rng_algorithm: RNG_ALGORITHM.into(),
            config,
            run,
            provenance: settings.provenance().clone(),
            artifacts,
            wall_clock_seconds: started.elapsed().as_secs_f64(),
        },
        summary: produced.summary,
    };
    std::fs::write(&manifest_path, report.to_json()? + "\n")
        .with_context(|| format!("cannot write {}", manifest_path.display()))?;
    Ok(Outcome {
        report,
        out_dir,
        text: produced.text,
    })
}

struct Produced {
    artifacts: BTreeMap<String, String>,
    summary: Value,
    text: String,
}

fn artifact_map(entries: &[(&str, &Path)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(name, path)| (name.to_string(), path.display().to_string()))
        .collect()
}

fn solve(config: &SimConfig, matrix_path: &Path, peers: Option<usize>, out: &Path) -> Result<Produced> {
    let matrix = tables::read_matrix_file(matrix_path, peers)?;
    let (trust, converged) = match solve_absolute_trust(&matrix, &config.solver) {
        Ok(t) => (t, true),
        Err(SolveError::NotConverged(t)) => (t, false),
        Err(SolveError::Invalid(e)) => return Err(e).context("cannot solve matrix"),
    };
    let results = out.join("results.csv");
    let residuals = out.join("residuals.csv");
    tables::write_peer_trust(&trust.values, &results)?;
    tables::write_trace(&trust.residual_trace, &residuals)?;

    let mut text = format!(
        "fixed point after {} iterations (p={}, q={}){}\n",
        trust.iterations_used,
        config.solver.p,
        config.solver.q,
        if converged { "" } else { ", NOT converged" }
    );
    for (peer, value) in trust.values.iter().enumerate() {
        text += &format!("t[{peer}] = {value:.10}\n");
    }
    text += "residuals:";
    for r in &trust.residual_trace {
        text += &format!(" {r:.3e}");
    }
    text.push('\n');
    Ok(Produced {
        artifacts: artifact_map(&[("results", &results), ("residuals", &residuals)]),
        summary: json!({
            "matrix": matrix_path.display().to_string(),
            "peers": matrix.dimension(),
            "converged": converged,
            "iterations": trust.iterations_used,
            "trust": trust.values,
            "residual_trace": trust.residual_trace,
        }),
        text,
    })
}

/// Scenario label of a mixed population: the most specific attack present wins.
fn dominant_scenario(config: &SimConfig) -> (Scenario, f64) {
    let pop = &config.population;
    if pop.collective_groups > 0 {
        (Scenario::Collective, pop.collective_groups as f64)
    } else if pop.unpredictable_fraction > 0.0 {
        (Scenario::Unpredictable, pop.unpredictable_fraction)
    } else {
        (Scenario::Malicious, pop.malicious_fraction)
    }
}

fn simulate(config: &SimConfig, trials: usize, out: &Path) -> Result<Produced> {
    let runs = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<Vec<_>, _>>()?;
    let (scenario, value) = dominant_scenario(config);
    let row = SweepRow::from_trials(scenario, value, config.algorithm, config.seed, runs);
    let rows = vec![row];
    let produced = sweep_outputs(&rows, out)?;
    Ok(Produced {
        summary: json!({
            "scenario": scenario.name(),
            "rows": rows_summary(&rows),
        }),
        ..produced
    })
}

fn run_sweep(
    config: &SimConfig,
    trials: usize,
    scenario: &str,
    algorithms: Option<&[String]>,
    values: Option<&[f64]>,
    out: &Path,
) -> Result<Produced> {
    let scenario: Scenario = scenario.parse().context("--scenario")?;
    let algorithms: Vec<Algorithm> = match algorithms {
        Some(names) => names
            .iter()
            .map(|n| n.parse())
            .collect::<Result<_, _>>()
            .context("--algorithms")?,
        None => Algorithm::ALL.to_vec(),
    };
    let values = values.map(<[f64]>::to_vec).unwrap_or_else(|| scenario.default_values());
    let rows = sweep(scenario, &algorithms, &values, trials, config)?;
    let produced = sweep_outputs(&rows, out)?;
    Ok(Produced {
        summary: json!({
            "scenario": scenario.name(),
            "algorithms": algorithms.iter().map(|a| a.name()).collect::<Vec<_>>(),
            "values": values,
            "rows": rows_summary(&rows),
        }),
        ..produced
    })
}

fn rows_summary(rows: &[SweepRow]) -> Value {
    rows.iter()
        .map(|r| {
            json!({
                "scenario_value": r.scenario_value,
                "algorithm": r.algorithm.name(),
                "mean_authentic_pct": r.mean_authentic_pct,
                "stddev_authentic_pct": r.stddev_authentic_pct,
                "stderr_authentic_pct": r.stderr_authentic_pct,
                "mean_load_stddev": r.mean_load_stddev,
                "mean_feedback_messages": r.mean_feedback_messages,
                "mean_trust_read_messages": r.mean_trust_read_messages,
                "trial_seeds": r.runs.iter().map(|t| t.seed).collect::<Vec<_>>(),
            })
        })
        .collect()
}

fn sweep_outputs(rows: &[SweepRow], out: &Path) -> Result<Produced> {
    let results = out.join("results.csv");
    let residuals = out.join("residuals.csv");
    tables::write_results_file(rows, &results)?;
    tables::write_sweep_residuals(rows, &residuals)?;
    let mut text = format!(
        "{:>8}  {:<11} {:>10} {:>8} {:>10}\n",
        "value", "algorithm", "authentic%", "stderr", "load sd"
    );
    for r in rows {
        text += &format!(
            "{:>8}  {:<11} {:>10.2} {:>8.2} {:>10.1}\n",
            r.scenario_value,
            r.algorithm.name(),
            r.mean_authentic_pct,
            r.stderr_authentic_pct,
            r.mean_load_stddev
        );
    }
    Ok(Produced {
        artifacts: artifact_map(&[("results", &results), ("residuals", &residuals)]),
        summary: Value::Null,
        text,
    })
}

fn parse_exponents(specs: &[String]) -> Result<Vec<Exponents>> {
    specs
        .iter()
        .map(|s| {
            let (p, q) = s
                .split_once(':')
                .with_context(|| format!("--exponents entry `{s}` must look like p:q"))?;
            Ok(Exponents {
                p: p.trim().parse().with_context(|| format!("--exponents entry `{s}`: bad p"))?,
                q: q.trim().parse().with_context(|| format!("--exponents entry `{s}`: bad q"))?,
            })
        })
        .collect()
}

fn convergence(
    config: &SimConfig,
    matrix_path: Option<&Path>,
    peers: usize,
    exponents: Option<&[String]>,
    out: &Path,
) -> Result<Produced> {
    let exponents = match exponents {
        Some(specs) => parse_exponents(specs)?,
        None => Exponents::standard_set(),
    };
    let matrix = match matrix_path {
        Some(path) => tables::read_matrix_file(path, None)?,
        None => seeded_matrix(peers, config.weights.bad(), config.weights.good(), config.seed)?,
    };
    let rows: Vec<ConvergenceRow> = convergence_study(&exponents, &matrix, &config.solver)?;
    let results = out.join("results.csv");
    let residuals = out.join("residuals.csv");
    tables::write_convergence_summary(&rows, &results)?;
    tables::write_convergence_residuals(&rows, &residuals)?;

    let mut text = format!("{:>4} {:>4} {:>8} {:>6} {:>8} {:>8}\n", "p", "q", "alpha", "iters", "<1e-3", "<1e-4");
    let show = |n: Option<usize>| n.map_or("-".to_string(), |n| n.to_string());
    for r in &rows {
        text += &format!(
            "{:>4} {:>4} {:>8.4} {:>6} {:>8} {:>8}\n",
            r.exponents.p,
            r.exponents.q,
            r.alpha,
            r.residuals.len(),
            show(r.iterations_to(1e-3)),
            show(r.iterations_to(1e-4)),
        );
    }
    Ok(Produced {
        artifacts: artifact_map(&[("results", &results), ("residuals", &residuals)]),
        summary: json!({
            "matrix": matrix_path.map(|p| p.display().to_string()),
            "peers": matrix.dimension(),
            "rows": rows,
        }),
        text,
    })
}
