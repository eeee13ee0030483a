//! CSV artifacts and the trust-matrix input format.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use atrust_core::TrustMatrix;
use atrust_sim::experiments::{ConvergenceRow, SweepRow};
use serde::{Deserialize, Serialize};

/// Header of `results.csv` for `simulate` and `sweep`. Changing it breaks consumers.
pub const RESULTS_HEADER: [&str; 9] = [
    "scenario_value",
    "algorithm",
    "mean_authentic_pct",
    "stderr_authentic_pct",
    "mean_load_stddev",
    "feedback_messages",
    "trust_read_messages",
    "seed_base",
    "trials",
];

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub scenario_value: f64,
    pub algorithm: String,
    pub mean_authentic_pct: f64,
    pub stderr_authentic_pct: f64,
    pub mean_load_stddev: f64,
    pub feedback_messages: f64,
    pub trust_read_messages: f64,
    pub seed_base: u64,
    pub trials: usize,
}

impl From<&SweepRow> for ResultRecord {
    fn from(row: &SweepRow) -> Self {
        Self {
            scenario_value: row.scenario_value,
            algorithm: row.algorithm.name().to_string(),
            mean_authentic_pct: row.mean_authentic_pct,
            stderr_authentic_pct: row.stderr_authentic_pct,
            mean_load_stddev: row.mean_load_stddev,
            feedback_messages: row.mean_feedback_messages,
            trust_read_messages: row.mean_trust_read_messages,
            seed_base: row.seed_base,
            trials: row.trials,
        }
    }
}

#[derive(Serialize)]
struct SweepResidual<'a> {
    scenario_value: f64,
    algorithm: &'a str,
    seed: u64,
    update: usize,
    iteration: usize,
    residual: f64,
}

#[derive(Serialize)]
struct TraceResidual {
    iteration: usize,
    residual: f64,
}

#[derive(Serialize)]
struct ExponentResidual {
    p: u32,
    q: u32,
    alpha: f64,
    iteration: usize,
    residual: f64,
}

#[derive(Serialize)]
struct ExponentSummary {
    p: u32,
    q: u32,
    alpha: f64,
    iterations: usize,
    iterations_to_1e_3: Option<usize>,
    iterations_to_1e_4: Option<usize>,
    converged: bool,
}

#[derive(Serialize)]
struct PeerTrust {
    peer: usize,
    trust: f64,
}

#[derive(Debug, Deserialize)]
struct Triple {
    rater: usize,
    ratee: usize,
    score: f64,
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush()?;
    Ok(())
}

pub fn write_results<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(RESULTS_HEADER)?;
    }
    for row in rows {
        w.serialize(ResultRecord::from(row))?;
    }
    finish(w)
}

pub fn write_results_file(rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_results(rows, std::io::BufWriter::new(file))
}

/// Every residual of every trust update of every trial.
pub fn write_sweep_residuals(rows: &[SweepRow], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    for row in rows {
        for trial in &row.runs {
            for (update, trace) in trial.result.residual_traces.iter().enumerate() {
                for (i, &residual) in trace.iter().enumerate() {
                    w.serialize(SweepResidual {
                        scenario_value: row.scenario_value,
                        algorithm: row.algorithm.name(),
                        seed: trial.seed,
                        update,
                        iteration: i + 1,
                        residual,
                    })?;
                }
            }
        }
    }
    finish(w)
}

pub fn write_trace(trace: &[f64], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    for (i, &residual) in trace.iter().enumerate() {
        w.serialize(TraceResidual { iteration: i + 1, residual })?;
    }
    finish(w)
}

pub fn write_peer_trust(values: &[f64], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    for (peer, &trust) in values.iter().enumerate() {
        w.serialize(PeerTrust { peer, trust })?;
    }
    finish(w)
}

pub fn write_convergence_summary(rows: &[ConvergenceRow], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    for row in rows {
        w.serialize(ExponentSummary {
            p: row.exponents.p,
            q: row.exponents.q,
            alpha: row.alpha,
            iterations: row.residuals.len(),
            iterations_to_1e_3: row.iterations_to(1e-3),
            iterations_to_1e_4: row.iterations_to(1e-4),
            converged: row.converged,
        })?;
    }
    finish(w)
}

pub fn write_convergence_residuals(rows: &[ConvergenceRow], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    for row in rows {
        for (i, &residual) in row.residuals.iter().enumerate() {
            w.serialize(ExponentResidual {
                p: row.exponents.p,
                q: row.exponents.q,
                alpha: row.alpha,
                iteration: i + 1,
                residual,
            })?;
        }
    }
    finish(w)
}

/// Parses `rater,ratee,score` triples under a one-line header. The matrix has
/// `peers` rows if given, otherwise one more than the largest id seen.
pub fn read_matrix<R: Read>(input: R, peers: Option<usize>) -> Result<TrustMatrix> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().context("matrix file has no header row")?.clone();
    let expected = ["rater", "ratee", "score"];
    if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h != e) {
        bail!("matrix header must be `rater,ratee,score`, found `{}`", headers.iter().collect::<Vec<_>>().join(","));
    }
    let mut triples = Vec::new();
    for (index, record) in reader.deserialize::<Triple>().enumerate() {
        let line = index + 2;
        let t = record.with_context(|| format!("matrix line {line}: expected integer rater, integer ratee, numeric score"))?;
        if !t.score.is_finite() {
            bail!("matrix line {line}: score must be finite");
        }
        triples.push((t.rater, t.ratee, t.score));
    }
    if triples.is_empty() {
        bail!("matrix file has no entries");
    }
    let seen = triples.iter().map(|&(i, j, _)| i.max(j)).max().unwrap_or(0) + 1;
    let dimension = match peers {
        Some(n) if n < seen => bail!("matrix mentions peer {} but only {n} peers were requested", seen - 1),
        Some(n) => n,
        None => seen,
    };
    TrustMatrix::from_triples(dimension, triples).context("invalid matrix entry")
}

pub fn read_matrix_file(path: &Path, peers: Option<usize>) -> Result<TrustMatrix> {
    let file = std::fs::File::open(path).with_context(|| format!("cannot read matrix file {}", path.display()))?;
    read_matrix(file, peers).with_context(|| format!("in matrix file {}", path.display()))
}
