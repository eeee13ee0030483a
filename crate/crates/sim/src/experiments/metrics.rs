use crate::engine::ExperimentResult;
use crate::error::SimError;

/// Share of completed downloads that were authentic, in percent.
pub fn authentic_percent(result: &ExperimentResult) -> Result<f64, SimError> {
    percent(result.authentic_count, result.inauthentic_count)
}

pub fn percent(authentic: u64, inauthentic: u64) -> Result<f64, SimError> {
    let total = authentic + inauthentic;
    if total == 0 {
        return Err(SimError::NoTransactions);
    }
    Ok(100.0 * authentic as f64 / total as f64)
}

/// Population standard deviation of the load served by `good_peers`.
pub fn load_stddev(result: &ExperimentResult, good_peers: &[usize]) -> Result<f64, SimError> {
    let loads: Vec<f64> = good_peers.iter().map(|&p| result.per_peer_load[p] as f64).collect();
    population_stddev(&loads)
}

pub fn population_stddev(values: &[f64]) -> Result<f64, SimError> {
    if values.len() < 2 {
        return Err(SimError::TooFewGoodPeers(values.len()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    Ok((values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt())
}

/// Mean, sample standard deviation and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub stddev: f64,
    pub stderr: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let stddev = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Summary {
        mean,
        stddev,
        stderr: stddev / n.sqrt(),
    }
}
