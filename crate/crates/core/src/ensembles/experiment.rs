use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::enumerate_labeled_topologies;
use super::probability::{sum_sn_bound, sum_sn_bound_f64, EXACT_SUM_BOUND_MAX_LEAVES};
use super::sample::sample_generic_pair;
use super::stream::SeededStream;
use crate::error::{Error, Result};
use crate::metric::{pair_count, ExactScalar};
use crate::segment::{essential_pair_count, essential_pairs, LcaTable};

/// Environment variable capping the worker threads of an experiment.
pub const THREADS_ENV: &str = "TROPLINE_THREADS";
pub const EXACT_EXPECTATION_MAX_LEAVES: usize = 6;
const MIN_TRIALS: usize = 30;
/// Two-sided 99% standard normal quantile.
const Z99: f64 = 2.5758293035489004;

/// Worker count from `TROPLINE_THREADS`, or 0 to let rayon decide.
pub fn experiment_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(0)
}

/// Mean number of essential pairs over all ordered pairs of binary
/// topologies on `n` leaves.
pub fn expected_pi_exact(n: usize) -> Result<ExactScalar> {
    if n > EXACT_EXPECTATION_MAX_LEAVES {
        return Err(Error::TooManyLeaves {
            n,
            max: EXACT_EXPECTATION_MAX_LEAVES,
        });
    }
    let tables: Vec<LcaTable> = enumerate_labeled_topologies(n)?.iter().map(LcaTable::new).collect();
    let total: u64 = tables
        .par_iter()
        .map(|a| tables.iter().map(|b| essential_pair_count(a, b) as u64).sum::<u64>())
        .sum();
    let pairs = (tables.len() * tables.len()) as u64;
    Ok(ExactScalar::from_ratio(total.into(), pairs.into()).unwrap())
}

/// One row of a Monte-Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub height_range: u64,
    pub mean_pi: f64,
    /// Sample variance.
    pub var: f64,
    /// Half-width of the normal 99% interval for the mean.
    pub ci99: f64,
    /// `2(n-1)^2 S~_n` rounded to f64.
    pub bound: f64,
    /// The same bound as a rational, when small enough to sum exactly.
    pub bound_exact: Option<ExactScalar>,
    pub pi_sum: u64,
    pub max_pi: usize,
    /// Mean number of height draws per trial.
    pub mean_attempts: f64,
    pub seconds: f64,
}

impl ExperimentReport {
    pub const CSV_HEADER: &'static str = "n,trials,mean_pi,var,ci99,bound,seconds";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.3}",
            self.n, self.trials, self.mean_pi, self.var, self.ci99, self.bound, self.seconds
        )
    }

    /// Every column except the wall time.
    pub fn csv_row_without_time(&self) -> String {
        let row = self.csv_row();
        row[..row.rfind(',').unwrap()].to_string()
    }

    pub fn ci_contains(&self, value: f64) -> bool {
        (value - self.mean_pi).abs() <= self.ci99
    }
}

/// `2(n-1)^2 S~_n`, exactly when `n` allows.
pub(crate) fn turning_point_bound(n: usize) -> Result<(f64, Option<ExactScalar>)> {
    let factor = 2 * (n as i64 - 1).pow(2);
    if n <= EXACT_SUM_BOUND_MAX_LEAVES {
        let exact = sum_sn_bound(n)?.mul(&ExactScalar::from_integer(factor));
        Ok((exact.to_f64(), Some(exact)))
    } else {
        Ok((sum_sn_bound_f64(n)? * factor as f64, None))
    }
}

/// Samples `trials` generic pairs and records the number of essential pairs.
///
/// Trial `k` draws from `stream.trial(k)`; results are collected in trial
/// order, so the output does not depend on the thread count.
pub fn expected_pi_monte_carlo(
    n: usize,
    trials: usize,
    stream: &SeededStream,
    height_range: u64,
) -> Result<ExperimentReport> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidArgument(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(experiment_threads())
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let outcomes: Vec<Result<(usize, usize)>> = pool.install(|| {
        (0..trials as u64)
            .into_par_iter()
            .map(|k| {
                let pair = sample_generic_pair(n, &mut stream.trial(k), height_range)?;
                Ok((essential_pairs(&pair.t1, &pair.t2)?.len(), pair.attempts))
            })
            .collect()
    });
    let outcomes: Vec<(usize, usize)> = outcomes.into_iter().collect::<Result<_>>()?;

    let pi_sum: u64 = outcomes.iter().map(|o| o.0 as u64).sum();
    let mean = pi_sum as f64 / trials as f64;
    let var = outcomes.iter().map(|o| (o.0 as f64 - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let max_pi = outcomes.iter().map(|o| o.0).max().unwrap_or(0);
    debug_assert!(max_pi <= pair_count(n));
    let attempts: usize = outcomes.iter().map(|o| o.1).sum();
    let (bound, bound_exact) = turning_point_bound(n)?;
    Ok(ExperimentReport {
        n,
        trials,
        seed: stream.seed(),
        height_range,
        mean_pi: mean,
        var,
        ci99: Z99 * (var / trials as f64).sqrt(),
        bound,
        bound_exact,
        pi_sum,
        max_pi,
        mean_attempts: attempts as f64 / trials as f64,
        seconds: start.elapsed().as_secs_f64(),
    })
}

impl ExperimentReport {
    /// Exact sample mean, for comparisons that should not round.
    pub fn mean_exact(&self) -> ExactScalar {
        ExactScalar::from_ratio(BigInt::from(self.pi_sum), BigInt::from(self.trials)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_small_expectations() {
        assert_eq!(expected_pi_exact(2).unwrap(), ExactScalar::from_integer(1));
        // three topologies: equal pairs give 2, different pairs give 3
        assert_eq!(expected_pi_exact(3).unwrap(), ExactScalar::new(24, 9).unwrap());
        assert!(expected_pi_exact(4).unwrap() <= ExactScalar::from_integer(6));
        assert!(expected_pi_exact(7).is_err());
    }

    #[test]
    fn report_shape() {
        let r = expected_pi_monte_carlo(5, 40, &SeededStream::new(2), 15_625).unwrap();
        assert_eq!(r.trials, 40);
        assert!(r.mean_pi <= 10.0 && r.max_pi <= 10);
        assert!(r.mean_pi <= r.bound);
        assert_eq!(r.csv_row().split(',').count(), 7);
        assert_eq!(r.csv_row_without_time().split(',').count(), 6);
        assert!(expected_pi_monte_carlo(5, 29, &SeededStream::new(2), 15_625).is_err());
    }
}
