use serde::{Deserialize, Serialize};

use super::scenario::ReplicateRecord;
use super::summary::{summarize_column, MeanSd};
use crate::error::{Error, Result};
use crate::estimators::{Estimator, PerEstimator};

/// Binned sampling distribution of every estimator.
///
/// Bins are `[edges[i], edges[i+1])`, the last one closed. Values outside the
/// edges land in `underflow`/`overflow`; `moments` covers every value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: PerEstimator<Vec<u64>>,
    pub underflow: PerEstimator<u64>,
    pub overflow: PerEstimator<u64>,
    pub moments: PerEstimator<Option<MeanSd>>,
}

/// 200 equal-width bins over [-0.2, 0.5].
pub fn default_edges() -> Vec<f64> {
    let (lo, hi, bins) = (-0.2, 0.5, 200);
    (0..=bins)
        .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
        .collect()
}

pub fn export_histogram(records: &[ReplicateRecord], edges: &[f64]) -> Result<Histogram> {
    if edges.len() < 2 {
        return Err(Error::InvalidInput("a histogram needs at least two edges".into()));
    }
    if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("histogram edges must be finite and strictly increasing".into()));
    }
    let bins = edges.len() - 1;
    let (lo, hi) = (edges[0], edges[bins]);

    let mut counts = PerEstimator::from_fn(|_| vec![0u64; bins]);
    let mut underflow = PerEstimator::<u64>::default();
    let mut overflow = PerEstimator::<u64>::default();
    for record in records {
        for e in Estimator::ALL {
            let Some(v) = record.estimates.get(e) else { continue };
            if v < lo {
                *underflow.get_mut(e) += 1;
            } else if v > hi {
                *overflow.get_mut(e) += 1;
            } else {
                let bin = edges.partition_point(|&edge| edge <= v).saturating_sub(1).min(bins - 1);
                counts.get_mut(e)[bin] += 1;
            }
        }
    }
    Ok(Histogram {
        bin_edges: edges.to_vec(),
        counts,
        underflow,
        overflow,
        moments: summarize_column(records.iter()),
    })
}

impl Histogram {
    /// Largest absolute difference between neighbouring bin counts.
    pub fn max_bin_jump(&self, which: Estimator) -> u64 {
        self.counts
            .get(which)
            .windows(2)
            .map(|w| w[0].abs_diff(w[1]))
            .max()
            .unwrap_or(0)
    }

    /// Takes each estimator's column from `self` or `other`.
    pub fn splice(&self, other: &Histogram, take_other: impl Fn(Estimator) -> bool) -> Result<Histogram> {
        if self.bin_edges != other.bin_edges {
            return Err(Error::InvalidInput("cannot splice histograms with different edges".into()));
        }
        let pick = |e: Estimator| if take_other(e) { other } else { self };
        Ok(Histogram {
            bin_edges: self.bin_edges.clone(),
            counts: PerEstimator::from_fn(|e| pick(e).counts.get(e).clone()),
            underflow: PerEstimator::from_fn(|e| *pick(e).underflow.get(e)),
            overflow: PerEstimator::from_fn(|e| *pick(e).overflow.get(e)),
            moments: PerEstimator::from_fn(|e| *pick(e).moments.get(e)),
        })
    }

    /// Total values per estimator, including under- and overflow.
    pub fn total(&self, which: Estimator) -> u64 {
        self.counts.get(which).iter().sum::<u64>() + self.underflow.get(which) + self.overflow.get(which)
    }
}
