use serde::{Deserialize, Serialize};

use super::scenario::{Conditioning, ReplicateRecord};
use crate::design::TwoStageDesign;
use crate::estimators::{Estimator, PerEstimator, Stage};

/// Sample size, mean and standard deviation of one column of estimates.
/// `sd` is absent below two observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub n: u64,
    pub mean: f64,
    pub sd: Option<f64>,
}

impl MeanSd {
    /// Two-pass mean and (n - 1)-denominator standard deviation.
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = (values.len() > 1).then(|| {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1.0)).sqrt()
        });
        Some(Self {
            n: values.len() as u64,
            mean,
            sd,
        })
    }

    /// Monte Carlo standard error of the mean.
    pub fn standard_error(&self) -> Option<f64> {
        self.sd.map(|sd| sd / (self.n as f64).sqrt())
    }
}

/// Means and SDs of every estimator across the replicates of a scenario,
/// overall and split by stopping stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub theta: f64,
    pub design: TwoStageDesign,
    pub replicates: u64,
    pub seed: u64,
    pub conditioning: Conditioning,
    pub overall: PerEstimator<Option<MeanSd>>,
    pub stage1_stoppers: PerEstimator<Option<MeanSd>>,
    pub stage2_continuers: PerEstimator<Option<MeanSd>>,
    pub stage1_count: u64,
    pub stage2_count: u64,
    /// Fraction of the (possibly conditioned) sample that stopped at the interim.
    pub stop_probability_stage1: f64,
    pub analytic_stop_probability: f64,
}

pub(crate) fn summarize_column<'a>(
    records: impl Iterator<Item = &'a ReplicateRecord> + Clone,
) -> PerEstimator<Option<MeanSd>> {
    PerEstimator::from_fn(|e: Estimator| {
        let values: Vec<f64> = records.clone().filter_map(|r| r.estimates.get(e)).collect();
        MeanSd::from_values(&values)
    })
}

pub(crate) fn summarize(
    theta: f64,
    design: TwoStageDesign,
    seed: u64,
    conditioning: Conditioning,
    analytic_stop_probability: f64,
    records: &[ReplicateRecord],
) -> ScenarioSummary {
    let stage1_count = records.iter().filter(|r| r.stopped_stage == Stage::One).count() as u64;
    let replicates = records.len() as u64;
    ScenarioSummary {
        theta,
        design,
        replicates,
        seed,
        conditioning,
        overall: summarize_column(records.iter()),
        stage1_stoppers: summarize_column(records.iter().filter(|r| r.stopped_stage == Stage::One)),
        stage2_continuers: summarize_column(records.iter().filter(|r| r.stopped_stage == Stage::Two)),
        stage1_count,
        stage2_count: replicates - stage1_count,
        stop_probability_stage1: if replicates == 0 {
            0.0
        } else {
            stage1_count as f64 / replicates as f64
        },
        analytic_stop_probability,
    }
}
