//! Point estimators of the treatment difference after a two-stage trial
//! that may stop early for efficacy.
//!
//! All estimators work on the canonical scale: z-statistics, z-scale
//! boundaries and information. Binary data are reduced to that scale by
//! [`ObservedOutcome::from_binary`].

mod bias;
mod outcome;
mod rao_blackwell;
mod stagewise;

pub use bias::{
    cbc_mle, conditional_bias_stage1_stop, conditional_bias_stage2, ubc_mle, unconditional_bias,
};
pub use outcome::{mle_overall, mle_stage1, mle_stage2_increment, ObservedOutcome, Stage};
pub use rao_blackwell::{umvcue, umvue};
pub use stagewise::{mue, stagewise_pvalue};

use serde::{Deserialize, Serialize};

use crate::design::{BinaryTrialData, EfficacyBoundaries};
use crate::error::Result;

/// The eight estimators reported for a two-stage trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    MleOverall,
    MleStage1,
    MleStage2Increment,
    Mue,
    Umvue,
    UbcMle,
    Umvcue,
    CbcMle,
}

impl Estimator {
    pub const ALL: [Estimator; 8] = [
        Estimator::MleOverall,
        Estimator::MleStage1,
        Estimator::MleStage2Increment,
        Estimator::Mue,
        Estimator::Umvue,
        Estimator::UbcMle,
        Estimator::Umvcue,
        Estimator::CbcMle,
    ];

    /// Snake-case identifier used in files and CSV headers.
    pub fn key(self) -> &'static str {
        match self {
            Estimator::MleOverall => "mle_overall",
            Estimator::MleStage1 => "mle_stage1",
            Estimator::MleStage2Increment => "mle_stage2_increment",
            Estimator::Mue => "mue",
            Estimator::Umvue => "umvue",
            Estimator::UbcMle => "ubc_mle",
            Estimator::Umvcue => "umvcue",
            Estimator::CbcMle => "cbc_mle",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Estimator::MleOverall => "MLE (overall)",
            Estimator::MleStage1 => "MLE (stage 1)",
            Estimator::MleStage2Increment => "MLE (stage 2)",
            Estimator::Mue => "Median unbiased estimator (MUE)",
            Estimator::Umvue => "UMVUE",
            Estimator::UbcMle => "Bias-corrected MLE (UBC-MLE)",
            Estimator::Umvcue => "UMVCUE",
            Estimator::CbcMle => "Bias-corrected MLE (CBC-MLE)",
        }
    }

    /// Conditional estimators target the law given continuation to stage 2
    /// and are undefined for trials that stop at the interim.
    pub fn is_conditional(self) -> bool {
        matches!(
            self,
            Estimator::MleStage2Increment | Estimator::Umvcue | Estimator::CbcMle
        )
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

/// One value of type `T` per estimator.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerEstimator<T> {
    pub mle_overall: T,
    pub mle_stage1: T,
    pub mle_stage2_increment: T,
    pub mue: T,
    pub umvue: T,
    pub ubc_mle: T,
    pub umvcue: T,
    pub cbc_mle: T,
}

impl<T> PerEstimator<T> {
    pub fn from_fn(mut f: impl FnMut(Estimator) -> T) -> Self {
        Self {
            mle_overall: f(Estimator::MleOverall),
            mle_stage1: f(Estimator::MleStage1),
            mle_stage2_increment: f(Estimator::MleStage2Increment),
            mue: f(Estimator::Mue),
            umvue: f(Estimator::Umvue),
            ubc_mle: f(Estimator::UbcMle),
            umvcue: f(Estimator::Umvcue),
            cbc_mle: f(Estimator::CbcMle),
        }
    }

    pub fn get(&self, which: Estimator) -> &T {
        match which {
            Estimator::MleOverall => &self.mle_overall,
            Estimator::MleStage1 => &self.mle_stage1,
            Estimator::MleStage2Increment => &self.mle_stage2_increment,
            Estimator::Mue => &self.mue,
            Estimator::Umvue => &self.umvue,
            Estimator::UbcMle => &self.ubc_mle,
            Estimator::Umvcue => &self.umvcue,
            Estimator::CbcMle => &self.cbc_mle,
        }
    }

    pub fn get_mut(&mut self, which: Estimator) -> &mut T {
        match which {
            Estimator::MleOverall => &mut self.mle_overall,
            Estimator::MleStage1 => &mut self.mle_stage1,
            Estimator::MleStage2Increment => &mut self.mle_stage2_increment,
            Estimator::Mue => &mut self.mue,
            Estimator::Umvue => &mut self.umvue,
            Estimator::UbcMle => &mut self.ubc_mle,
            Estimator::Umvcue => &mut self.umvcue,
            Estimator::CbcMle => &mut self.cbc_mle,
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(Estimator, &T) -> U) -> PerEstimator<U> {
        PerEstimator::from_fn(|e| f(e, self.get(e)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Estimator, &T)> {
        Estimator::ALL.into_iter().map(move |e| (e, self.get(e)))
    }
}

/// Point estimates for one trial, with optional bootstrap standard errors.
///
/// Conditional estimators are `None` when the trial stopped at the interim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSet {
    pub stopped_stage: Stage,
    pub estimates: PerEstimator<Option<f64>>,
    /// Percent difference to the overall MLE, rounded to an integer.
    pub relative_difference_percent: PerEstimator<Option<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard_errors: Option<PerEstimator<Option<f64>>>,
}

impl EstimateSet {
    pub fn get(&self, which: Estimator) -> Option<f64> {
        *self.estimates.get(which)
    }

    pub fn relative_difference(&self, which: Estimator) -> Option<i64> {
        *self.relative_difference_percent.get(which)
    }

    fn from_estimates(stopped_stage: Stage, estimates: PerEstimator<Option<f64>>) -> Self {
        let reference = estimates.mle_overall;
        let relative_difference_percent = estimates.map(|_, value| match (value, reference) {
            (Some(v), Some(mle)) if mle != 0.0 => Some((100.0 * (v - mle) / mle).round() as i64),
            _ => None,
        });
        Self {
            stopped_stage,
            estimates,
            relative_difference_percent,
            standard_errors: None,
        }
    }
}

/// Computes every estimator for one outcome.
///
/// When the trial stops at the interim, every unconditional estimator equals
/// the stage-1 MLE (the interim MLE is unconditionally unbiased) and the
/// conditional estimators are absent.
pub fn estimate_outcome(outcome: &ObservedOutcome) -> Result<EstimateSet> {
    let estimates = match outcome.stopped_stage {
        Stage::One => {
            let t1 = outcome.theta_hat_stage1;
            PerEstimator::from_fn(|e| (!e.is_conditional()).then_some(t1))
        }
        Stage::Two => {
            let obs = outcome.theta_hat_overall;
            let design = &outcome.design;
            PerEstimator {
                mle_overall: Some(obs),
                mle_stage1: Some(outcome.theta_hat_stage1),
                mle_stage2_increment: outcome.theta_hat_stage2_increment,
                mue: Some(mue(outcome)?),
                umvue: Some(umvue(outcome)),
                ubc_mle: Some(ubc_mle(obs, design)?),
                umvcue: Some(umvcue(outcome)?),
                cbc_mle: Some(cbc_mle(obs, design)?),
            }
        }
    };
    Ok(EstimateSet::from_estimates(outcome.stopped_stage, estimates))
}

/// Reduces binary data to the canonical scale with observed information and
/// computes all eight estimators.
pub fn estimate_all(data: &BinaryTrialData, boundaries: &EfficacyBoundaries) -> Result<EstimateSet> {
    let outcome = ObservedOutcome::from_binary(data, boundaries)?;
    estimate_outcome(&outcome)
}
