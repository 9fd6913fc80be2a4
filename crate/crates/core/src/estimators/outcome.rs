use serde::{Deserialize, Serialize};

use crate::design::{
    binary_information, evaluate_stopping, z_statistics, BinaryTrialData, EfficacyBoundaries, StoppingDecision,
    TwoStageDesign,
};
use crate::error::{Error, Result};

/// Analysis at which the trial stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Stage {
    One,
    Two,
}

impl From<Stage> for u8 {
    fn from(s: Stage) -> u8 {
        match s {
            Stage::One => 1,
            Stage::Two => 2,
        }
    }
}

impl TryFrom<u8> for Stage {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Stage::One),
            2 => Ok(Stage::Two),
            other => Err(format!("stage must be 1 or 2, got {other}")),
        }
    }
}

/// Everything the estimators need to know about a completed trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservedOutcome {
    pub stopped_stage: Stage,
    /// MLE at the analysis where the trial stopped.
    pub theta_hat_overall: f64,
    pub theta_hat_stage1: f64,
    /// MLE from post-interim patients only; `None` when stopped at stage 1.
    pub theta_hat_stage2_increment: Option<f64>,
    pub z1: f64,
    /// Final-analysis z-statistic; present iff the trial reached stage 2.
    pub z2: Option<f64>,
    pub design: TwoStageDesign,
}

impl ObservedOutcome {
    /// Outcome on the canonical scale. `z2` is ignored when `z1` crosses the
    /// interim boundary and required otherwise. The stage-2 increment MLE is
    /// the information-weighted remainder
    /// `(θ̂·I₂ - θ̂₁·I₁) / (I₂ - I₁)`.
    pub fn from_canonical(design: TwoStageDesign, z1: f64, z2: Option<f64>) -> Result<Self> {
        if !z1.is_finite() {
            return Err(Error::InvalidInput(format!("z1 must be finite, got {z1}")));
        }
        let theta1 = z1 / design.i1.sqrt();
        match evaluate_stopping(&design, z1) {
            StoppingDecision::StopEfficacyStage1 => Ok(Self {
                stopped_stage: Stage::One,
                theta_hat_overall: theta1,
                theta_hat_stage1: theta1,
                theta_hat_stage2_increment: None,
                z1,
                z2: None,
                design,
            }),
            StoppingDecision::ContinueToStage2 => {
                let z2 = match z2 {
                    Some(z) if z.is_finite() => z,
                    _ => {
                        return Err(Error::InvalidInput(
                            "z1 is below the interim boundary, so a finite z2 is required".into(),
                        ))
                    }
                };
                let theta = z2 / design.i2.sqrt();
                let increment = (theta * design.i2 - theta1 * design.i1) / (design.i2 - design.i1);
                Ok(Self {
                    stopped_stage: Stage::Two,
                    theta_hat_overall: theta,
                    theta_hat_stage1: theta1,
                    theta_hat_stage2_increment: Some(increment),
                    z1,
                    z2: Some(z2),
                    design,
                })
            }
        }
    }

    /// Outcome from binary counts, with information observed at each analysis.
    ///
    /// The stage-2 increment MLE is the raw difference in proportions among
    /// post-interim patients; with pooled-variance information this differs
    /// slightly from the information-weighted remainder.
    pub fn from_binary(data: &BinaryTrialData, boundaries: &EfficacyBoundaries) -> Result<Self> {
        data.validate()?;
        let i1 = binary_information(&data.interim)?;
        let z1 = data.interim.difference() * i1.sqrt();
        if z1 >= boundaries.e1 {
            // Stopped at the interim: final information was never observed
            // unless the trial overran, and no stage-1 estimate depends on it.
            let i2 = match binary_information(&data.final_) {
                Ok(i2) if i2 > i1 => i2,
                _ => planned_final_information(i1, boundaries),
            };
            return Self::from_canonical(boundaries.with_information(i1, i2)?, z1, None);
        }
        let z = z_statistics(data)?;
        let design = boundaries.with_information(z.i1, z.i2)?;
        let mut outcome = Self::from_canonical(design, z.z1, Some(z.z2))?;
        outcome.theta_hat_stage2_increment = Some(mle_stage2_increment(data)?);
        Ok(outcome)
    }

    pub fn is_stage_two(&self) -> bool {
        self.stopped_stage == Stage::Two
    }
}

/// Maximum information implied by OBF boundaries, `I₁(e₁/e₂)²`, falling
/// back to `2I₁` when the boundaries do not decrease.
fn planned_final_information(i1: f64, boundaries: &EfficacyBoundaries) -> f64 {
    let ratio = boundaries.e1 / boundaries.e2;
    if ratio.is_finite() && ratio > 1.0 {
        i1 * ratio * ratio
    } else {
        2.0 * i1
    }
}

/// Conventional end-of-trial MLE: final difference in proportions if the
/// trial continued, interim difference if it stopped early.
pub fn mle_overall(data: &BinaryTrialData, boundaries: &EfficacyBoundaries) -> Result<f64> {
    Ok(ObservedOutcome::from_binary(data, boundaries)?.theta_hat_overall)
}

/// Difference in proportions using interim data only.
pub fn mle_stage1(data: &BinaryTrialData) -> f64 {
    data.interim.difference()
}

/// Difference in proportions among patients recruited after the interim.
pub fn mle_stage2_increment(data: &BinaryTrialData) -> Result<f64> {
    data.validate()?;
    let (i, f) = (&data.interim, &data.final_);
    let new_control = f.control.n - i.control.n;
    let new_treatment = f.treatment.n - i.treatment.n;
    if new_control == 0 {
        return Err(Error::NoStageTwoPatients { arm: "control" });
    }
    if new_treatment == 0 {
        return Err(Error::NoStageTwoPatients { arm: "treatment" });
    }
    let treat = (f.treatment.successes - i.treatment.successes) as f64 / new_treatment as f64;
    let control = (f.control.successes - i.control.successes) as f64 / new_control as f64;
    Ok(treat - control)
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // 2.718 is the observed final z-statistic
mod tests {
    use super::*;
    use crate::case_study::{musec_boundaries, musec_data};
    use crate::design::{AnalysisCounts, ArmCounts};
    use approx::assert_abs_diff_eq;

    #[test]
    fn musec_mles() {
        let data = musec_data();
        assert_abs_diff_eq!(mle_overall(&data, &musec_boundaries()).unwrap(), 0.1370, epsilon = 5e-5);
        assert_abs_diff_eq!(mle_stage1(&data), 0.1436, epsilon = 5e-5);
        assert_abs_diff_eq!(
            mle_stage2_increment(&data).unwrap(),
            15.0 / 42.0 - 9.0 / 37.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(mle_stage2_increment(&data).unwrap(), 0.1139, epsilon = 5e-5);
    }

    #[test]
    fn stage1_stop_uses_interim_difference() {
        // MUSEC interim counts with a lower boundary so the trial stops.
        let b = EfficacyBoundaries::new(2.5, 1.977).unwrap();
        assert_abs_diff_eq!(mle_overall(&musec_data(), &b).unwrap(), 0.1436, epsilon = 5e-5);
    }

    #[test]
    fn increments() {
        let flat = BinaryTrialData::new(
            AnalysisCounts::new(ArmCounts::new(5, 20), ArmCounts::new(8, 20)),
            AnalysisCounts::new(ArmCounts::new(5, 30), ArmCounts::new(8, 35)),
        )
        .unwrap();
        assert_eq!(mle_stage2_increment(&flat).unwrap(), 0.0);

        let none = BinaryTrialData::new(
            AnalysisCounts::new(ArmCounts::new(5, 20), ArmCounts::new(8, 20)),
            AnalysisCounts::new(ArmCounts::new(6, 30), ArmCounts::new(8, 20)),
        )
        .unwrap();
        assert_eq!(
            mle_stage2_increment(&none).unwrap_err(),
            Error::NoStageTwoPatients { arm: "treatment" }
        );
    }

    #[test]
    fn canonical_decomposition() {
        let d = TwoStageDesign::new(2.797, 1.977, 312.82, 393.70).unwrap();
        let o = ObservedOutcome::from_canonical(d, 2.54, Some(2.718)).unwrap();
        let t2 = o.theta_hat_stage2_increment.unwrap();
        assert_abs_diff_eq!(
            o.theta_hat_overall * d.i2,
            o.theta_hat_stage1 * d.i1 + t2 * (d.i2 - d.i1),
            epsilon = 1e-9
        );
        assert!(ObservedOutcome::from_canonical(d, 2.54, None).is_err());
        let stop = ObservedOutcome::from_canonical(d, 3.0, None).unwrap();
        assert_eq!(stop.stopped_stage, Stage::One);
        assert_eq!(stop.z2, None);
    }

    #[test]
    fn stage_serializes_as_number() {
        assert_eq!(serde_json::to_string(&Stage::Two).unwrap(), "2");
        assert_eq!(serde_json::from_str::<Stage>("1").unwrap(), Stage::One);
        assert!(serde_json::from_str::<Stage>("3").is_err());
    }
}
