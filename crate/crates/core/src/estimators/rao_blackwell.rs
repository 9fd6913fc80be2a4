//! Rao–Blackwellised estimators.
//!
//! Given the overall MLE `θ̂` at the final analysis, the stage-1 MLE is
//! distributed as `Normal(θ̂, 1/I₁ - 1/I₂)` truncated above at `e₁/√I₁`
//! (continuation), independently of θ. Both estimators are means of that
//! truncated law: the UMVUE directly, the UMVCUE through
//! `θ̂₂ = (θ̂I₂ - θ̂₁I₁)/(I₂ - I₁)`.

use super::outcome::{ObservedOutcome, Stage};
use crate::error::{Error, Result};
use crate::numerics::lower_tail_ratio;

/// `E[θ̂₁ | T, θ̂]`. Equals the stage-1 MLE when the trial stopped at the interim.
pub fn umvue(outcome: &ObservedOutcome) -> f64 {
    let Some(z2) = outcome.z2.filter(|_| outcome.stopped_stage == Stage::Two) else {
        return outcome.theta_hat_stage1;
    };
    let d = &outcome.design;
    let (i1, i2) = (d.i1, d.i2);
    let t = (d.e1 - z2 * (i1 / i2).sqrt()) / ((i2 - i1) / i2).sqrt();
    outcome.theta_hat_overall - (i2 - i1).sqrt() / (i1 * i2).sqrt() * lower_tail_ratio(t)
}

/// `E[θ̂₂ | T = 2, θ̂]`, the uniformly minimum variance conditionally
/// unbiased estimator.
pub fn umvcue(outcome: &ObservedOutcome) -> Result<f64> {
    if outcome.stopped_stage != Stage::Two {
        return Err(Error::RequiresStageTwo("UMVCUE"));
    }
    let d = &outcome.design;
    let (i1, i2) = (d.i1, d.i2);
    let spread = (1.0 / i1 + 1.0 / (i2 - i1)).sqrt();
    let w1 = 1.0 / ((i2 - i1) * spread);
    let w2 = i1 * spread;
    let obs = outcome.theta_hat_overall;
    Ok(obs + w1 * lower_tail_ratio(w2 * (d.e1 / i1.sqrt() - obs)))
}
