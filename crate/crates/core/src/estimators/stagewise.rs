//! Stagewise-ordering p-value function and the median unbiased estimator.

use super::outcome::{ObservedOutcome, Stage};
use crate::error::{Error, Result};
use crate::numerics::{bivariate_normal_cdf, find_root, std_normal_sf, Interval, SolverSettings};

/// `P(θ)`: probability under θ of an outcome at least as extreme as the one
/// observed in the stagewise ordering.
///
/// Stopping at the interim is more extreme than any continuation, so for a
/// stage-2 outcome `P(θ) = P_θ(Z₁ ≥ e₁) + P_θ(Z₁ < e₁, Z₂ ≥ z₂)`. For a
/// stage-1 outcome `P(θ) = P_θ(Z₁ ≥ z₁)`.
pub fn stagewise_pvalue(theta: f64, outcome: &ObservedOutcome) -> f64 {
    let d = &outcome.design;
    let mu1 = theta * d.i1.sqrt();
    match (outcome.stopped_stage, outcome.z2) {
        (Stage::Two, Some(z2)) => {
            let mu2 = theta * d.i2.sqrt();
            let a = d.e1 - mu1;
            let b = z2 - mu2;
            // P(X₁ < a, X₂ ≥ b) = P(X₁ ≤ a, -X₂ ≤ -b), Corr(X₁, -X₂) = -ρ
            let continuation = bivariate_normal_cdf(a, -b, -d.rho()).unwrap_or(f64::NAN);
            std_normal_sf(a) + continuation
        }
        _ => std_normal_sf(outcome.z1 - mu1),
    }
}

/// Median unbiased estimator: the root of `P(θ) = 1/2`.
pub fn mue(outcome: &ObservedOutcome) -> Result<f64> {
    if outcome.stopped_stage == Stage::One {
        return Ok(outcome.theta_hat_stage1);
    }
    let centre = outcome.theta_hat_overall;
    let objective = |theta: f64| stagewise_pvalue(theta, outcome) - 0.5;

    let mut half_width = 2.0 / outcome.design.i2.sqrt();
    for _ in 0..60 {
        let bracket = Interval::around(centre, half_width)?;
        if objective(bracket.lo()) < 0.0 && objective(bracket.hi()) > 0.0 {
            let settings = SolverSettings::new(1e-12, 200)?;
            return find_root(objective, bracket, settings);
        }
        half_width *= 2.0;
    }
    Err(Error::NoConvergence { iterations: 60 })
}
