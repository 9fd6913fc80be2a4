//! Analytic bias of the MLE and the bias-corrected MLEs built from it.

use crate::design::TwoStageDesign;
use crate::error::Result;
use crate::numerics::{
    lower_tail_ratio, solve_fixed_point_bracketed, std_normal_pdf, truncated_normal_mean,
    SolverSettings, TruncationSide,
};

/// Emerson's unconditional bias of the overall MLE:
/// `(I₂ - I₁)/(I₂√I₁) · ϕ(e₁ - θ√I₁)`.
pub fn unconditional_bias(theta: f64, design: &TwoStageDesign) -> f64 {
    let TwoStageDesign { e1, i1, i2, .. } = *design;
    let u = e1 - theta * i1.sqrt();
    (i2 - i1) / (i2 * i1.sqrt()) * std_normal_pdf(u)
}

/// Bias of the overall MLE given the trial continued to stage 2:
/// `-√I₁ ϕ(u) / (I₂ Φ(u))` with `u = e₁ - θ√I₁`. Never positive.
pub fn conditional_bias_stage2(theta: f64, design: &TwoStageDesign) -> f64 {
    let TwoStageDesign { e1, i1, i2, .. } = *design;
    let u = e1 - theta * i1.sqrt();
    -i1.sqrt() / i2 * lower_tail_ratio(u)
}

/// Bias of the stage-1 MLE given the trial stopped at the interim,
/// `E[θ̂₁ | Z₁ ≥ e₁] - θ`. Never negative.
pub fn conditional_bias_stage1_stop(theta: f64, design: &TwoStageDesign) -> f64 {
    let sd = 1.0 / design.i1.sqrt();
    let cut = design.e1 * sd;
    // sd > 0 by the design invariants
    let mean = truncated_normal_mean(theta, sd, TruncationSide::AboveCut, cut)
        .expect("design information is positive");
    mean - theta
}

fn bias_corrected<B>(theta_hat: f64, design: &TwoStageDesign, bias: B) -> Result<f64>
where
    B: Fn(f64, &TwoStageDesign) -> f64,
{
    let half_width = 10.0 / design.i1.sqrt();
    solve_fixed_point_bracketed(
        |t| theta_hat - bias(t, design),
        theta_hat,
        half_width,
        SolverSettings::default(),
    )
}

/// Whitehead's unconditional bias-corrected MLE: solves `θ̃ = θ̂ - bias(θ̃)`.
pub fn ubc_mle(theta_hat_obs: f64, design: &TwoStageDesign) -> Result<f64> {
    bias_corrected(theta_hat_obs, design, unconditional_bias)
}

/// Conditional bias-corrected MLE: solves `θ̃ = θ̂ - conditional_bias(θ̃)`.
pub fn cbc_mle(theta_hat_obs: f64, design: &TwoStageDesign) -> Result<f64> {
    bias_corrected(theta_hat_obs, design, conditional_bias_stage2)
}
