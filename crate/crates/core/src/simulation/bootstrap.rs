use super::scenario::{run_scenario, Conditioning, Scenario};
use crate::design::TwoStageDesign;
use crate::error::{Error, Result};
use crate::estimators::PerEstimator;

/// Offsets the seed of the stage-2-only run so it does not reuse the
/// unconditional run's streams.
pub const CONDITIONAL_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

/// Parametric bootstrap standard errors under an assumed true difference.
///
/// Unconditional estimators: SD over `replicates` unconditioned trials.
/// Conditional estimators: SD over `replicates` trials that all continue to
/// stage 2.
pub fn bootstrap_se(
    design: &TwoStageDesign,
    theta_assumed: f64,
    replicates: u64,
    seed: u64,
) -> Result<PerEstimator<Option<f64>>> {
    if replicates < 2 {
        return Err(Error::InvalidInput(format!(
            "bootstrap needs at least 2 replicates, got {replicates}"
        )));
    }
    let unconditional = run_scenario(&Scenario::new(theta_assumed, *design, replicates, seed))?;
    let conditional = run_scenario(
        &Scenario::new(
            theta_assumed,
            *design,
            replicates,
            seed.wrapping_add(CONDITIONAL_SEED_OFFSET),
        )
        .conditioned(Conditioning::Stage2Only),
    )?;
    Ok(PerEstimator::from_fn(|e| {
        let source = if e.is_conditional() {
            &conditional.overall
        } else {
            &unconditional.overall
        };
        source.get(e).and_then(|m| m.sd)
    }))
}
