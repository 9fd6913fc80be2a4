use rand_distr::StandardNormal;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::rng::replicate_rng;
use super::scenario::stop_probability;
use crate::design::{normal_information, obf_boundaries, NormalEndpointSpec, TwoStageDesign};
use crate::error::{Error, Result};
use crate::estimators::{conditional_bias_stage1_stop, conditional_bias_stage2, unconditional_bias};

/// Monte Carlo cross-check settings for [`bias_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McCheck {
    pub replicates: u64,
    pub seed: u64,
}

/// Empirical counterparts of the analytic sweep columns, each with its
/// Monte Carlo standard error. Stage-specific columns are absent when no
/// replicate reached that stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McColumns {
    pub bias_stop_stage1: Option<f64>,
    pub bias_stop_stage1_se: Option<f64>,
    pub bias_continue_stage2: Option<f64>,
    pub bias_continue_stage2_se: Option<f64>,
    pub bias_unconditional: f64,
    pub bias_unconditional_se: f64,
    pub prob_stop: f64,
    pub prob_stop_se: f64,
}

/// Analytic bias of the MLE and interim stopping probability at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub theta: f64,
    pub bias_stop_stage1: f64,
    pub bias_continue_stage2: f64,
    pub bias_unconditional: f64,
    pub prob_stop: f64,
    pub design: TwoStageDesign,
    pub mc: Option<McColumns>,
}

/// Bias curves of the MLE for normal-endpoint OBF designs of several sizes.
pub fn bias_sweep(
    endpoints: &[NormalEndpointSpec],
    alpha: f64,
    theta_grid: &[f64],
    mc: Option<McCheck>,
) -> Result<Vec<SweepRow>> {
    if theta_grid.is_empty() {
        return Err(Error::InvalidInput("theta grid is empty".into()));
    }
    if theta_grid.iter().any(|t| !t.is_finite()) || theta_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("theta grid must be finite and strictly increasing".into()));
    }
    if endpoints.is_empty() {
        return Err(Error::InvalidInput("no sample sizes given".into()));
    }
    if let Some(check) = mc {
        if check.replicates < 2 {
            return Err(Error::InvalidInput("Monte Carlo check needs at least 2 replicates".into()));
        }
    }

    let mut rows = Vec::with_capacity(endpoints.len() * theta_grid.len());
    for (spec_index, spec) in endpoints.iter().enumerate() {
        let (i1, i2) = normal_information(spec)?;
        let bounds = obf_boundaries(alpha, spec.interim_fraction)?;
        let design = TwoStageDesign::new(bounds.e1, bounds.e2, i1, i2)?;
        for (theta_index, &theta) in theta_grid.iter().enumerate() {
            let mc = mc.map(|check| {
                let stream_seed = check
                    .seed
                    .wrapping_add((spec_index as u64) << 32)
                    .wrapping_add(theta_index as u64);
                empirical_bias(theta, &design, check.replicates, stream_seed)
            });
            rows.push(SweepRow {
                n: spec.total_n,
                theta,
                bias_stop_stage1: conditional_bias_stage1_stop(theta, &design),
                bias_continue_stage2: conditional_bias_stage2(theta, &design),
                bias_unconditional: unconditional_bias(theta, &design),
                prob_stop: stop_probability(theta, &design),
                design,
                mc,
            });
        }
    }
    Ok(rows)
}

#[derive(Default, Clone, Copy)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(mut self, other: Moments) -> Moments {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }

    fn mean(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }

    fn standard_error(&self) -> Option<f64> {
        (self.n > 1).then(|| {
            let n = self.n as f64;
            let mean = self.sum / n;
            let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        })
    }
}

/// Simulated MLE errors. Replicates are processed in fixed chunks and the
/// chunk partials reduced in order, so the result does not depend on the
/// thread count.
fn empirical_bias(theta: f64, design: &TwoStageDesign, replicates: u64, seed: u64) -> McColumns {
    const CHUNK: u64 = 4096;
    let (mu1, mu2, rho) = (theta * design.i1.sqrt(), theta * design.i2.sqrt(), design.rho());
    let chunks = replicates.div_ceil(CHUNK);
    let partials: Vec<(Moments, Moments, Moments)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut stop = Moments::default();
            let mut cont = Moments::default();
            let mut all = Moments::default();
            for r in c * CHUNK..((c + 1) * CHUNK).min(replicates) {
                let mut rng = replicate_rng(seed, r);
                let z1 = mu1 + rng.sample::<f64, _>(StandardNormal);
                let error = if z1 >= design.e1 {
                    let e = z1 / design.i1.sqrt() - theta;
                    stop.push(e);
                    e
                } else {
                    let noise: f64 = rng.sample(StandardNormal);
                    let z2 = mu2 + rho * (z1 - mu1) + (1.0 - rho * rho).sqrt() * noise;
                    let e = z2 / design.i2.sqrt() - theta;
                    cont.push(e);
                    e
                };
                all.push(error);
            }
            (stop, cont, all)
        })
        .collect();
    let (stop, cont, all) = partials.into_iter().fold(
        (Moments::default(), Moments::default(), Moments::default()),
        |acc, p| (acc.0.merge(p.0), acc.1.merge(p.1), acc.2.merge(p.2)),
    );
    let p = stop.n as f64 / replicates as f64;
    McColumns {
        bias_stop_stage1: stop.mean(),
        bias_stop_stage1_se: stop.standard_error(),
        bias_continue_stage2: cont.mean(),
        bias_continue_stage2_se: cont.standard_error(),
        bias_unconditional: all.mean().unwrap_or(f64::NAN),
        bias_unconditional_se: all.standard_error().unwrap_or(f64::NAN),
        prob_stop: p,
        prob_stop_se: (p * (1.0 - p) / replicates as f64).sqrt(),
    }
}
