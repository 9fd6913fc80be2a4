use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::replicate_rng;
use super::summary::{summarize, ScenarioSummary};
use crate::design::{canonical_params, CanonicalParams, TwoStageDesign};
use crate::error::{domain, Error, Result};
use crate::estimators::{estimate_outcome, EstimateSet, ObservedOutcome, Stage};
use crate::numerics::std_normal_sf;

/// Interim draws used to check that a conditioning event can be sampled.
const PROBE_DRAWS: u64 = 1_000_000;
const MIN_EVENT_PROBABILITY: f64 = 1e-6;
/// Rejection attempts allowed for a single conditioned replicate.
const MAX_ATTEMPTS: u64 = 100_000_000;
const PROBE_STREAM: u64 = u64::MAX;

/// Which replicates a scenario keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Conditioning {
    /// Every replicate, whatever stage it stops at.
    #[default]
    All,
    /// Resample until the trial continues to stage 2.
    Stage2Only,
    /// Resample until the trial stops at the interim.
    Stage1Only,
}

impl Conditioning {
    fn accepts(self, stops_early: bool) -> bool {
        match self {
            Conditioning::All => true,
            Conditioning::Stage2Only => !stops_early,
            Conditioning::Stage1Only => stops_early,
        }
    }

    fn event(self) -> &'static str {
        match self {
            Conditioning::All => "all",
            Conditioning::Stage2Only => "continue to stage 2",
            Conditioning::Stage1Only => "stop at stage 1",
        }
    }
}

impl std::str::FromStr for Conditioning {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(Conditioning::All),
            "stage2_only" => Ok(Conditioning::Stage2Only),
            "stage1_only" => Ok(Conditioning::Stage1Only),
            other => Err(format!(
                "unknown conditioning `{other}` (expected all, stage2_only or stage1_only)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub theta: f64,
    pub design: TwoStageDesign,
    pub replicates: u64,
    pub seed: u64,
    pub conditioning: Conditioning,
}

impl Scenario {
    pub fn new(theta: f64, design: TwoStageDesign, replicates: u64, seed: u64) -> Self {
        Self {
            theta,
            design,
            replicates,
            seed,
            conditioning: Conditioning::All,
        }
    }

    pub fn conditioned(mut self, conditioning: Conditioning) -> Self {
        self.conditioning = conditioning;
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() {
            return Err(domain("theta", self.theta, "finite"));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidInput("replicates must be at least 1".into()));
        }
        Ok(())
    }
}

/// One simulated trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateRecord {
    pub z1: f64,
    pub stopped_stage: Stage,
    pub z2: Option<f64>,
    pub estimates: EstimateSet,
}

fn draw_z1<R: Rng + ?Sized>(rng: &mut R, params: &CanonicalParams) -> f64 {
    params.mu1 + rng.sample::<f64, _>(StandardNormal)
}

fn complete<R: Rng + ?Sized>(
    rng: &mut R,
    z1: f64,
    params: &CanonicalParams,
    design: &TwoStageDesign,
) -> Result<ReplicateRecord> {
    let z2 = if z1 >= design.e1 {
        None
    } else {
        let noise: f64 = rng.sample(StandardNormal);
        let rho = params.rho;
        Some(params.mu2 + rho * (z1 - params.mu1) + (1.0 - rho * rho).sqrt() * noise)
    };
    let outcome = ObservedOutcome::from_canonical(*design, z1, z2)?;
    Ok(ReplicateRecord {
        z1,
        stopped_stage: outcome.stopped_stage,
        z2: outcome.z2,
        estimates: estimate_outcome(&outcome)?,
    })
}

/// Draws one trial from the canonical joint distribution and estimates it.
///
/// `Z₁ ~ N(θ√I₁, 1)`; if it does not cross `e₁`,
/// `Z₂ | Z₁ ~ N(θ√I₂ + ρ(Z₁ - θ√I₁), 1 - ρ²)` with `ρ = √(I₁/I₂)`.
pub fn simulate_replicate<R: Rng + ?Sized>(
    rng: &mut R,
    params: &CanonicalParams,
    design: &TwoStageDesign,
) -> Result<ReplicateRecord> {
    let z1 = draw_z1(rng, params);
    complete(rng, z1, params, design)
}

fn simulate_conditioned<R: Rng + ?Sized>(
    rng: &mut R,
    params: &CanonicalParams,
    design: &TwoStageDesign,
    conditioning: Conditioning,
) -> Result<ReplicateRecord> {
    for _ in 0..MAX_ATTEMPTS {
        let z1 = draw_z1(rng, params);
        if conditioning.accepts(z1 >= design.e1) {
            return complete(rng, z1, params, design);
        }
    }
    Err(Error::Starvation {
        event: conditioning.event(),
        probability: 1.0 / MAX_ATTEMPTS as f64,
    })
}

fn probe_conditioning(s: &Scenario, params: &CanonicalParams) -> Result<()> {
    if s.conditioning == Conditioning::All {
        return Ok(());
    }
    let mut rng = replicate_rng(s.seed, PROBE_STREAM);
    let hits = (0..PROBE_DRAWS)
        .filter(|_| s.conditioning.accepts(draw_z1(&mut rng, params) >= s.design.e1))
        .count();
    let probability = hits as f64 / PROBE_DRAWS as f64;
    if probability < MIN_EVENT_PROBABILITY {
        return Err(Error::Starvation {
            event: s.conditioning.event(),
            probability,
        });
    }
    Ok(())
}

/// Every replicate of the scenario, in replicate order.
pub fn simulate_records(s: &Scenario) -> Result<Vec<ReplicateRecord>> {
    s.validate()?;
    let params = canonical_params(s.theta, &s.design);
    probe_conditioning(s, &params)?;
    (0..s.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(s.seed, r);
            simulate_conditioned(&mut rng, &params, &s.design, s.conditioning)
        })
        .collect()
}

/// Analytic probability of stopping at the interim, `1 - Φ(e₁ - θ√I₁)`.
pub fn stop_probability(theta: f64, design: &TwoStageDesign) -> f64 {
    std_normal_sf(design.e1 - theta * design.i1.sqrt())
}

/// Summary together with the per-replicate records it was computed from.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub summary: ScenarioSummary,
    pub records: Vec<ReplicateRecord>,
}

impl ScenarioRun {
    pub fn execute(s: &Scenario) -> Result<Self> {
        let records = simulate_records(s)?;
        let summary = summarize(
            s.theta,
            s.design,
            s.seed,
            s.conditioning,
            stop_probability(s.theta, &s.design),
            &records,
        );
        Ok(Self { summary, records })
    }
}

pub fn run_scenario(s: &Scenario) -> Result<ScenarioSummary> {
    Ok(ScenarioRun::execute(s)?.summary)
}
