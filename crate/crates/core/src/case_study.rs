//! The MUSEC trial (multiple sclerosis, cannabis extract): a two-stage OBF
//! design that continued past a close interim look. Observed data, published
//! results, and reproductions of the published tables.

use serde::Serialize;

use crate::design::{AnalysisCounts, ArmCounts, BinaryTrialData, EfficacyBoundaries, TwoStageDesign};
use crate::error::Result;
use crate::estimators::{estimate_all, Estimator, ObservedOutcome, PerEstimator};
use crate::simulation::{
    default_edges, export_histogram, run_scenario, Conditioning, Histogram, Scenario, ScenarioRun,
    ScenarioSummary, CONDITIONAL_SEED_OFFSET,
};

/// Placebo vs extract arm, cumulative counts of patients with relief from
/// muscle stiffness at the interim and final analyses.
pub fn musec_data() -> BinaryTrialData {
    BinaryTrialData {
        interim: AnalysisCounts::new(ArmCounts::new(12, 97), ArmCounts::new(27, 101)),
        final_: AnalysisCounts::new(ArmCounts::new(21, 134), ArmCounts::new(42, 143)),
    }
}

/// Published (rounded) OBF boundaries, 2.797 at the interim and 1.977 at the end.
pub fn musec_boundaries() -> EfficacyBoundaries {
    EfficacyBoundaries { e1: 2.797, e2: 1.977 }
}

/// Published boundaries with the observed information at each analysis.
pub fn musec_design() -> TwoStageDesign {
    musec_outcome().design
}

pub fn musec_outcome() -> ObservedOutcome {
    ObservedOutcome::from_binary(&musec_data(), &musec_boundaries()).expect("MUSEC data are valid")
}

/// Treatment differences at which the simulation study is run.
pub const STUDY_THETAS: [f64; 3] = [0.10, 0.14, 0.18];

/// Assumed true difference for the bootstrap standard errors.
pub const BOOTSTRAP_THETA: f64 = 0.14;

/// Published point estimate, bootstrap SE and rounded relative difference
/// (percent, `None` for the reference MLE) for each estimator.
pub fn table4_reference(e: Estimator) -> (f64, f64, Option<i64>) {
    // Published values, rounded as reported.
    match e {
        Estimator::MleOverall => (0.1370, 0.054, None),
        Estimator::MleStage1 => (0.1436, 0.057, Some(5)),
        Estimator::Mue => (0.1341, 0.054, Some(-2)),
        Estimator::Umvue => (0.1278, 0.054, Some(-7)),
        Estimator::UbcMle => (0.1328, 0.055, Some(-3)),
        Estimator::MleStage2Increment => (0.1139, 0.111, Some(-17)),
        Estimator::Umvcue => (0.1724, 0.071, Some(26)),
        Estimator::CbcMle => (0.1909, 0.073, Some(39)),
    }
}

/// Published simulation mean and SD at each of [`STUDY_THETAS`].
pub fn table5_reference(e: Estimator) -> [(f64, f64); 3] {
    // Columns follow STUDY_THETAS.
    match e {
        Estimator::MleOverall => [(0.103, 0.054), (0.144, 0.054), (0.184, 0.053)],
        Estimator::MleStage1 => [(0.100, 0.057), (0.140, 0.057), (0.180, 0.057)],
        Estimator::Mue => [(0.101, 0.053), (0.142, 0.054), (0.182, 0.054)],
        Estimator::Umvue => [(0.100, 0.052), (0.140, 0.054), (0.180, 0.055)],
        Estimator::UbcMle => [(0.101, 0.054), (0.142, 0.055), (0.183, 0.054)],
        Estimator::MleStage2Increment => [(0.100, 0.111), (0.140, 0.111), (0.180, 0.111)],
        Estimator::Umvcue => [(0.100, 0.062), (0.140, 0.071), (0.179, 0.080)],
        Estimator::CbcMle => [(0.111, 0.067), (0.154, 0.073), (0.194, 0.078)],
    }
}

/// Published stage-1 stopping probabilities, rounded to two places.
pub const TABLE5_STOP_PROBABILITIES: [f64; 3] = [0.15, 0.37, 0.65];

/// Trials stopping at the interim: published stage-1 MLE mean and SD.
pub const TABLE6_STAGE1_STOP: [(f64, f64); 3] = [(0.188, 0.025), (0.197, 0.031), (0.212, 0.038)];

/// Mean of the stage-1 MLE among trials stopping at the interim, from the
/// truncated-normal formula.
pub fn analytic_stage1_stop_mean(theta: f64) -> f64 {
    theta + crate::estimators::conditional_bias_stage1_stop(theta, &musec_design())
}

/// Trials continuing to stage 2: published unconditional estimator means and SDs.
pub fn table6_continuer_reference(e: Estimator) -> Option<[(f64, f64); 3]> {
    match e {
        Estimator::MleOverall => Some([(0.087, 0.043), (0.113, 0.038), (0.132, 0.033)]),
        Estimator::MleStage1 => Some([(0.084, 0.045), (0.106, 0.038), (0.120, 0.030)]),
        Estimator::Mue => Some([(0.086, 0.041), (0.109, 0.034), (0.126, 0.027)]),
        Estimator::Umvue => Some([(0.084, 0.039), (0.106, 0.030), (0.120, 0.023)]),
        Estimator::UbcMle => Some([(0.085, 0.041), (0.110, 0.036), (0.128, 0.032)]),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table4Row {
    pub estimator: Estimator,
    pub label: &'static str,
    pub estimate: f64,
    pub published_estimate: f64,
    pub abs_deviation: f64,
    pub relative_difference_percent: Option<i64>,
    pub published_relative_difference_percent: Option<i64>,
    pub se: Option<f64>,
    pub published_se: f64,
    pub se_abs_deviation: Option<f64>,
}

/// Point estimates from the MUSEC data, optionally with bootstrap SEs
/// (`Some((replicates, seed))`) under θ = [`BOOTSTRAP_THETA`].
pub fn table4(bootstrap: Option<(u64, u64)>) -> Result<Vec<Table4Row>> {
    let mut set = estimate_all(&musec_data(), &musec_boundaries())?;
    if let Some((reps, seed)) = bootstrap {
        set.standard_errors = Some(crate::simulation::bootstrap_se(
            &musec_design(),
            BOOTSTRAP_THETA,
            reps,
            seed,
        )?);
    }
    Ok(table4_order()
        .into_iter()
        .map(|e| {
            let (published_estimate, published_se, published_rel) = table4_reference(e);
            let estimate = set.get(e).expect("MUSEC continued to stage 2");
            let se = set.standard_errors.as_ref().and_then(|s| *s.get(e));
            Table4Row {
                estimator: e,
                label: e.label(),
                estimate,
                published_estimate,
                abs_deviation: (estimate - published_estimate).abs(),
                relative_difference_percent: (e != Estimator::MleOverall)
                    .then(|| set.relative_difference(e))
                    .flatten(),
                published_relative_difference_percent: published_rel,
                se,
                published_se,
                se_abs_deviation: se.map(|s| (s - published_se).abs()),
            }
        })
        .collect())
}

/// Row order of the published table: naive, unconditional, conditional.
pub fn table4_order() -> [Estimator; 8] {
    [
        Estimator::MleOverall,
        Estimator::MleStage1,
        Estimator::Mue,
        Estimator::Umvue,
        Estimator::UbcMle,
        Estimator::MleStage2Increment,
        Estimator::Umvcue,
        Estimator::CbcMle,
    ]
}

/// Unconditional and stage-2-conditioned runs at one θ.
#[derive(Debug, Clone, Serialize)]
pub struct StudyPoint {
    pub theta: f64,
    pub unconditional: ScenarioSummary,
    pub stage2_only: ScenarioSummary,
}

/// The simulation study over [`STUDY_THETAS`] on the MUSEC design.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationStudy {
    pub replicates: u64,
    pub seed: u64,
    pub points: Vec<StudyPoint>,
}

pub fn run_simulation_study(replicates: u64, seed: u64) -> Result<SimulationStudy> {
    let design = musec_design();
    let points = STUDY_THETAS
        .iter()
        .map(|&theta| {
            let base = Scenario::new(theta, design, replicates, seed);
            let conditional = Scenario {
                seed: seed.wrapping_add(CONDITIONAL_SEED_OFFSET),
                ..base
            }
            .conditioned(Conditioning::Stage2Only);
            Ok(StudyPoint {
                theta,
                unconditional: run_scenario(&base)?,
                stage2_only: run_scenario(&conditional)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimulationStudy {
        replicates,
        seed,
        points,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationRow {
    pub theta: f64,
    /// `all`, `stage1_stop` or `stage2_continue`.
    pub group: &'static str,
    pub estimator: Estimator,
    pub mean: f64,
    pub sd: Option<f64>,
    pub published_mean: f64,
    pub published_sd: f64,
    pub mean_abs_deviation: f64,
    pub sd_abs_deviation: Option<f64>,
}

impl SimulationRow {
    fn new(
        theta: f64,
        group: &'static str,
        estimator: Estimator,
        column: &PerEstimator<Option<crate::simulation::MeanSd>>,
        (published_mean, published_sd): (f64, f64),
    ) -> Option<Self> {
        let m = (*column.get(estimator))?;
        Some(Self {
            theta,
            group,
            estimator,
            mean: m.mean,
            sd: m.sd,
            published_mean,
            published_sd,
            mean_abs_deviation: (m.mean - published_mean).abs(),
            sd_abs_deviation: m.sd.map(|sd| (sd - published_sd).abs()),
        })
    }
}

impl SimulationStudy {
    /// Means and SDs of all eight estimators: unconditional ones over all
    /// replicates, conditional ones over stage-2-conditioned replicates.
    pub fn table5(&self) -> Vec<SimulationRow> {
        let mut rows = Vec::new();
        for e in table4_order() {
            let reference = table5_reference(e);
            for (k, point) in self.points.iter().enumerate() {
                let source = if e.is_conditional() {
                    &point.stage2_only.overall
                } else {
                    &point.unconditional.overall
                };
                rows.extend(SimulationRow::new(point.theta, "all", e, source, reference[k]));
            }
        }
        rows
    }

    /// Unconditional estimators split by stopping stage.
    pub fn table6(&self) -> Vec<SimulationRow> {
        let mut rows = Vec::new();
        for (k, point) in self.points.iter().enumerate() {
            rows.extend(SimulationRow::new(
                point.theta,
                "stage1_stop",
                Estimator::MleStage1,
                &point.unconditional.stage1_stoppers,
                TABLE6_STAGE1_STOP[k],
            ));
        }
        for e in table4_order() {
            let Some(reference) = table6_continuer_reference(e) else { continue };
            for (k, point) in self.points.iter().enumerate() {
                rows.extend(SimulationRow::new(
                    point.theta,
                    "stage2_continue",
                    e,
                    &point.unconditional.stage2_continuers,
                    reference[k],
                ));
            }
        }
        rows
    }
}

/// Sampling distributions at θ = 0.14 under the default binning: unconditional
/// estimators from all replicates, conditional ones from replicates that
/// continue to stage 2.
pub fn figure2_data(replicates: u64, seed: u64) -> Result<Histogram> {
    figure2_data_with_edges(replicates, seed, &default_edges())
}

pub fn figure2_data_with_edges(replicates: u64, seed: u64, edges: &[f64]) -> Result<Histogram> {
    let base = Scenario::new(BOOTSTRAP_THETA, musec_design(), replicates, seed);
    let conditional = Scenario {
        seed: seed.wrapping_add(CONDITIONAL_SEED_OFFSET),
        ..base
    }
    .conditioned(Conditioning::Stage2Only);
    let all = export_histogram(&ScenarioRun::execute(&base)?.records, edges)?;
    let stage2 = export_histogram(&ScenarioRun::execute(&conditional)?.records, edges)?;
    all.splice(&stage2, Estimator::is_conditional)
}
