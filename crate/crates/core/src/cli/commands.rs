use std::path::Path;

use serde::Serialize;

use super::output::{format_f64, format_opt, write_json, CsvTable, RunManifest};
use super::{BoundariesArgs, CaseStudyArgs, CliError, Command, EstimateArgs, Format, SimulateArgs, SweepArgs, Which};
use crate::case_study::{self, SimulationRow, STUDY_THETAS, TABLE5_STOP_PROBABILITIES};
use crate::design::{obf_boundaries, NormalEndpointSpec, TwoStageDesign};
use crate::estimators::{estimate_all, Estimator, EstimateSet};
use crate::simulation::{
    bias_sweep, bootstrap_se, default_edges, export_histogram, Histogram, McCheck, ReplicateRecord, Scenario,
    ScenarioRun, ScenarioSummary, SweepRow,
};

pub(super) fn dispatch(command: &Command, argv: &[String]) -> Result<(), CliError> {
    match command {
        Command::Estimate(a) => estimate(a, argv),
        Command::Simulate(a) => simulate(a, argv),
        Command::Sweep(a) => sweep(a, argv),
        Command::Boundaries(a) => boundaries(a, argv),
        Command::CaseStudy(a) => case_study(a, argv),
    }
}

#[derive(Serialize)]
struct EstimateRow {
    estimator: Estimator,
    label: &'static str,
    conditional: bool,
    estimate: Option<f64>,
    relative_difference_percent: Option<i64>,
    se: Option<f64>,
}

#[derive(Serialize)]
struct EstimateDocument {
    manifest: RunManifest,
    design: TwoStageDesign,
    stopped_stage: crate::estimators::Stage,
    estimates: Vec<EstimateRow>,
    bootstrap: Option<BootstrapInfo>,
}

#[derive(Serialize)]
struct BootstrapInfo {
    replicates: u64,
    theta_assumed: f64,
    seed: u64,
}

fn estimate_rows(set: &EstimateSet) -> Vec<EstimateRow> {
    Estimator::ALL
        .into_iter()
        .map(|e| EstimateRow {
            estimator: e,
            label: e.label(),
            conditional: e.is_conditional(),
            estimate: set.get(e),
            relative_difference_percent: set.relative_difference(e),
            se: set.standard_errors.as_ref().and_then(|s| *s.get(e)),
        })
        .collect()
}

fn estimate(a: &EstimateArgs, argv: &[String]) -> Result<(), CliError> {
    let spec = super::read_design(&a.design)?;
    let data = super::read_data(&a.data)?;
    let boundaries = spec.boundaries()?;
    let outcome = crate::estimators::ObservedOutcome::from_binary(&data, &boundaries)?;
    let mut set = estimate_all(&data, &boundaries)?;
    let bootstrap = match (a.bootstrap_se, a.theta_assumed) {
        (Some(replicates), Some(theta_assumed)) => {
            set.standard_errors = Some(bootstrap_se(&outcome.design, theta_assumed, replicates, a.seed)?);
            Some(BootstrapInfo {
                replicates,
                theta_assumed,
                seed: a.seed,
            })
        }
        _ => None,
    };
    let doc = EstimateDocument {
        manifest: RunManifest::new(
            argv,
            serde_json::json!({ "args": a, "design_spec": spec, "data": data }),
            bootstrap.as_ref().map(|b| b.seed),
        ),
        design: outcome.design,
        stopped_stage: set.stopped_stage,
        estimates: estimate_rows(&set),
        bootstrap,
    };
    write_json(a.out.as_deref(), &doc)
}

#[derive(Serialize)]
struct SimulateDocument {
    manifest: RunManifest,
    summary: ScenarioSummary,
}

fn records_table(records: &[ReplicateRecord]) -> CsvTable {
    let mut table = CsvTable::new(
        ["replicate", "z1", "stopped_stage", "z2"]
            .into_iter()
            .map(String::from)
            .chain(Estimator::ALL.iter().map(|e| e.key().to_string())),
    );
    for (i, r) in records.iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            format_f64(r.z1),
            u8::from(r.stopped_stage).to_string(),
            format_opt(r.z2),
        ];
        row.extend(Estimator::ALL.iter().map(|&e| format_opt(r.estimates.get(e))));
        table.push(row);
    }
    table
}

fn histogram_table(h: &Histogram) -> CsvTable {
    let mut table = CsvTable::new(
        ["bin_lower", "bin_upper"]
            .into_iter()
            .map(String::from)
            .chain(Estimator::ALL.iter().map(|e| e.key().to_string())),
    );
    let edges = &h.bin_edges;
    let mut underflow = vec!["-inf".to_string(), format_f64(edges[0])];
    underflow.extend(Estimator::ALL.iter().map(|&e| h.underflow.get(e).to_string()));
    table.push(underflow);
    for (i, w) in edges.windows(2).enumerate() {
        let mut row = vec![format_f64(w[0]), format_f64(w[1])];
        row.extend(Estimator::ALL.iter().map(|&e| h.counts.get(e)[i].to_string()));
        table.push(row);
    }
    let mut overflow = vec![format_f64(edges[edges.len() - 1]), "inf".to_string()];
    overflow.extend(Estimator::ALL.iter().map(|&e| h.overflow.get(e).to_string()));
    table.push(overflow);
    table
}

fn simulate(a: &SimulateArgs, argv: &[String]) -> Result<(), CliError> {
    let design = TwoStageDesign::new(a.e1, a.e2, a.i1, a.i2)?;
    if !a.theta.is_finite() {
        return Err(CliError::Validation(format!("theta must be finite, got {}", a.theta)));
    }
    if a.reps == 0 {
        return Err(CliError::Validation("reps must be at least 1".into()));
    }
    let scenario = Scenario::new(a.theta, design, a.reps, a.seed).conditioned(a.conditioning);
    let run = ScenarioRun::execute(&scenario)?;
    let manifest = RunManifest::new(argv, a, Some(a.seed));
    if let Some(path) = &a.records_out {
        records_table(&run.records).write(Some(path), &manifest)?;
    }
    if let Some(path) = &a.hist_out {
        histogram_table(&export_histogram(&run.records, &default_edges())?).write(Some(path), &manifest)?;
    }
    write_json(
        a.out.as_deref(),
        &SimulateDocument {
            manifest,
            summary: run.summary,
        },
    )
}

fn theta_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(min.is_finite() && max.is_finite() && max > min) || steps < 2 {
        return Err(CliError::Validation(format!(
            "invalid theta grid: need finite theta-min < theta-max and at least 2 steps (got {min}, {max}, {steps})"
        )));
    }
    Ok((0..steps)
        .map(|i| if i + 1 == steps { max } else { min + (max - min) * i as f64 / (steps - 1) as f64 })
        .collect())
}

fn sweep_table(rows: &[SweepRow], with_mc: bool) -> CsvTable {
    let mut header: Vec<&str> = vec![
        "n",
        "theta",
        "bias_stop_stage1",
        "bias_continue_stage2",
        "bias_unconditional",
        "prob_stop",
    ];
    if with_mc {
        header.extend([
            "mc_bias_stop_stage1",
            "mc_bias_stop_stage1_se",
            "mc_bias_continue_stage2",
            "mc_bias_continue_stage2_se",
            "mc_bias_unconditional",
            "mc_bias_unconditional_se",
            "mc_prob_stop",
            "mc_prob_stop_se",
        ]);
    }
    let mut table = CsvTable::new(header);
    for r in rows {
        let mut row = vec![
            r.n.to_string(),
            format_f64(r.theta),
            format_f64(r.bias_stop_stage1),
            format_f64(r.bias_continue_stage2),
            format_f64(r.bias_unconditional),
            format_f64(r.prob_stop),
        ];
        if let Some(mc) = r.mc.filter(|_| with_mc) {
            row.extend([
                format_opt(mc.bias_stop_stage1),
                format_opt(mc.bias_stop_stage1_se),
                format_opt(mc.bias_continue_stage2),
                format_opt(mc.bias_continue_stage2_se),
                format_f64(mc.bias_unconditional),
                format_f64(mc.bias_unconditional_se),
                format_f64(mc.prob_stop),
                format_f64(mc.prob_stop_se),
            ]);
        }
        table.push(row);
    }
    table
}

fn sweep(a: &SweepArgs, argv: &[String]) -> Result<(), CliError> {
    let grid = theta_grid(a.theta_min, a.theta_max, a.theta_steps)?;
    let specs = a
        .n_list
        .iter()
        .map(|&n| NormalEndpointSpec::new(n, a.sd))
        .collect::<crate::Result<Vec<_>>>()?;
    let mc = a.mc_check.map(|replicates| McCheck {
        replicates,
        seed: a.seed,
    });
    let rows = bias_sweep(&specs, a.alpha, &grid, mc)?;
    let manifest = RunManifest::new(argv, a, mc.map(|m| m.seed));
    sweep_table(&rows, mc.is_some()).write(a.out.as_deref(), &manifest)
}

#[derive(Serialize)]
struct BoundariesDocument {
    manifest: RunManifest,
    alpha: f64,
    sided: super::Sided,
    interim_fraction: f64,
    constant: f64,
    e1: f64,
    e2: f64,
    interim_p_threshold: f64,
}

fn boundaries(a: &BoundariesArgs, argv: &[String]) -> Result<(), CliError> {
    let b = obf_boundaries(a.alpha, a.interim_fraction)?;
    write_json(
        a.out.as_deref(),
        &BoundariesDocument {
            manifest: RunManifest::new(argv, a, None),
            alpha: b.alpha,
            sided: a.sided,
            interim_fraction: b.interim_fraction,
            constant: b.constant,
            e1: b.e1,
            e2: b.e2,
            interim_p_threshold: b.interim_p_threshold,
        },
    )
}

#[derive(Serialize)]
struct StopProbabilityRow {
    theta: f64,
    analytic: f64,
    empirical: f64,
    published: f64,
    abs_deviation: f64,
}

#[derive(Serialize)]
struct Stage1StopAnalyticRow {
    theta: f64,
    analytic_mean: f64,
    published_mean: f64,
    abs_deviation: f64,
}

fn simulation_table(rows: &[SimulationRow]) -> CsvTable {
    let mut table = CsvTable::new([
        "theta",
        "group",
        "estimator",
        "label",
        "mean",
        "sd",
        "published_mean",
        "published_sd",
        "mean_abs_deviation",
        "sd_abs_deviation",
    ]);
    for r in rows {
        table.push(vec![
            format_f64(r.theta),
            r.group.to_string(),
            r.estimator.key().to_string(),
            r.estimator.label().to_string(),
            format_f64(r.mean),
            format_opt(r.sd),
            format_f64(r.published_mean),
            format_f64(r.published_sd),
            format_f64(r.mean_abs_deviation),
            format_opt(r.sd_abs_deviation),
        ]);
    }
    table
}

fn emit(
    format: Format,
    out: Option<&Path>,
    manifest: RunManifest,
    table: impl FnOnce() -> CsvTable,
    json: impl FnOnce(RunManifest) -> serde_json::Value,
) -> Result<(), CliError> {
    match format {
        Format::Csv => table().write(out, &manifest),
        Format::Json => write_json(out, &json(manifest)),
    }
}

fn case_study(a: &CaseStudyArgs, argv: &[String]) -> Result<(), CliError> {
    let manifest = RunManifest::new(argv, a, Some(a.seed));
    let out = a.out.as_deref();
    match a.which {
        Which::Table4 => {
            let bootstrap = (a.reps > 0).then_some((a.reps, a.seed));
            let rows = case_study::table4(bootstrap)?;
            emit(
                a.format,
                out,
                manifest,
                || {
                    let mut t = CsvTable::new([
                        "estimator",
                        "label",
                        "estimate",
                        "published_estimate",
                        "abs_deviation",
                        "relative_difference_percent",
                        "published_relative_difference_percent",
                        "se",
                        "published_se",
                        "se_abs_deviation",
                    ]);
                    for r in &rows {
                        t.push(vec![
                            r.estimator.key().to_string(),
                            r.label.to_string(),
                            format_f64(r.estimate),
                            format_f64(r.published_estimate),
                            format_f64(r.abs_deviation),
                            r.relative_difference_percent.map(|v| v.to_string()).unwrap_or_default(),
                            r.published_relative_difference_percent.map(|v| v.to_string()).unwrap_or_default(),
                            format_opt(r.se),
                            format_f64(r.published_se),
                            format_opt(r.se_abs_deviation),
                        ]);
                    }
                    t
                },
                |manifest| {
                    serde_json::json!({
                        "manifest": manifest,
                        "bootstrap_theta": case_study::BOOTSTRAP_THETA,
                        "rows": rows,
                    })
                },
            )
        }
        Which::Table5 | Which::Table6 => {
            if a.reps < 2 {
                return Err(CliError::Validation("simulation tables need at least 2 replicates".into()));
            }
            let study = case_study::run_simulation_study(a.reps, a.seed)?;
            let rows = if a.which == Which::Table5 { study.table5() } else { study.table6() };
            let stop: Vec<StopProbabilityRow> = study
                .points
                .iter()
                .zip(TABLE5_STOP_PROBABILITIES)
                .map(|(p, published)| StopProbabilityRow {
                    theta: p.theta,
                    analytic: p.unconditional.analytic_stop_probability,
                    empirical: p.unconditional.stop_probability_stage1,
                    published,
                    abs_deviation: (p.unconditional.analytic_stop_probability - published).abs(),
                })
                .collect();
            let analytic: Vec<Stage1StopAnalyticRow> = STUDY_THETAS
                .iter()
                .zip(case_study::TABLE6_STAGE1_STOP)
                .map(|(&theta, (published_mean, _))| {
                    let analytic_mean = case_study::analytic_stage1_stop_mean(theta);
                    Stage1StopAnalyticRow {
                        theta,
                        analytic_mean,
                        published_mean,
                        abs_deviation: (analytic_mean - published_mean).abs(),
                    }
                })
                .collect();
            let is_table6 = a.which == Which::Table6;
            emit(
                a.format,
                out,
                manifest,
                || simulation_table(&rows),
                |manifest| {
                    let mut doc = serde_json::json!({
                        "manifest": manifest,
                        "replicates": a.reps,
                        "rows": rows,
                        "stop_probabilities": stop,
                    });
                    if is_table6 {
                        doc["stage1_stop_analytic"] = serde_json::to_value(&analytic).expect("serializable");
                    }
                    doc
                },
            )
        }
        Which::Figure2Data => {
            if a.reps < 2 {
                return Err(CliError::Validation("figure data need at least 2 replicates".into()));
            }
            let h = case_study::figure2_data(a.reps, a.seed)?;
            emit(
                a.format,
                out,
                manifest,
                || histogram_table(&h),
                |manifest| {
                    serde_json::json!({
                        "manifest": manifest,
                        "theta": case_study::BOOTSTRAP_THETA,
                        "histogram": h,
                    })
                },
            )
        }
    }
}
