//! Monte Carlo operating characteristics of every estimator on the MUSEC
//! design, unconditionally and given continuation to stage 2.
//!
//! Run with `cargo run --release --example simulate_scenario -- [theta] [reps]`.

use seqest::case_study::musec_design;
use seqest::estimators::Estimator;
use seqest::simulation::{run_scenario, Conditioning, Scenario};

fn main() -> seqest::Result<()> {
    let mut args = std::env::args().skip(1);
    let theta: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.14);
    let reps: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(20_000);

    let scenario = Scenario::new(theta, musec_design(), reps, 2024);
    let all = run_scenario(&scenario)?;
    let continuing = run_scenario(&scenario.conditioned(Conditioning::Stage2Only))?;

    println!(
        "theta = {theta}, {reps} trials; stop at interim: {:.4} simulated, {:.4} exact",
        all.stop_probability_stage1, all.analytic_stop_probability
    );
    println!("{:<34} {:>8} {:>8}", "estimator", "mean", "sd");
    for e in Estimator::ALL {
        // Conditional estimators only make sense for trials that continue.
        let source = if e.is_conditional() { &continuing } else { &all };
        if let Some(m) = source.overall.get(e) {
            println!("{:<34} {:>8.4} {:>8.4}", e.label(), m.mean, m.sd.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
