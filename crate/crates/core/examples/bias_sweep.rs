//! Bias of the MLE after an OBF two-look trial with a normal endpoint, by
//! stopping stage, for small, medium and large trials.
//!
//! Run with `cargo run --release --example bias_sweep`.

use seqest::design::NormalEndpointSpec;
use seqest::simulation::{bias_sweep, McCheck};

fn main() -> seqest::Result<()> {
    let sizes = [40, 100, 620]
        .into_iter()
        .map(|n| NormalEndpointSpec::new(n, 1.0))
        .collect::<seqest::Result<Vec<_>>>()?;
    let grid: Vec<f64> = (0..=6).map(|i| -0.5 + 0.25 * i as f64).collect();
    let check = McCheck {
        replicates: 20_000,
        seed: 3,
    };
    let rows = bias_sweep(&sizes, 0.05, &grid, Some(check))?;

    println!(
        "{:>4} {:>6} {:>10} {:>10} {:>10} {:>8} {:>10}",
        "n", "theta", "stop", "continue", "overall", "P(stop)", "overall MC"
    );
    for r in rows {
        let mc = r.mc.expect("requested");
        println!(
            "{:>4} {:>6.2} {:>10.4} {:>10.4} {:>10.4} {:>8.4} {:>10.4}",
            r.n, r.theta, r.bias_stop_stage1, r.bias_continue_stage2, r.bias_unconditional, r.prob_stop, mc.bias_unconditional
        );
    }
    Ok(())
}
