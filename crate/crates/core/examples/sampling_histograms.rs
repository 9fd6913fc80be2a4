//! Sampling distributions of the estimators at a true difference of 0.14,
//! drawn as text histograms. The MUE is smooth where the UMVUE is jagged.
//!
//! Run with `cargo run --release --example sampling_histograms -- [reps]`.

use seqest::case_study::figure2_data_with_edges;
use seqest::estimators::Estimator;

fn main() -> seqest::Result<()> {
    let reps: u64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(50_000);
    let edges: Vec<f64> = (0..=35).map(|i| -0.2 + 0.02 * i as f64).collect();
    let h = figure2_data_with_edges(reps, 11, &edges)?;

    for e in [Estimator::MleOverall, Estimator::Mue, Estimator::Umvue, Estimator::Umvcue] {
        let counts = h.counts.get(e);
        let peak = counts.iter().copied().max().unwrap_or(1).max(1);
        println!("\n{} (max bin jump {})", e.label(), h.max_bin_jump(e));
        for (i, &c) in counts.iter().enumerate() {
            let bar = "#".repeat((60 * c / peak) as usize);
            println!("{:>6.2} {bar}", edges[i]);
        }
    }
    Ok(())
}
