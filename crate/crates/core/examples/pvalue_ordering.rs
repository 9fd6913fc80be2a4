//! The stagewise-ordering p-value as a function of the hypothesised
//! difference, and the median unbiased estimate where it crosses one half.
//!
//! Run with `cargo run --example pvalue_ordering`.

use seqest::case_study::musec_outcome;
use seqest::estimators::{mue, stagewise_pvalue};

fn main() -> seqest::Result<()> {
    let outcome = musec_outcome();
    for k in 0..=10 {
        let theta = 0.04 + 0.02 * k as f64;
        println!("theta = {theta:.2}  P(more extreme) = {:.4}", stagewise_pvalue(theta, &outcome));
    }
    println!("median unbiased estimate: {:.4}", mue(&outcome)?);
    Ok(())
}
