//! Parametric bootstrap standard errors for the MUSEC estimates under an
//! assumed true difference.
//!
//! Run with `cargo run --release --example bootstrap_se -- [theta] [reps]`.

use seqest::case_study::{musec_boundaries, musec_data, musec_design, table4_order};
use seqest::estimators::estimate_all;
use seqest::simulation::bootstrap_se;

fn main() -> seqest::Result<()> {
    let mut args = std::env::args().skip(1);
    let theta: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.14);
    let reps: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(20_000);

    let mut set = estimate_all(&musec_data(), &musec_boundaries())?;
    set.standard_errors = Some(bootstrap_se(&musec_design(), theta, reps, 1)?);

    println!("assumed theta = {theta}, {reps} bootstrap trials");
    for e in table4_order() {
        let se = set.standard_errors.as_ref().and_then(|s| *s.get(e));
        println!(
            "{:<34} {:.4} ({:.3})",
            e.label(),
            set.get(e).unwrap_or(f64::NAN),
            se.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
