//! Point estimates for the MUSEC trial, next to the published values.
//!
//! Run with `cargo run --example musec_estimates`.

use seqest::case_study::{musec_boundaries, musec_data, table4_order, table4_reference};
use seqest::design::z_statistics;
use seqest::estimators::estimate_all;

fn main() -> seqest::Result<()> {
    let data = musec_data();
    let z = z_statistics(&data)?;
    println!(
        "z1 = {:.3}, z2 = {:.3}, information fraction = {:.3}",
        z.z1,
        z.z2,
        z.i1 / z.i2
    );

    let set = estimate_all(&data, &musec_boundaries())?;
    println!("\n{:<34} {:>9} {:>10} {:>6}", "estimator", "estimate", "published", "rel%");
    for e in table4_order() {
        let (published, _, _) = table4_reference(e);
        let rel = set
            .relative_difference(e)
            .map(|r| format!("{r:+}"))
            .unwrap_or_else(|| "-".into());
        let rel = if e == seqest::estimators::Estimator::MleOverall { "-".into() } else { rel };
        println!(
            "{:<34} {:>9.4} {:>10.4} {:>6}",
            e.label(),
            set.get(e).unwrap_or(f64::NAN),
            published,
            rel
        );
    }
    Ok(())
}
