//! O'Brien-Fleming boundaries for a two-look design at several levels.
//!
//! Run with `cargo run --example obf_boundaries`.

use seqest::design::obf_boundaries;

fn main() -> seqest::Result<()> {
    println!("{:>6} {:>9} {:>8} {:>8} {:>12}", "alpha", "fraction", "C", "e1", "interim p");
    for alpha in [0.05, 0.025, 0.01] {
        for fraction in [0.5, 0.8] {
            let b = obf_boundaries(alpha, fraction)?;
            println!(
                "{:>6} {:>9} {:>8.4} {:>8.4} {:>12.6}",
                alpha, fraction, b.constant, b.e1, b.interim_p_threshold
            );
        }
    }
    Ok(())
}
