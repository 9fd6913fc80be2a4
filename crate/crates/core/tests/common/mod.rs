//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the closed forms under test.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use seqest::design::TwoStageDesign;

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

/// `E[θ̂₁ | S = s, Z₁ < e₁]` and `E[θ̂₂ | S = s, Z₁ < e₁]` where
/// `S = √I₁Z₁ + Y₂` is the final score, computed by integrating the raw joint
/// likelihood of the stage-1 statistic and the independent stage-2 score
/// increment at an arbitrary `theta`. The answer must not depend on it.
pub fn rao_blackwell_by_quadrature(design: &TwoStageDesign, z2: f64, theta: f64) -> (f64, f64) {
    let TwoStageDesign { e1, i1, i2, .. } = *design;
    let s = z2 * i2.sqrt();
    let di = i2 - i1;
    // log f(z1 | s) up to a constant
    let log_density = |z1: f64| {
        let a = z1 - theta * i1.sqrt();
        let y2 = s - i1.sqrt() * z1;
        let b = (y2 - theta * di) / di.sqrt();
        -0.5 * (a * a + b * b)
    };
    // The conditional law of Z1 is normal with mean ρz₂ and sd √(1-ρ²);
    // used only to place the integration window.
    let rho = (i1 / i2).sqrt();
    let (m, sd) = (rho * z2, (1.0 - rho * rho).sqrt());
    let hi = e1.min(m + 14.0 * sd);
    let lo = hi.min(m) - 14.0 * sd;
    let peak = log_density(hi.min(m));
    let w = |z1: f64| (log_density(z1) - peak).exp();
    let panels = 40_000;
    let mass = simpson(w, lo, hi, panels);
    let first = simpson(|z| w(z) * z / i1.sqrt(), lo, hi, panels) / mass;
    let second = simpson(|z| w(z) * (s - i1.sqrt() * z) / di, lo, hi, panels) / mass;
    (first, second)
}

/// Monte Carlo probability, under `theta`, that a trial is at least as
/// extreme as the observed stage-2 outcome `z2` in the stage-wise ordering:
/// it stops at the interim, or continues and ends with `Z₂ ≥ z2`.
pub fn stagewise_pvalue_mc(design: &TwoStageDesign, z2_obs: f64, theta: f64, reps: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = (design.i1 / design.i2).sqrt();
    let tail = (1.0 - rho * rho).sqrt();
    let (mu1, mu2) = (theta * design.i1.sqrt(), theta * design.i2.sqrt());
    let mut hits = 0u64;
    for _ in 0..reps {
        let a: f64 = rng.sample(StandardNormal);
        let z1 = mu1 + a;
        if z1 >= design.e1 {
            hits += 1;
            continue;
        }
        let b: f64 = rng.sample(StandardNormal);
        let z2 = mu2 + rho * a + tail * b;
        if z2 >= z2_obs {
            hits += 1;
        }
    }
    let p = hits as f64 / reps as f64;
    (p, (p * (1.0 - p) / reps as f64).sqrt())
}

/// Random stage-2 outcomes over a wide range of designs.
pub fn random_stage2_outcomes(count: usize, seed: u64) -> Vec<(TwoStageDesign, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let i1 = rng.random_range(20.0..600.0);
            let fraction: f64 = rng.random_range(0.25..0.9);
            let i2 = i1 / fraction;
            let e1 = rng.random_range(1.5..3.5);
            let design = TwoStageDesign::new(e1, 1.96, i1, i2).unwrap();
            let z1 = e1 - rng.random_range(0.01..4.0);
            let noise: f64 = rng.sample(StandardNormal);
            let rho = fraction.sqrt();
            let z2 = rho * z1 + (1.0 - rho * rho).sqrt() * noise * 1.5;
            (design, z1, z2)
        })
        .collect()
}

/// `P(X ≤ h, Y ≤ k)` for a standard bivariate normal with correlation `r`,
/// by nested Simpson integration of the density over `[-10, h] × [-10, k]`.
pub fn bivariate_cdf_by_quadrature(h: f64, k: f64, r: f64, panels: usize) -> f64 {
    let q = 1.0 - r * r;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * q.sqrt());
    let (lo_x, lo_y) = (-10.0_f64, -10.0_f64);
    if h <= lo_x || k <= lo_y {
        return 0.0;
    }
    simpson(
        |x| {
            simpson(
                |y| norm * (-(x * x - 2.0 * r * x * y + y * y) / (2.0 * q)).exp(),
                lo_y,
                k,
                panels,
            )
        },
        lo_x,
        h,
        panels,
    )
}
