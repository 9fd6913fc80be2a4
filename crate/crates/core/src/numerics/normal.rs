//! Univariate standard normal functions and truncated-normal means.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::error::{domain, Result};

/// Beyond this many standard deviations the tail ratio switches to the
/// continued-fraction expansion.
const TAIL_SWITCH: f64 = 8.0;
const TAIL_TERMS: usize = 60;

/// Density of the standard normal distribution.
#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Distribution function of the standard normal, accurate in both tails.
#[inline]
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Φ(x)`, computed without cancellation.
#[inline]
pub fn std_normal_sf(x: f64) -> f64 {
    std_normal_cdf(-x)
}

/// Inverse of [`std_normal_cdf`] on the open unit interval.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("p", p, "0 < p < 1"));
    }
    // statrs' inverse is only a starting point; Halley steps against the
    // accurate forward function bring it to full precision.
    let mut x = -SQRT_2 * erfc_inv(2.0 * p);
    for _ in 0..2 {
        // Φ(x) - p, taken in whichever tail avoids cancellation.
        let err = if p < 0.5 {
            std_normal_cdf(x) - p
        } else {
            (1.0 - p) - std_normal_sf(x)
        };
        let pdf = std_normal_pdf(x);
        if pdf == 0.0 || err == 0.0 {
            break;
        }
        let step = err / pdf;
        x -= step / (1.0 + 0.5 * x * step);
    }
    Ok(x)
}

/// `ϕ(u) / (1 - Φ(u))`, the hazard of the standard normal at `u`.
///
/// For `u > 8` the quotient is evaluated through Laplace's continued fraction
/// for the Mills ratio, which stays finite where both numerator and
/// denominator underflow.
pub fn upper_tail_ratio(u: f64) -> f64 {
    if u.is_nan() {
        return f64::NAN;
    }
    if u == f64::NEG_INFINITY {
        return 0.0;
    }
    if u == f64::INFINITY {
        return f64::INFINITY;
    }
    if u > TAIL_SWITCH {
        // Mills ratio R(u) = 1/(u + 1/(u + 2/(u + 3/(u + ...))))
        let mut tail = u;
        for k in (1..=TAIL_TERMS).rev() {
            tail = u + k as f64 / tail;
        }
        return tail;
    }
    std_normal_pdf(u) / std_normal_sf(u)
}

/// `ϕ(u) / Φ(u)`.
#[inline]
pub fn lower_tail_ratio(u: f64) -> f64 {
    upper_tail_ratio(-u)
}

/// Which side of the cut point the normal variate is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationSide {
    /// Keep values `< cut`.
    BelowCut,
    /// Keep values `≥ cut`.
    AboveCut,
}

/// Mean of a `Normal(mu, sigma²)` variate truncated to one side of `cut`.
pub fn truncated_normal_mean(mu: f64, sigma: f64, side: TruncationSide, cut: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain("sigma", sigma, "0 < sigma < inf"));
    }
    let u = (cut - mu) / sigma;
    Ok(match side {
        TruncationSide::AboveCut => mu + sigma * upper_tail_ratio(u),
        TruncationSide::BelowCut => mu - sigma * lower_tail_ratio(u),
    })
}
