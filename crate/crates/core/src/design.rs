//! Two-stage group sequential designs with O'Brien–Fleming efficacy
//! boundaries, statistical information, and the canonical joint
//! distribution of the stage-wise z-statistics.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::{bivariate_normal_cdf, find_root, std_normal_sf, Interval, SolverSettings};

/// Efficacy boundaries (z-scale) and information at the interim and final analyses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoStageDesign {
    pub e1: f64,
    pub e2: f64,
    pub i1: f64,
    pub i2: f64,
}

impl TwoStageDesign {
    pub fn new(e1: f64, e2: f64, i1: f64, i2: f64) -> Result<Self> {
        if e1.is_nan() || e1 == f64::NEG_INFINITY {
            return Err(domain("e1", e1, "finite, or +inf for a design without early stopping"));
        }
        if !e2.is_finite() {
            return Err(domain("e2", e2, "finite"));
        }
        if !(i1 > 0.0 && i1.is_finite()) {
            return Err(domain("i1", i1, "0 < i1 < inf"));
        }
        if !(i2 > i1 && i2.is_finite()) {
            return Err(domain("i2", i2, "i1 < i2 < inf"));
        }
        Ok(Self { e1, e2, i1, i2 })
    }

    /// O'Brien–Fleming design for one-sided level `alpha`, with boundaries
    /// planned at `planned_fraction` of the maximum information and evaluated
    /// at the observed information `i1`, `i2`.
    pub fn obrien_fleming(alpha: f64, planned_fraction: f64, i1: f64, i2: f64) -> Result<Self> {
        EfficacyBoundaries::obrien_fleming(alpha, planned_fraction)?.with_information(i1, i2)
    }

    pub fn boundaries(&self) -> EfficacyBoundaries {
        EfficacyBoundaries {
            e1: self.e1,
            e2: self.e2,
        }
    }

    /// `√(I₁/I₂)`: correlation of the interim and final z-statistics.
    pub fn rho(&self) -> f64 {
        (self.i1 / self.i2).sqrt()
    }

    /// `I₁/I₂`.
    pub fn information_fraction(&self) -> f64 {
        self.i1 / self.i2
    }

    /// Interim efficacy boundary on the treatment-difference scale, `e₁/√I₁`.
    pub fn stage1_boundary_estimate(&self) -> f64 {
        self.e1 / self.i1.sqrt()
    }

    /// Same design with a different interim boundary.
    pub fn with_e1(&self, e1: f64) -> Result<Self> {
        Self::new(e1, self.e2, self.i1, self.i2)
    }
}

/// Efficacy boundaries on the z-scale, without information levels.
///
/// Information is taken from observed data at analysis time, so a design
/// file only fixes the boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficacyBoundaries {
    pub e1: f64,
    pub e2: f64,
}

impl EfficacyBoundaries {
    pub fn new(e1: f64, e2: f64) -> Result<Self> {
        if e1.is_nan() || e1 == f64::NEG_INFINITY {
            return Err(domain("e1", e1, "finite, or +inf for a design without early stopping"));
        }
        if !e2.is_finite() {
            return Err(domain("e2", e2, "finite"));
        }
        Ok(Self { e1, e2 })
    }

    /// O'Brien–Fleming boundaries for one-sided level `alpha`.
    pub fn obrien_fleming(alpha: f64, interim_fraction: f64) -> Result<Self> {
        let b = obf_boundaries(alpha, interim_fraction)?;
        Ok(Self { e1: b.e1, e2: b.e2 })
    }

    pub fn with_information(&self, i1: f64, i2: f64) -> Result<TwoStageDesign> {
        TwoStageDesign::new(self.e1, self.e2, i1, i2)
    }
}

/// Solves for the O'Brien–Fleming constant `C` of a two-look design:
/// `P₀(Z₁ ≥ C/ρ) + P₀(Z₁ < C/ρ, Z₂ ≥ C) = alpha` with `Corr(Z₁, Z₂) = ρ`.
pub fn obf_constant(alpha: f64, rho: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(domain("alpha", alpha, "0 < alpha < 0.5"));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(domain("rho", rho, "0 < rho < 1"));
    }
    let settings = SolverSettings::new(1e-13, 200)?;
    find_root(
        |c| obf_type_one_error(c, rho) - alpha,
        Interval::new(0.0, 40.0)?,
        settings,
    )
}

/// Overall one-sided type I error of the two-look OBF rule with constant `c`.
pub fn obf_type_one_error(c: f64, rho: f64) -> f64 {
    let e1 = c / rho;
    // P(Z₁ < e₁, Z₂ ≥ c) = P(Z₁ ≤ e₁, -Z₂ ≤ -c), Corr(Z₁, -Z₂) = -ρ
    let continue_and_reject = bivariate_normal_cdf(e1, -c, -rho).unwrap_or(f64::NAN);
    std_normal_sf(e1) + continue_and_reject
}

/// Boundary summary for an OBF two-look design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObfBoundaries {
    pub alpha: f64,
    pub interim_fraction: f64,
    pub constant: f64,
    pub e1: f64,
    pub e2: f64,
    /// One-sided nominal p-value needed to stop at the interim, `1 - Φ(e₁)`.
    pub interim_p_threshold: f64,
}

pub fn obf_boundaries(alpha: f64, interim_fraction: f64) -> Result<ObfBoundaries> {
    if !(interim_fraction > 0.0 && interim_fraction < 1.0) {
        return Err(domain("interim_fraction", interim_fraction, "0 < fraction < 1"));
    }
    let rho = interim_fraction.sqrt();
    let constant = obf_constant(alpha, rho)?;
    let e1 = constant / rho;
    Ok(ObfBoundaries {
        alpha,
        interim_fraction,
        constant,
        e1,
        e2: constant,
        interim_p_threshold: std_normal_sf(e1),
    })
}

/// Successes and sample size in one arm at one analysis (cumulative).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmCounts {
    pub successes: u64,
    pub n: u64,
}

impl ArmCounts {
    pub fn new(successes: u64, n: u64) -> Self {
        Self { successes, n }
    }

    pub fn proportion(&self) -> f64 {
        self.successes as f64 / self.n as f64
    }
}

/// Cumulative counts for both arms at one analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisCounts {
    pub control: ArmCounts,
    pub treatment: ArmCounts,
}

impl AnalysisCounts {
    pub fn new(control: ArmCounts, treatment: ArmCounts) -> Self {
        Self { control, treatment }
    }

    /// Difference in observed proportions, treatment minus control.
    pub fn difference(&self) -> f64 {
        self.treatment.proportion() - self.control.proportion()
    }
}

/// Binary-endpoint data at the interim and final analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryTrialData {
    pub interim: AnalysisCounts,
    #[serde(rename = "final")]
    pub final_: AnalysisCounts,
}

impl BinaryTrialData {
    pub fn new(interim: AnalysisCounts, final_: AnalysisCounts) -> Result<Self> {
        let data = Self { interim, final_ };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        for (stage, counts) in [("interim", &self.interim), ("final", &self.final_)] {
            for (arm, c) in [("control", &counts.control), ("treatment", &counts.treatment)] {
                if c.n == 0 {
                    return Err(Error::InvalidInput(format!("{stage}.{arm}.n must be at least 1")));
                }
                if c.successes > c.n {
                    return Err(Error::InvalidInput(format!(
                        "{stage}.{arm}: successes ({}) exceed n ({})",
                        c.successes, c.n
                    )));
                }
            }
        }
        for (arm, early, late) in [
            ("control", &self.interim.control, &self.final_.control),
            ("treatment", &self.interim.treatment, &self.final_.treatment),
        ] {
            if early.n > late.n || early.successes > late.successes {
                return Err(Error::InvalidInput(format!(
                    "{arm} arm: interim counts ({}/{}) exceed final counts ({}/{})",
                    early.successes, early.n, late.successes, late.n
                )));
            }
        }
        Ok(())
    }
}

/// Observed information from pooled-proportion variance:
/// `I = 1 / (p̃(1 - p̃)(1/n₀ + 1/n₁))`.
pub fn binary_information(counts: &AnalysisCounts) -> Result<f64> {
    let (c, t) = (&counts.control, &counts.treatment);
    if c.n == 0 || t.n == 0 {
        return Err(Error::DegenerateData("an arm has no patients".into()));
    }
    let pooled_successes = c.successes + t.successes;
    let pooled_n = c.n + t.n;
    if pooled_successes == 0 || pooled_successes >= pooled_n {
        return Err(Error::DegenerateData(format!(
            "pooled success proportion is {pooled_successes}/{pooled_n}; information is undefined"
        )));
    }
    let p = pooled_successes as f64 / pooled_n as f64;
    Ok(1.0 / (p * (1.0 - p) * (1.0 / c.n as f64 + 1.0 / t.n as f64)))
}

/// Standardised test statistics and information at both analyses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZStatistics {
    pub z1: f64,
    pub z2: f64,
    pub i1: f64,
    pub i2: f64,
}

pub fn z_statistics(data: &BinaryTrialData) -> Result<ZStatistics> {
    let i1 = binary_information(&data.interim)?;
    let i2 = binary_information(&data.final_)?;
    Ok(ZStatistics {
        z1: data.interim.difference() * i1.sqrt(),
        z2: data.final_.difference() * i2.sqrt(),
        i1,
        i2,
    })
}

/// Normal endpoint with known standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalEndpointSpec {
    pub total_n: u64,
    pub sd: f64,
    /// Fraction of patients on the first arm.
    pub allocation: f64,
    pub interim_fraction: f64,
}

impl NormalEndpointSpec {
    pub fn new(total_n: u64, sd: f64) -> Result<Self> {
        let spec = Self {
            total_n,
            sd,
            allocation: 0.5,
            interim_fraction: 0.5,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_n < 4 {
            return Err(domain("total_n", self.total_n as f64, "total_n >= 4"));
        }
        if !(self.sd > 0.0 && self.sd.is_finite()) {
            return Err(domain("sd", self.sd, "sd > 0"));
        }
        if !(self.allocation > 0.0 && self.allocation < 1.0) {
            return Err(domain("allocation", self.allocation, "0 < allocation < 1"));
        }
        if !(self.interim_fraction > 0.0 && self.interim_fraction < 1.0) {
            return Err(domain("interim_fraction", self.interim_fraction, "0 < fraction < 1"));
        }
        Ok(())
    }
}

/// `(I₁, I₂)` for a difference in means.
pub fn normal_information(spec: &NormalEndpointSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    let n = spec.total_n as f64;
    let n_first = spec.allocation * n;
    let n_second = (1.0 - spec.allocation) * n;
    let i2 = 1.0 / (spec.sd * spec.sd * (1.0 / n_first + 1.0 / n_second));
    Ok((spec.interim_fraction * i2, i2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppingDecision {
    StopEfficacyStage1,
    ContinueToStage2,
}

/// Interim decision: stop for efficacy iff `z1 ≥ e1`.
pub fn evaluate_stopping(design: &TwoStageDesign, z1: f64) -> StoppingDecision {
    if z1 >= design.e1 {
        StoppingDecision::StopEfficacyStage1
    } else {
        StoppingDecision::ContinueToStage2
    }
}

/// Means and correlation of `(Z₁, Z₂)` under treatment difference θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalParams {
    pub mu1: f64,
    pub mu2: f64,
    pub rho: f64,
}

pub fn canonical_params(theta: f64, design: &TwoStageDesign) -> CanonicalParams {
    CanonicalParams {
        mu1: theta * design.i1.sqrt(),
        mu2: theta * design.i2.sqrt(),
        rho: design.rho(),
    }
}
