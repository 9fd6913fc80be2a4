//! Point estimation after a two-stage group sequential trial that can stop
//! early for efficacy.
//!
//! The crate covers the whole workflow:
//!
//! * [`design`]: O'Brien-Fleming boundaries, binary-endpoint information and
//!   z-statistics, canonical parameters.
//! * [`estimators`]: the overall, stage-1 and stage-2 MLEs, the median
//!   unbiased estimator, the UMVUE and UMVCUE, and the unconditional and
//!   conditional bias-corrected MLEs.
//! * [`simulation`]: reproducible parallel Monte Carlo, parametric bootstrap
//!   standard errors, sampling histograms and analytic bias sweeps.
//! * [`case_study`]: the MUSEC trial data and published results.
//! * [`cli`]: the `seqest` command-line front end.
//!
//! ```
//! use seqest::case_study::{musec_boundaries, musec_data};
//! use seqest::estimators::{estimate_all, Estimator};
//!
//! let set = estimate_all(&musec_data(), &musec_boundaries()).unwrap();
//! let umvcue = set.get(Estimator::Umvcue).unwrap();
//! assert!((umvcue - 0.1724).abs() < 5e-4);
//! ```

pub mod case_study;
pub mod cli;
pub mod design;
pub mod error;
pub mod estimators;
pub mod numerics;
pub mod simulation;

pub use error::{Error, Result};
