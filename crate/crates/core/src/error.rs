use thiserror::Error;

/// Errors raised by the estimation and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("solver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("no post-interim patients in the {arm} arm")]
    NoStageTwoPatients { arm: &'static str },

    #[error("{0} is only defined for trials that continue to stage 2")]
    RequiresStageTwo(&'static str),

    #[error("conditioning event `{event}` is too rare to sample (empirical probability {probability:e})")]
    Starvation { event: &'static str, probability: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        expected,
    }
}
