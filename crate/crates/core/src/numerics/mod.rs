//! Special functions and solvers shared by the rest of the crate.

mod bivariate;
mod normal;
mod solve;

pub use bivariate::bivariate_normal_cdf;
pub use normal::{
    lower_tail_ratio, std_normal_cdf, std_normal_pdf, std_normal_quantile, std_normal_sf,
    truncated_normal_mean, upper_tail_ratio, TruncationSide,
};
pub use solve::{find_root, solve_fixed_point, solve_fixed_point_bracketed, Interval, SolverSettings};
