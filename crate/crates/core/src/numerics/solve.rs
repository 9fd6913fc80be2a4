//! Bracketed root finding (Brent) and fixed-point iteration.

use crate::error::{domain, Error, Result};

/// Closed search interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() {
            return Err(domain("lo", lo, "finite"));
        }
        if !hi.is_finite() {
            return Err(domain("hi", hi, "finite"));
        }
        if lo >= hi {
            return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Interval centred on `centre` with the given half width.
    pub fn around(centre: f64, half_width: f64) -> Result<Self> {
        Self::new(centre - half_width, centre + half_width)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub abs_tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_iterations: 200,
        }
    }
}

impl SolverSettings {
    pub fn new(abs_tol: f64, max_iterations: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(domain("abs_tol", abs_tol, "abs_tol > 0"));
        }
        if max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be at least 1".into()));
        }
        Ok(Self {
            abs_tol,
            max_iterations,
        })
    }
}

/// Brent's method: inverse quadratic interpolation and secant steps,
/// safeguarded by bisection. Requires a sign change over `bracket`.
pub fn find_root<F>(mut f: F, bracket: Interval, settings: SolverSettings) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let rtol = 4.0 * f64::EPSILON;
    let (mut xpre, mut xcur) = (bracket.lo, bracket.hi);
    let (mut fpre, mut fcur) = (f(xpre), f(xcur));

    if fpre.is_nan() || fcur.is_nan() || fpre * fcur > 0.0 {
        return Err(Error::NoSignChange {
            lo: bracket.lo,
            hi: bracket.hi,
            f_lo: fpre,
            f_hi: fcur,
        });
    }
    if fpre == 0.0 {
        return Ok(xpre);
    }
    if fcur == 0.0 {
        return Ok(xcur);
    }

    let (mut xblk, mut fblk) = (0.0, 0.0);
    let (mut spre, mut scur) = (0.0_f64, 0.0_f64);

    for _ in 0..settings.max_iterations {
        if fpre != 0.0 && fcur != 0.0 && (fpre.is_sign_negative() != fcur.is_sign_negative()) {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        let delta = 0.5 * (settings.abs_tol + rtol * xcur.abs());
        let sbis = 0.5 * (xblk - xcur);
        if fcur == 0.0 || sbis.abs() < delta {
            return Ok(xcur);
        }

        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if 2.0 * stry.abs() < spre.abs().min(3.0 * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur += scur;
        } else {
            xcur += if sbis > 0.0 { delta } else { -delta };
        }
        fcur = f(xcur);
        if fcur.is_nan() {
            return Err(Error::InvalidInput(format!("objective is NaN at {xcur}")));
        }
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iterations,
    })
}

/// Solves `x = g(x)` starting from `start`; see [`solve_fixed_point_bracketed`].
pub fn solve_fixed_point<G>(g: G, start: f64, settings: SolverSettings) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    solve_fixed_point_bracketed(g, start, 1.0, settings)
}

/// Solves `x = g(x)` by plain iteration from `start`.
///
/// If the iteration stalls, oscillates or leaves the finite reals, the
/// problem is handed to [`find_root`] on `x - g(x)` over
/// `[start - half_width, start + half_width]`, widened by doubling until a
/// sign change appears.
pub fn solve_fixed_point_bracketed<G>(
    mut g: G,
    start: f64,
    half_width: f64,
    settings: SolverSettings,
) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    if !start.is_finite() {
        return Err(domain("start", start, "finite"));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(domain("half_width", half_width, "0 < half_width < inf"));
    }

    let mut x = start;
    let mut last_residual = f64::INFINITY;
    let mut growing = 0;
    for _ in 0..settings.max_iterations {
        let next = g(x);
        if !next.is_finite() {
            break;
        }
        let residual = (next - x).abs();
        if residual <= settings.abs_tol {
            return Ok(x);
        }
        if residual >= last_residual {
            growing += 1;
            if growing >= 3 {
                break;
            }
        } else {
            growing = 0;
        }
        last_residual = residual;
        x = next;
    }

    let mut h = |x: f64| x - g(x);
    let mut width = half_width;
    // Widen up to 2^40 times the initial half-width. Much further and
    // `x - g(x)` rounds to zero on smooth drifts, giving spurious roots.
    for _ in 0..=40 {
        let bracket = Interval::around(start, width)?;
        let (f_lo, f_hi) = (h(bracket.lo), h(bracket.hi));
        if f_lo.is_finite() && f_hi.is_finite() && f_lo * f_hi <= 0.0 {
            return find_root(&mut h, bracket, settings);
        }
        width *= 2.0;
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iterations,
    })
}
