//! Normalized spherical-cap measure `V_D(alpha)`, kept in the log domain.
//!
//! `V_D(alpha)` is the fraction of `S^{D-1}` within geodesic angle `alpha` of
//! a fixed pole:
//!
//! ```text
//! V_D(alpha) = int_0^alpha sin^{D-2}(t) dt / int_0^pi sin^{D-2}(t) dt
//! ```
//!
//! Two evaluation routes are provided. [`log_cap_measure`] uses the identity
//! `V_D(alpha) = I_{sin^2 alpha}((D-1)/2, 1/2) / 2` for `alpha <= pi/2` and
//! the reflection `V_D(pi - alpha) = 1 - V_D(alpha)` above it.
//! [`log_cap_measure_quadrature`] integrates the sine power directly with
//! adaptive Simpson. Both stay finite for dimensions in the thousands, where
//! the linear value underflows.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::Angle;

/// Smallest linear value reported alongside the log value.
pub const LINEAR_FLOOR: f64 = 1e-300;

/// A probability or measure stored as its natural log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogMeasure {
    pub log_value: f64,
    /// `exp(log_value)` when it is at least [`LINEAR_FLOOR`].
    pub linear: Option<f64>,
}

impl LogMeasure {
    pub fn from_log(log_value: f64) -> Self {
        let lin = log_value.exp();
        LogMeasure {
            log_value,
            linear: (lin >= LINEAR_FLOOR).then_some(lin),
        }
    }

    pub fn one() -> Self {
        LogMeasure::from_log(0.0)
    }

    /// Linear value, possibly flushed to zero.
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    pub fn log10(&self) -> f64 {
        self.log_value / std::f64::consts::LN_10
    }
}

fn check_args(dim: usize, alpha: f64) -> Result<()> {
    if dim < 2 {
        return Err(Error::param(
            "D",
            format!("cap measure needs D >= 2, got {dim}"),
        ));
    }
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::param("alpha", format!("{alpha} is outside [0, pi]")));
    }
    Ok(())
}

/// `log V_D(alpha)` via the regularized incomplete beta function.
///
/// `alpha = 0` yields `log_value = -inf`.
pub fn log_cap_measure(dim: usize, alpha: Angle) -> Result<LogMeasure> {
    let a = alpha.radians();
    check_args(dim, a)?;
    Ok(LogMeasure::from_log(log_cap_beta(dim, a)))
}

pub(crate) fn log_cap_beta(dim: usize, alpha: f64) -> f64 {
    if alpha <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if alpha >= PI {
        return 0.0;
    }
    if alpha > FRAC_PI_2 {
        let comp = log_cap_beta_lower(dim, PI - alpha).exp();
        return (-comp).ln_1p();
    }
    log_cap_beta_lower(dim, alpha)
}

/// `alpha` in `(0, pi/2]`.
fn log_cap_beta_lower(dim: usize, alpha: f64) -> f64 {
    let a = (dim as f64 - 1.0) / 2.0;
    let (s, c) = alpha.sin_cos();
    let ln_x = 2.0 * s.ln();
    let ln_1mx = 2.0 * c.max(0.0).ln();
    -LN_2 + ln_beta_reg(a, 0.5, s * s, c * c, ln_x, ln_1mx, ln_beta_half(dim))
}

/// `ln B((D-1)/2, 1/2) = ln int_0^pi sin^{D-2}(t) dt`.
///
/// Uses `B(a, 1/2) = sqrt(pi) * Gamma(a) / Gamma(a + 1/2)` and the exact
/// recursion `Gamma(a + 3/2) / Gamma(a + 1) = (a + 1/2)/a * Gamma(a + 1/2) / Gamma(a)`
/// started from `a = 1/2` or `a = 1`. Summing `ln_1p` terms avoids the
/// cancellation of differencing two large `ln Gamma` values.
pub fn ln_beta_half(dim: usize) -> f64 {
    assert!(dim >= 2);
    let half_ln_pi = 0.5 * PI.ln();
    // ln(Gamma(a + 1/2) / Gamma(a))
    let (mut a, mut ln_ratio) = if dim.is_multiple_of(2) {
        (0.5, -half_ln_pi)
    } else {
        (1.0, half_ln_pi - LN_2)
    };
    let target = (dim as f64 - 1.0) / 2.0;
    while a < target {
        ln_ratio += (0.5 / a).ln_1p();
        a += 1.0;
    }
    half_ln_pi - ln_ratio
}

/// `ln I_x(a, b)` given `x`, `1 - x`, their logs and `ln B(a, b)`.
fn ln_beta_reg(
    a: f64,
    b: f64,
    x: f64,
    one_minus_x: f64,
    ln_x: f64,
    ln_1mx: f64,
    ln_beta: f64,
) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if one_minus_x <= 0.0 {
        return 0.0;
    }
    let ln_front = a * ln_x + b * ln_1mx - ln_beta;
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front - a.ln() + beta_continued_fraction(a, b, x).ln()
    } else {
        let tail = (ln_front - b.ln() + beta_continued_fraction(b, a, one_minus_x).ln()).exp();
        (-tail).ln_1p()
    }
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 20_000;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `log V_D(alpha)` by adaptive Simpson quadrature of `sin^{D-2}`.
///
/// Each integrand is scaled by its maximum on the integration range before
/// integrating, so the route does not underflow at large `D`.
pub fn log_cap_measure_quadrature(dim: usize, alpha: Angle) -> Result<LogMeasure> {
    let a = alpha.radians();
    check_args(dim, a)?;
    if a <= 0.0 {
        return Ok(LogMeasure::from_log(f64::NEG_INFINITY));
    }
    if a >= PI {
        return Ok(LogMeasure::one());
    }
    let ln_half_total = ln_sine_power_integral(dim, FRAC_PI_2);
    let ln_total = LN_2 + ln_half_total;
    let log_v = if a <= FRAC_PI_2 {
        ln_sine_power_integral(dim, a) - ln_total
    } else {
        let comp = (ln_sine_power_integral(dim, PI - a) - ln_total).exp();
        (-comp).ln_1p()
    };
    Ok(LogMeasure::from_log(log_v))
}

/// `ln int_0^upper sin^{D-2}(t) dt` for `upper` in `(0, pi/2]`.
fn ln_sine_power_integral(dim: usize, upper: f64) -> f64 {
    const ABS_TOL: f64 = 1e-13;
    if dim == 2 {
        return upper.ln();
    }
    let p = (dim - 2) as f64;
    let scale = p * upper.sin().ln();
    let f = |t: f64| {
        let s = t.sin();
        if s <= 0.0 {
            0.0
        } else {
            (p * s.ln() - scale).exp()
        }
    };
    // Start from a uniform split so the peak near `upper` is resolved.
    const PANELS: usize = 32;
    let h = upper / PANELS as f64;
    let mut total = 0.0;
    for k in 0..PANELS {
        let lo = k as f64 * h;
        let hi = if k + 1 == PANELS { upper } else { lo + h };
        total += adaptive_simpson(&f, lo, hi, ABS_TOL / PANELS as f64);
    }
    scale + total.ln()
}

pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Log density of the colatitude under the uniform law on `S^{D-1}`:
/// `sin^{D-2}(t) / B((D-1)/2, 1/2)`.
pub(crate) fn ln_colatitude_density(dim: usize, theta: f64, ln_norm: f64) -> f64 {
    if dim == 2 {
        return -ln_norm;
    }
    (dim - 2) as f64 * theta.sin().ln() - ln_norm
}
