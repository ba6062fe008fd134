//! Data presets behind the four published plots (plotting is left to
//! external tools).

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::capacity::{boundary_curves, effective_separation, rate_curves};
use crate::error::{Error, Result};
use crate::io::AngleValue;
use crate::packing::packing_bounds;
use crate::random_code::separation_sweep;
use crate::rng::Seed;
use crate::sphere::Angle;
use crate::table::{Cell, Table};

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Roughly `n` log-spaced integers from `lo` to `hi`, deduplicated.
pub fn log_spaced_sizes(lo: usize, hi: usize, n: usize) -> Vec<usize> {
    let (a, b) = ((lo.max(1) as f64).ln(), (hi.max(lo).max(1) as f64).ln());
    let mut out: Vec<usize> = linspace(a, b, n)
        .into_iter()
        .map(|x| x.exp().round() as usize)
        .collect();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig2Settings {
    pub tau: f64,
    pub rho: AngleValue,
    pub d_min: usize,
    pub d_max: usize,
    pub d_step: usize,
}

impl Default for Fig2Settings {
    fn default() -> Self {
        Fig2Settings {
            tau: 0.80,
            rho: AngleValue::Text("8deg".into()),
            d_min: 8,
            d_max: 512,
            d_step: 1,
        }
    }
}

/// Columns `D, log10_lower, log10_upper`.
pub fn fig2(s: &Fig2Settings) -> Result<Table> {
    if s.d_step == 0 || s.d_min < 2 || s.d_max < s.d_min {
        return Err(Error::param(
            "D range",
            "need 2 <= d_min <= d_max and d_step >= 1",
        ));
    }
    let sep = effective_separation(s.tau, s.rho.angle()?)?;
    if sep.degenerate {
        return Err(Error::DegenerateSeparation { psi: sep.raw });
    }
    let mut t = Table::new(&["D", "log10_lower", "log10_upper"]);
    for d in (s.d_min..=s.d_max).step_by(s.d_step) {
        let b = packing_bounds(d, sep.psi)?;
        t.push(vec![
            d.into(),
            (b.log_lower / std::f64::consts::LN_10).into(),
            (b.log_upper / std::f64::consts::LN_10).into(),
        ]);
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig3Settings {
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_points: usize,
    pub rho_max: AngleValue,
    pub rho_points: usize,
}

impl Default for Fig3Settings {
    fn default() -> Self {
        Fig3Settings {
            tau_min: 0.05,
            tau_max: 0.95,
            tau_points: 91,
            rho_max: FRAC_PI_4.into(),
            rho_points: 91,
        }
    }
}

/// `(tau, rho)` grid of the fixed rate with region labels, plus both
/// boundary curves repeated on each row of the same `tau`.
pub fn fig3(s: &Fig3Settings) -> Result<Table> {
    let taus = linspace(s.tau_min, s.tau_max, s.tau_points);
    let bounds = boundary_curves(&taus)?;
    let mut t = Table::new(&[
        "tau",
        "rho",
        "psi",
        "r_fixed",
        "region",
        "rho_admissibility_boundary",
        "rho_positive_rate_boundary",
    ]);
    for (tau, b) in taus.iter().zip(&bounds) {
        for rho in linspace(0.0, s.rho_max.angle()?.radians(), s.rho_points) {
            let p = rate_curves(*tau, Angle::new(rho)?)?;
            t.push(vec![
                (*tau).into(),
                rho.into(),
                p.psi.into(),
                p.r_fixed.into(),
                p.region.label().into(),
                b.rho_admissibility.into(),
                b.rho_positive_rate.into(),
            ]);
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig4Settings {
    pub taus: Vec<f64>,
    pub rho_max: AngleValue,
    pub rho_points: usize,
}

impl Default for Fig4Settings {
    fn default() -> Self {
        Fig4Settings {
            taus: vec![0.55, 0.7, 0.85],
            rho_max: FRAC_PI_4.into(),
            rho_points: 201,
        }
    }
}

/// Fixed and random rate lower bounds along `rho` for each `tau`.
pub fn fig4(s: &Fig4Settings) -> Result<Table> {
    let mut t = Table::new(&["tau", "rho", "psi", "r_fixed", "r_random", "region"]);
    for &tau in &s.taus {
        for rho in linspace(0.0, s.rho_max.angle()?.radians(), s.rho_points) {
            let p = rate_curves(tau, Angle::new(rho)?)?;
            t.push(vec![
                tau.into(),
                rho.into(),
                p.psi.into(),
                p.r_fixed.into(),
                p.r_random.into(),
                p.region.label().into(),
            ]);
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig5Settings {
    pub dims: Vec<usize>,
    pub taus: Vec<f64>,
    pub rhos: Vec<AngleValue>,
    pub delta: f64,
    pub sizes: Vec<usize>,
    pub trials: usize,
}

impl Default for Fig5Settings {
    fn default() -> Self {
        Fig5Settings {
            dims: vec![40, 80],
            taus: vec![0.55, 0.85],
            rhos: vec![0.08.into(), 0.14.into()],
            delta: 0.05,
            sizes: log_spaced_sizes(2, 2000, 25),
            trials: 2000,
        }
    }
}

/// Monte Carlo all-pairs separation probability against the union bound,
/// over `D x tau x rho x M`.
pub fn fig5(s: &Fig5Settings, seed: Seed) -> Result<Table> {
    if !(s.delta > 0.0 && s.delta < 1.0) {
        return Err(Error::param("delta", "must lie in (0, 1)"));
    }
    let mut reqs = Vec::new();
    for &tau in &s.taus {
        for rho in &s.rhos {
            reqs.push((tau, rho.angle()?));
        }
    }
    let mut t = Table::new(&[
        "D",
        "tau",
        "rho",
        "psi",
        "M",
        "trials",
        "p_hat",
        "std_err",
        "union_lb",
        "one_minus_delta",
    ]);
    for &d in &s.dims {
        for p in separation_sweep(d, &reqs, &s.sizes, s.trials, seed)? {
            t.push(vec![
                d.into(),
                p.tau.into(),
                p.rho.radians().into(),
                p.psi.radians().into(),
                p.m.into(),
                p.estimate.trials.into(),
                p.estimate.p_hat.into(),
                p.estimate.std_err.into(),
                p.estimate.union_lb.into(),
                Cell::Float(1.0 - s.delta),
            ]);
        }
    }
    Ok(t)
}
