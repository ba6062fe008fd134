//! Fixed-code capacity quantities for cap-concentrated identities.
//!
//! An identity whose embeddings fall (with probability at least `1 - eta`)
//! inside a cap of radius `rho` around its center needs its center to be at
//! least `psi = arccos(tau) + 2 rho` from every other center. This module
//! evaluates that separation, certifies codebooks against it, builds
//! explicit violating pairs for the full-cap model, and reports the
//! resulting code-size bounds and exponential rates.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::packing::{packing_bounds, ANGLE_SLACK};
use crate::sphere::{
    check_dims, check_threshold, clamped_acos, dot, orthogonal_to, Angle, UnitVector,
};

/// Decision rule of a verifier: threshold and the two error tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub tau: f64,
    pub eps_in: f64,
    pub eps_out: f64,
}

impl OperatingPoint {
    pub fn new(tau: f64, eps_in: f64, eps_out: f64) -> Result<Self> {
        check_threshold(tau)?;
        check_unit_interval("eps_in", eps_in)?;
        check_unit_interval("eps_out", eps_out)?;
        Ok(OperatingPoint {
            tau,
            eps_in,
            eps_out,
        })
    }
}

fn check_unit_interval(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..1.0).contains(&v) {
        return Err(Error::param(name, format!("{v} is outside [0, 1)")));
    }
    Ok(())
}

/// Cap radius `rho` holding at least `1 - eta` of each identity's mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenteredParams {
    pub rho: Angle,
    pub eta: f64,
}

impl CenteredParams {
    pub fn new(rho: f64, eta: f64) -> Result<Self> {
        if !(0.0..PI).contains(&rho) {
            return Err(Error::param("rho", format!("{rho} is outside [0, pi)")));
        }
        check_unit_interval("eta", eta)?;
        Ok(CenteredParams {
            rho: Angle::new(rho)?,
            eta,
        })
    }

    /// `1 - (1 - eta)^2`, the error level guaranteed by a separated codebook.
    pub fn guaranteed_tolerance(&self) -> f64 {
        1.0 - (1.0 - self.eta) * (1.0 - self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveSeparation {
    /// `arccos(tau) + 2 rho`, uncapped.
    pub raw: f64,
    /// `raw` capped at pi.
    pub psi: Angle,
    /// `raw > pi`: no two points can be this far apart.
    pub degenerate: bool,
}

/// `psi_tau(rho) = arccos(tau) + 2 rho`.
pub fn effective_separation(tau: f64, rho: Angle) -> Result<EffectiveSeparation> {
    check_threshold(tau)?;
    if rho.radians() >= PI {
        return Err(Error::param("rho", "must be below pi"));
    }
    let raw = tau.acos() + 2.0 * rho.radians();
    Ok(EffectiveSeparation {
        raw,
        psi: Angle::new(raw.min(PI))?,
        degenerate: raw > PI,
    })
}

fn intra_holds(tau: f64, rho: f64) -> bool {
    2.0 * rho <= tau.acos()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FailingCondition {
    /// `2 rho > arccos(tau)`.
    Intra { two_rho: f64, limit: f64 },
    /// Closest center pair is below the required separation.
    Inter {
        i: usize,
        j: usize,
        achieved: f64,
        required: f64,
    },
}

/// Outcome of the sufficient separation test. A refusal only means the
/// test is inconclusive; it never asserts inadmissibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityCertificate {
    pub guaranteed: bool,
    pub eps_in_guarantee: Option<f64>,
    pub eps_out_guarantee: Option<f64>,
    pub failing_condition: Option<FailingCondition>,
}

/// Closest pair of centers `(i, j, inner product)`, if there are two or more.
fn closest_pair(centers: &[UnitVector]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..centers.len() {
        for j in (i + 1)..centers.len() {
            let ip = dot(centers[i].as_slice(), centers[j].as_slice());
            if best.is_none_or(|(_, _, b)| ip > b) {
                best = Some((i, j, ip));
            }
        }
    }
    best
}

fn check_centers(centers: &[UnitVector]) -> Result<usize> {
    let dim = centers.first().ok_or(Error::Empty("centers"))?.dim();
    for c in centers {
        check_dims(dim, c.dim())?;
    }
    Ok(dim)
}

/// Sufficient test: separated centers with `2 rho <= arccos(tau)` make the
/// family `(tau, 1-(1-eta)^2, 1-(1-eta)^2)`-admissible.
pub fn sufficient_admissibility_check(
    centers: &[UnitVector],
    tau: f64,
    params: CenteredParams,
) -> Result<AdmissibilityCertificate> {
    check_centers(centers)?;
    let sep = effective_separation(tau, params.rho)?;
    let refuse = |cond| AdmissibilityCertificate {
        guaranteed: false,
        eps_in_guarantee: None,
        eps_out_guarantee: None,
        failing_condition: Some(cond),
    };
    let rho = params.rho.radians();
    if !intra_holds(tau, rho) {
        return Ok(refuse(FailingCondition::Intra {
            two_rho: 2.0 * rho,
            limit: tau.acos(),
        }));
    }
    if let Some((i, j, ip)) = closest_pair(centers) {
        let achieved = clamped_acos(ip);
        if achieved < sep.raw {
            return Ok(refuse(FailingCondition::Inter {
                i,
                j,
                achieved,
                required: sep.raw,
            }));
        }
    }
    let eps = params.guaranteed_tolerance();
    Ok(AdmissibilityCertificate {
        guaranteed: true,
        eps_in_guarantee: Some(eps),
        eps_out_guarantee: Some(eps),
        failing_condition: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WitnessKind {
    /// Two points of one cap whose similarity falls below `tau`.
    Intra { identity: usize },
    /// A point from each of two caps whose similarity exceeds `tau`.
    Inter { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub x: UnitVector,
    pub y: UnitVector,
    pub inner: f64,
}

impl Witness {
    /// Amount by which the pair violates `tau` (positive when it does).
    pub fn violation_margin(&self, tau: f64) -> f64 {
        match self.kind {
            WitnessKind::Intra { .. } => tau - self.inner,
            WitnessKind::Inter { .. } => self.inner - tau,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullCapVerdict {
    pub admissible: bool,
    pub witness: Option<Witness>,
}

/// Point at geodesic distance `t` from `u` towards the unit tangent `dir`.
fn along(u: &[f64], dir: &[f64], t: f64) -> Vec<f64> {
    let (s, c) = t.sin_cos();
    u.iter().zip(dir).map(|(a, b)| c * a + s * b).collect()
}

/// Unit tangent at `u` pointing along the minimizing geodesic to `v`; any
/// tangent when `v = +-u`.
fn geodesic_direction(u: &[f64], v: &[f64]) -> Vec<f64> {
    let ip = dot(u, v);
    let t: Vec<f64> = v.iter().zip(u).map(|(b, a)| b - ip * a).collect();
    let n = crate::sphere::norm(&t);
    if n < 1e-12 {
        orthogonal_to(u)
    } else {
        t.into_iter().map(|c| c / n).collect()
    }
}

fn unit(v: Vec<f64>) -> UnitVector {
    UnitVector::normalize(v).expect("geodesic point has unit norm")
}

/// Exact zero-error test when every identity fills its whole cap.
///
/// Admissible iff `2 rho <= arccos(tau)` and all centers are at least
/// `arccos(tau) + 2 rho` apart. Otherwise an explicit violating pair is
/// returned: the two ends of a diameter of one cap, the near ends of the
/// geodesic joining two centers, or a common point of two overlapping caps.
pub fn full_cap_admissibility(
    centers: &[UnitVector],
    tau: f64,
    rho: Angle,
) -> Result<FullCapVerdict> {
    let dim = check_centers(centers)?;
    check_threshold(tau)?;
    let r = rho.radians();
    if r >= FRAC_PI_2 {
        return Err(Error::param("rho", "full-cap model needs rho < pi/2"));
    }
    if dim < 2 {
        return Err(Error::param("D", "full-cap model needs D >= 2"));
    }
    let limit = tau.acos();
    if !intra_holds(tau, r) {
        let u = centers[0].as_slice();
        let t = orthogonal_to(u);
        let x = along(u, &t, r);
        let neg: Vec<f64> = t.iter().map(|c| -c).collect();
        let y = along(u, &neg, r);
        let inner = dot(&x, &y);
        return Ok(FullCapVerdict {
            admissible: false,
            witness: Some(Witness {
                kind: WitnessKind::Intra { identity: 0 },
                x: unit(x),
                y: unit(y),
                inner,
            }),
        });
    }
    let required = limit + 2.0 * r;
    if let Some((i, j, ip)) = closest_pair(centers) {
        let theta = clamped_acos(ip);
        if theta < required {
            let (ui, uj) = (centers[i].as_slice(), centers[j].as_slice());
            let dir = geodesic_direction(ui, uj);
            let (x, y) = if theta >= 2.0 * r {
                (along(ui, &dir, r), along(ui, &dir, theta - r))
            } else {
                let mid = along(ui, &dir, 0.5 * theta);
                (mid.clone(), mid)
            };
            let inner = dot(&x, &y);
            return Ok(FullCapVerdict {
                admissible: false,
                witness: Some(Witness {
                    kind: WitnessKind::Inter { i, j },
                    x: unit(x),
                    y: unit(y),
                    inner,
                }),
            });
        }
    }
    Ok(FullCapVerdict {
        admissible: true,
        witness: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedCapacityReport {
    pub dimension: usize,
    pub psi: Angle,
    /// `-log V_D(psi)`: achievable under full angular expressivity.
    pub log_lower: f64,
    /// `-log V_D(psi / 2)`: upper bound, valid for the full-cap-support model only.
    pub log_upper_full_cap: f64,
    pub eps_in: f64,
    pub eps_out: f64,
}

pub fn fixed_capacity_report(
    dim: usize,
    tau: f64,
    params: CenteredParams,
) -> Result<FixedCapacityReport> {
    let sep = effective_separation(tau, params.rho)?;
    let rho = params.rho.radians();
    if !intra_holds(tau, rho) {
        return Err(Error::IntraConditionViolated {
            two_rho: 2.0 * rho,
            limit: tau.acos(),
        });
    }
    if sep.degenerate {
        return Err(Error::DegenerateSeparation { psi: sep.raw });
    }
    let b = packing_bounds(dim, sep.psi)?;
    let eps = params.guaranteed_tolerance();
    Ok(FixedCapacityReport {
        dimension: dim,
        psi: sep.psi,
        log_lower: b.log_lower,
        log_upper_full_cap: b.log_upper,
        eps_in: eps,
        eps_out: eps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    AdmissiblePositiveRate,
    AdmissibleZeroRateBound,
    Inadmissible,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::AdmissiblePositiveRate => "admissible-positive-rate",
            Region::AdmissibleZeroRateBound => "admissible-zero-rate-bound",
            Region::Inadmissible => "inadmissible",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateCurvePoint {
    pub tau: f64,
    pub rho: Angle,
    /// Uncapped effective separation.
    pub psi: f64,
    /// Nats per dimension; `None` outside the region where the bound applies.
    pub r_fixed: Option<f64>,
    pub r_random: Option<f64>,
    pub region: Region,
}

/// `-log sin(psi)` for `psi` in `(0, pi/2]`.
pub fn fixed_rate_at(psi: f64) -> Option<f64> {
    (psi > 0.0 && psi <= FRAC_PI_2).then(|| -psi.sin().ln())
}

/// Asymptotic fixed-code and random-code rate lower bounds at `(tau, rho)`.
pub fn rate_curves(tau: f64, rho: Angle) -> Result<RateCurvePoint> {
    let sep = effective_separation(tau, rho)?;
    let region = if !intra_holds(tau, rho.radians()) {
        Region::Inadmissible
    } else if sep.raw < FRAC_PI_2 {
        Region::AdmissiblePositiveRate
    } else {
        Region::AdmissibleZeroRateBound
    };
    let r_fixed = match region {
        Region::Inadmissible => None,
        _ => fixed_rate_at(sep.raw),
    };
    Ok(RateCurvePoint {
        tau,
        rho,
        psi: sep.raw,
        r_fixed,
        r_random: r_fixed.map(|r| 0.5 * r),
        region,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub tau: f64,
    /// Largest `rho` with `2 rho <= arccos(tau)`.
    pub rho_admissibility: f64,
    /// `rho` at which `psi_tau(rho) = pi/2`.
    pub rho_positive_rate: Option<f64>,
}

pub fn boundary_curves(taus: &[f64]) -> Result<Vec<BoundaryPoint>> {
    taus.iter()
        .map(|&tau| {
            check_threshold(tau)?;
            let a = tau.acos();
            let pos = 0.5 * (FRAC_PI_2 - a);
            Ok(BoundaryPoint {
                tau,
                rho_admissibility: 0.5 * a,
                rho_positive_rate: (pos >= 0.0).then_some(pos.max(0.0)),
            })
        })
        .collect()
}

/// Threshold achieving a target false-match rate, by linear interpolation of
/// `tau` against `log fmr`.
///
/// `roc` rows are `(tau, fmr)` with `tau` increasing and `fmr` strictly
/// decreasing and positive.
pub fn calibrate_threshold(roc: &[(f64, f64)], alpha: f64) -> Result<f64> {
    if roc.is_empty() {
        return Err(Error::Empty("ROC table"));
    }
    for (k, &(tau, fmr)) in roc.iter().enumerate() {
        if !tau.is_finite() || !(fmr > 0.0 && fmr <= 1.0) {
            return Err(Error::NonMonotoneTable(format!(
                "row {k}: invalid ({tau}, {fmr})"
            )));
        }
    }
    for (k, w) in roc.windows(2).enumerate() {
        if !(w[1].0 > w[0].0 && w[1].1 < w[0].1) {
            return Err(Error::NonMonotoneTable(format!(
                "rows {k} and {}: fmr must strictly decrease as tau increases",
                k + 1
            )));
        }
    }
    let (hi_fmr, lo_fmr) = (roc[0].1, roc[roc.len() - 1].1);
    if !(alpha >= lo_fmr && alpha <= hi_fmr) {
        return Err(Error::param(
            "alpha",
            format!("{alpha} is outside the table range [{lo_fmr}, {hi_fmr}]"),
        ));
    }
    if let Some(&(tau, _)) = roc.iter().find(|r| r.1 == alpha) {
        return Ok(tau);
    }
    let k = roc
        .windows(2)
        .position(|w| w[0].1 > alpha && alpha > w[1].1)
        .expect("alpha lies strictly inside some bracket");
    let ((t0, f0), (t1, f1)) = (roc[k], roc[k + 1]);
    let w = (alpha.ln() - f0.ln()) / (f1.ln() - f0.ln());
    Ok(t0 + w * (t1 - t0))
}

/// Required slack for code validation, shared with the witness checks.
pub const SEPARATION_SLACK: f64 = ANGLE_SLACK;
