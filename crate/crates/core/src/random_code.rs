//! Random codebooks with uniformly distributed identity centers.
//!
//! Centers drawn independently and uniformly collide (come closer than
//! `psi`) pairwise with probability `V_D(psi)`, so all `M` centers are
//! separated with probability at least `1 - C(M, 2) V_D(psi)`. This module
//! evaluates that bound, inverts it into a guaranteed codebook size, and
//! estimates the true all-pairs separation probability by simulation.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::effective_separation;
use crate::error::{Error, Result};
use crate::measure::{log_cap_beta, LogMeasure};
use crate::packing::packing_bounds;
use crate::rng::Seed;
use crate::sampling::fill_uniform;
use crate::sphere::{check_threshold, clamped_acos, Angle};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomCodeConfig {
    pub dim: usize,
    pub tau: f64,
    pub rho: Angle,
    pub eta: f64,
    pub delta: f64,
    pub m: usize,
    pub trials: usize,
    pub seed: Seed,
}

impl RandomCodeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::param("D", "must be at least 2"));
        }
        check_threshold(self.tau)?;
        if !(0.0..1.0).contains(&self.eta) {
            return Err(Error::param("eta", "must lie in [0, 1)"));
        }
        check_delta(self.delta)?;
        if self.m == 0 {
            return Err(Error::param("M", "must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        Ok(())
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", format!("{delta} is outside (0, 1)")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationEstimate {
    pub p_hat: f64,
    pub std_err: f64,
    pub union_lb: f64,
    pub trials: usize,
}

impl SeparationEstimate {
    fn from_counts(successes: usize, trials: usize, union_lb: f64) -> Self {
        let p_hat = successes as f64 / trials as f64;
        SeparationEstimate {
            p_hat,
            std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
            union_lb,
            trials,
        }
    }
}

/// Probability that two independent uniform centers are closer than `psi`,
/// which is `V_D(psi)`.
pub fn pair_failure_prob(dim: usize, psi: Angle) -> Result<LogMeasure> {
    if dim < 2 {
        return Err(Error::param("D", "must be at least 2"));
    }
    if psi.radians() <= 0.0 {
        return Err(Error::param("psi", "must be positive"));
    }
    Ok(LogMeasure::from_log(log_cap_beta(dim, psi.radians())))
}

/// `max(0, 1 - M(M-1)/2 * q)`.
pub fn union_lower_bound(m: u64, q: f64) -> f64 {
    union_lower_bound_log(m, q.ln())
}

/// [`union_lower_bound`] with `q` given as `ln q`; the pair count times `q`
/// is formed in the log domain so huge `M` with tiny `q` does not overflow.
pub fn union_lower_bound_log(m: u64, log_q: f64) -> f64 {
    if m < 2 || log_q == f64::NEG_INFINITY {
        return 1.0;
    }
    let mf = m as f64;
    let log_pairs = mf.ln() + (mf - 1.0).ln() - LN_2;
    let log_mass = log_pairs + log_q;
    if log_mass >= 0.0 {
        return 0.0;
    }
    (1.0 - log_mass.exp()).max(0.0)
}

/// Largest `M` with `C(M, 2) q <= delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomCapacity {
    /// `ln M`.
    pub log_m: f64,
    /// `M` itself when it is at most 2^53 and therefore exact.
    pub m: Option<u64>,
}

const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

fn pairs_within(m: u64, q: f64, delta: f64) -> bool {
    let mf = m as f64;
    mf * (mf - 1.0) / 2.0 * q <= delta
}

/// Inverts the union bound for a pairwise failure probability `exp(log_q)`.
pub fn capacity_from_pair_failure(log_q: f64, delta: f64) -> Result<RandomCapacity> {
    check_delta(delta)?;
    if log_q.is_nan() || log_q > 0.0 {
        return Err(Error::param("q", "must be a probability"));
    }
    if log_q == f64::NEG_INFINITY {
        return Ok(RandomCapacity {
            log_m: f64::INFINITY,
            m: None,
        });
    }
    // Positive root of M^2 - M - 2 delta / q = 0, in logs:
    // M* = (1 + sqrt(1 + e^L)) / 2 with L = ln(8 delta) - ln q.
    let l = (8.0 * delta).ln() - log_q;
    let log_root = if l > 40.0 {
        0.5 * l - LN_2 + ((1.0 + (-l).exp()).sqrt() + (-0.5 * l).exp()).ln()
    } else {
        ((1.0 + (1.0 + l.exp()).sqrt()) / 2.0).ln()
    };
    let root = log_root.exp();
    if root >= EXACT_INT_LIMIT {
        return Ok(RandomCapacity {
            log_m: log_root,
            m: None,
        });
    }
    let q = log_q.exp();
    let mut m = (root.floor() as u64).max(1);
    while m > 1 && !pairs_within(m, q, delta) {
        m -= 1;
    }
    while pairs_within(m + 1, q, delta) {
        m += 1;
    }
    Ok(RandomCapacity {
        log_m: (m as f64).ln(),
        m: Some(m),
    })
}

fn check_intra(tau: f64, rho: Angle) -> Result<()> {
    check_threshold(tau)?;
    if 2.0 * rho.radians() > tau.acos() {
        return Err(Error::IntraConditionViolated {
            two_rho: 2.0 * rho.radians(),
            limit: tau.acos(),
        });
    }
    Ok(())
}

/// Guaranteed random-code size: the largest `M` with
/// `C(M, 2) V_D(psi_tau(rho)) <= delta`, never less than 1.
pub fn random_capacity_lb(dim: usize, tau: f64, rho: Angle, delta: f64) -> Result<RandomCapacity> {
    check_intra(tau, rho)?;
    let sep = effective_separation(tau, rho)?;
    let q = pair_failure_prob(dim, sep.psi)?;
    capacity_from_pair_failure(q.log_value, delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomVsFixed {
    pub random_lb_log: f64,
    /// `-log V_D(psi)`.
    pub fixed_lb_log: f64,
    /// `-log V_D(psi / 2)`.
    pub fixed_ub_log: f64,
    /// The random-code size does not exceed the cap-volume packing bound.
    pub dominated: bool,
}

/// Consistency check of the random-code size against the packing upper
/// bound at the same separation.
pub fn random_vs_fixed_check(
    dim: usize,
    tau: f64,
    rho: Angle,
    delta: f64,
) -> Result<RandomVsFixed> {
    let r = random_capacity_lb(dim, tau, rho, delta)?;
    let sep = effective_separation(tau, rho)?;
    let b = packing_bounds(dim, sep.psi)?;
    Ok(RandomVsFixed {
        random_lb_log: r.log_m,
        fixed_lb_log: b.log_lower,
        fixed_ub_log: b.log_upper,
        dominated: r.log_m <= b.log_upper,
    })
}

/// Rows of the Gram matrix computed per block.
const BLOCK: usize = 128;

/// For one trial: the number of centers at which each separation
/// requirement is first violated (`None` if never, up to `m_max`).
///
/// Centers are drawn sequentially from the trial's stream, so the first `M`
/// centers are the same for every `m_max >= M`. Requirements are given in
/// any order; a violation of a smaller angle implies one of every larger.
/// Inner products are formed a block of rows at a time against all earlier
/// centers, stopping after the block in which the last requirement fails.
fn first_violations(
    dim: usize,
    psis: &[f64],
    m_max: usize,
    seed: Seed,
    trial: u64,
) -> Vec<Option<usize>> {
    let mut order: Vec<usize> = (0..psis.len()).collect();
    order.sort_by(|&a, &b| psis[b].total_cmp(&psis[a]));
    let sorted: Vec<f64> = order.iter().map(|&k| psis[k]).collect();
    let mut first = vec![None; psis.len()];
    let mut violated = 0usize;

    let mut rng = seed.stream(&format!("random-code/separation/{dim}"), trial);
    let mut pts = vec![0.0f64; m_max * dim];
    let mut gram = vec![0.0f64; BLOCK.min(m_max) * m_max];
    let mut start = 0;
    while start < m_max && violated < sorted.len() {
        let end = (start + BLOCK).min(m_max);
        for row in pts[start * dim..end * dim].chunks_exact_mut(dim) {
            fill_uniform(&mut rng, row);
        }
        let rows = end - start;
        // gram[r, c] = <pts[start + r], pts[c]> for c < end.
        unsafe {
            matrixmultiply::dgemm(
                rows,
                dim,
                end,
                1.0,
                pts[start * dim..].as_ptr(),
                dim as isize,
                1,
                pts.as_ptr(),
                1,
                dim as isize,
                0.0,
                gram.as_mut_ptr(),
                end as isize,
                1,
            );
        }
        'rows: for r in 0..rows {
            let m = start + r;
            let cutoff = sorted[violated].cos() - 1e-12;
            for &g in &gram[r * end..r * end + m] {
                if g <= cutoff {
                    continue;
                }
                let angle = clamped_acos(g);
                while violated < sorted.len() && angle < sorted[violated] {
                    first[order[violated]] = Some(m + 1);
                    violated += 1;
                }
                if violated == sorted.len() {
                    break 'rows;
                }
            }
        }
        start = end;
    }
    first
}

/// One row of a separation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub tau: f64,
    pub rho: Angle,
    pub psi: Angle,
    pub m: usize,
    pub estimate: SeparationEstimate,
}

/// Monte Carlo estimates of the all-pairs separation probability for
/// several `(tau, rho)` requirements and codebook sizes in one pass.
///
/// Every trial draws one sequence of uniform centers that is shared by all
/// requirements and sizes (common random numbers), so each estimated curve
/// is non-increasing in `M`. Trials run in parallel on the current rayon
/// pool; results do not depend on the number of threads.
pub fn separation_sweep(
    dim: usize,
    requirements: &[(f64, Angle)],
    sizes: &[usize],
    trials: usize,
    seed: Seed,
) -> Result<Vec<SweepPoint>> {
    if dim < 2 {
        return Err(Error::param("D", "must be at least 2"));
    }
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    if sizes.contains(&0) {
        return Err(Error::param("M", "must be at least 1"));
    }
    let mut psis = Vec::with_capacity(requirements.len());
    for &(tau, rho) in requirements {
        let sep = effective_separation(tau, rho)?;
        if sep.degenerate {
            return Err(Error::DegenerateSeparation { psi: sep.raw });
        }
        if sep.psi.radians() <= 0.0 {
            return Err(Error::param("psi", "must be positive"));
        }
        psis.push(sep.psi);
    }
    let m_max = sizes.iter().copied().max().unwrap_or(1);
    let raw: Vec<f64> = psis.iter().map(|p| p.radians()).collect();
    let per_trial: Vec<Vec<Option<usize>>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| first_violations(dim, &raw, m_max, seed, t))
        .collect();

    let mut out = Vec::with_capacity(requirements.len() * sizes.len());
    for (k, &(tau, rho)) in requirements.iter().enumerate() {
        let log_q = log_cap_beta(dim, raw[k]);
        for &m in sizes {
            let successes = per_trial
                .iter()
                .filter(|f| f[k].is_none_or(|v| v > m))
                .count();
            out.push(SweepPoint {
                tau,
                rho,
                psi: psis[k],
                m,
                estimate: SeparationEstimate::from_counts(
                    successes,
                    trials,
                    union_lower_bound_log(m as u64, log_q),
                ),
            });
        }
    }
    Ok(out)
}

/// Monte Carlo estimate of `P[min pairwise angle of M uniform centers >= psi]`.
pub fn mc_separation_success(cfg: &RandomCodeConfig) -> Result<SeparationEstimate> {
    cfg.validate()?;
    let pts = separation_sweep(
        cfg.dim,
        &[(cfg.tau, cfg.rho)],
        &[cfg.m],
        cfg.trials,
        cfg.seed,
    )?;
    Ok(pts[0].estimate)
}

/// Same estimate for an explicit separation angle rather than `(tau, rho)`.
pub fn mc_separation_at_angle(
    dim: usize,
    psi: Angle,
    m: usize,
    trials: usize,
    seed: Seed,
) -> Result<SeparationEstimate> {
    if psi.radians() <= 0.0 || psi.radians() > PI {
        return Err(Error::param("psi", "must lie in (0, pi]"));
    }
    // tau = cos(psi) with rho = 0 reproduces psi up to rounding; use the
    // angle directly instead.
    if dim < 2 || trials == 0 || m == 0 {
        return Err(Error::param("config", "need D >= 2, trials >= 1, M >= 1"));
    }
    let per_trial: Vec<Option<usize>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| first_violations(dim, &[psi.radians()], m, seed, t)[0])
        .collect();
    let successes = per_trial.iter().filter(|f| f.is_none_or(|v| v > m)).count();
    let log_q = log_cap_beta(dim, psi.radians());
    Ok(SeparationEstimate::from_counts(
        successes,
        trials,
        union_lower_bound_log(m as u64, log_q),
    ))
}
