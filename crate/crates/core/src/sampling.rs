//! Seeded sampling on the sphere and on geodesic caps.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::measure::{ln_beta_half, ln_colatitude_density, log_cap_beta};
use crate::rng::Seed;
use crate::sphere::{norm, Angle, UnitVector};

/// Fills `out` with a uniformly distributed unit vector (normalized Gaussian).
pub fn fill_uniform<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        for c in out.iter_mut() {
            *c = rng.sample(StandardNormal);
        }
        let n = norm(out);
        if n > 1e-150 {
            out.iter_mut().for_each(|c| *c /= n);
            return;
        }
    }
}

pub fn uniform_point<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> UnitVector {
    let mut v = vec![0.0; dim];
    fill_uniform(rng, &mut v);
    UnitVector::normalize(v).expect("sampled vector has unit norm")
}

/// `n` independent uniform draws from `S^{D-1}`.
pub fn sample_uniform_sphere(dim: usize, n: usize, seed: Seed) -> Result<Vec<UnitVector>> {
    if dim == 0 {
        return Err(Error::param("D", "dimension must be at least 1"));
    }
    let mut rng = seed.stream("sphere/uniform", 0);
    Ok((0..n).map(|_| uniform_point(&mut rng, dim)).collect())
}

/// Uniform sampler on `Cap(center, rho)`.
///
/// The colatitude is drawn by inverting the cap measure, the azimuth is
/// uniform on the orthogonal sphere, and the sample is carried from the pole
/// `e_1` to `center` by a Householder reflection.
#[derive(Debug, Clone)]
pub struct CapSampler {
    center: UnitVector,
    rho: f64,
    ln_norm: f64,
    log_cap: f64,
    reflector: Reflector,
}

#[derive(Debug, Clone)]
struct Reflector {
    v: Vec<f64>,
    vv: f64,
    negate: bool,
}

impl Reflector {
    /// Orthogonal map sending `e_1` to `c`.
    fn to(c: &[f64]) -> Self {
        // Pick the sign that keeps |v| >= sqrt(2).
        let negate = c[0] > 0.0;
        let sign = if negate { 1.0 } else { -1.0 };
        let mut v: Vec<f64> = c.iter().map(|x| sign * x).collect();
        v[0] += 1.0;
        let vv = v.iter().map(|x| x * x).sum();
        Reflector { v, vv, negate }
    }

    fn apply(&self, y: &mut [f64]) {
        if self.vv == 0.0 {
            return;
        }
        let k = 2.0 * crate::sphere::dot(&self.v, y) / self.vv;
        for (yi, vi) in y.iter_mut().zip(&self.v) {
            *yi -= k * vi;
        }
        if self.negate {
            y.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

impl CapSampler {
    pub fn new(center: UnitVector, rho: Angle) -> Self {
        let dim = center.dim();
        let rho = rho.radians();
        let (ln_norm, log_cap) = if dim >= 2 {
            (ln_beta_half(dim), log_cap_beta(dim, rho))
        } else {
            (0.0, 0.0)
        };
        let reflector = Reflector::to(center.as_slice());
        CapSampler {
            center,
            rho,
            ln_norm,
            log_cap,
            reflector,
        }
    }

    pub fn center(&self) -> &UnitVector {
        &self.center
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let dim = self.center.dim();
        debug_assert_eq!(out.len(), dim);
        if self.rho >= PI {
            fill_uniform(rng, out);
            return;
        }
        if dim == 1 || self.rho == 0.0 {
            out.copy_from_slice(self.center.as_slice());
            return;
        }
        let theta = self.colatitude(rng.random::<f64>());
        let (s, c) = theta.sin_cos();
        out[0] = c;
        fill_uniform(rng, &mut out[1..]);
        out[1..].iter_mut().for_each(|x| *x *= s);
        self.reflector.apply(out);
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> UnitVector {
        let mut v = vec![0.0; self.center.dim()];
        self.sample_into(rng, &mut v);
        UnitVector::normalize(v).expect("reflection preserves norm")
    }

    /// Inverse CDF of the colatitude on `[0, rho]` at probability `u`.
    fn colatitude(&self, u: f64) -> f64 {
        let dim = self.center.dim();
        let u = u.max(f64::MIN_POSITIVE);
        if dim == 2 {
            return self.rho * u;
        }
        let target = self.log_cap + u.ln();
        let (mut lo, mut hi) = (0.0f64, self.rho);
        let mut theta = (self.rho * u.powf(1.0 / (dim as f64 - 1.0))).clamp(0.0, self.rho);
        for _ in 0..200 {
            if theta <= lo || theta >= hi {
                theta = 0.5 * (lo + hi);
            }
            let g = log_cap_beta(dim, theta) - target;
            if g > 0.0 {
                hi = theta;
            } else {
                lo = theta;
            }
            let slope =
                (ln_colatitude_density(dim, theta, self.ln_norm) - log_cap_beta(dim, theta)).exp();
            let next = theta - g / slope;
            let converged =
                (next - theta).abs() <= 1e-15 * theta.max(1e-300) || hi - lo <= 1e-15 * hi;
            theta = next;
            if converged {
                break;
            }
        }
        theta.clamp(0.0, self.rho)
    }
}

/// `n` independent uniform draws from `Cap(center, rho)`.
///
/// In `D = 1` a cap with `rho < pi` is the single point `center`.
pub fn sample_cap(center: &UnitVector, rho: Angle, n: usize, seed: Seed) -> Vec<UnitVector> {
    let sampler = CapSampler::new(center.clone(), rho);
    let mut rng = seed.stream("sphere/cap", 0);
    (0..n).map(|_| sampler.sample(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::angle_between;

    #[test]
    fn empty_request() {
        assert!(sample_uniform_sphere(4, 0, Seed::new(1))
            .unwrap()
            .is_empty());
        assert!(sample_uniform_sphere(0, 3, Seed::new(1)).is_err());
    }

    #[test]
    fn one_dimensional_sphere_is_two_points() {
        let n = 100_000;
        let pts = sample_uniform_sphere(1, n, Seed::new(7)).unwrap();
        let plus = pts.iter().filter(|p| p.as_slice()[0] == 1.0).count();
        let minus = pts.iter().filter(|p| p.as_slice()[0] == -1.0).count();
        assert_eq!(plus + minus, n);
        let f = plus as f64 / n as f64;
        let se = (0.25 / n as f64).sqrt();
        assert!((f - 0.5).abs() <= 4.0 * se, "{f}");
    }

    #[test]
    fn uniform_mean_is_zero() {
        let n = 100_000;
        let pts = sample_uniform_sphere(8, n, Seed::new(11)).unwrap();
        let mean: f64 = pts.iter().map(|p| p.as_slice()[0]).sum::<f64>() / n as f64;
        assert!(mean.abs() <= 4.0 / (n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn zero_radius_cap_is_center() {
        let c = UnitVector::normalize(vec![0.2, -0.4, 0.9]).unwrap();
        for p in sample_cap(&c, Angle::ZERO, 50, Seed::new(3)) {
            assert_eq!(p, c);
        }
    }

    #[test]
    fn cap_samples_stay_inside() {
        for dim in [2usize, 3, 7, 32, 300] {
            let c = uniform_point(&mut Seed::new(5).stream("c", dim as u64), dim);
            for rho in [1e-4, 0.1, 0.5, 1.5, 2.5, 3.1] {
                let r = Angle::new(rho).unwrap();
                for p in sample_cap(&c, r, 300, Seed::new(9)) {
                    let a = angle_between(&p, &c).unwrap().radians();
                    assert!(a <= rho + 1e-9, "D={dim} rho={rho} a={a}");
                    assert!((norm(p.as_slice()) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cap_mean_cosine_matches_closed_form() {
        // density sin(t) on [0, 1]: E[cos t] = (sin^2(1)/2) / (1 - cos 1)
        let rho = 1.0f64;
        let expect = 0.5 * rho.sin().powi(2) / (1.0 - rho.cos());
        let n = 100_000;
        let c = UnitVector::normalize(vec![0.3, 0.3, -0.9]).unwrap();
        let cos: Vec<f64> = sample_cap(&c, Angle::new(rho).unwrap(), n, Seed::new(21))
            .iter()
            .map(|p| p.dot(&c).unwrap())
            .collect();
        let mean = cos.iter().sum::<f64>() / n as f64;
        let var = cos.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let se = (var / n as f64).sqrt();
        assert!((mean - expect).abs() <= 4.0 * se, "{mean} vs {expect}");
    }

    #[test]
    fn full_cap_matches_uniform_quantiles() {
        let dim = 5;
        let n = 20_000;
        let c = UnitVector::basis(dim, 0);
        let mut a: Vec<f64> = sample_cap(&c, Angle::STRAIGHT, n, Seed::new(1))
            .iter()
            .map(|p| angle_between(p, &c).unwrap().radians())
            .collect();
        let mut b: Vec<f64> = sample_uniform_sphere(dim, n, Seed::new(2))
            .unwrap()
            .iter()
            .map(|p| angle_between(p, &c).unwrap().radians())
            .collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        // Two-sample Kolmogorov-Smirnov statistic at the 0.1% level.
        let mut ks = 0.0f64;
        let (mut i, mut j) = (0, 0);
        while i < n && j < n {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            ks = ks.max((i as f64 - j as f64).abs() / n as f64);
        }
        let crit = 1.95 * (2.0 / n as f64).sqrt();
        assert!(ks < crit, "ks={ks} crit={crit}");
    }

    #[test]
    fn colatitude_law_matches_cap_measure() {
        // Fraction of cap samples within theta of the center equals V(theta)/V(rho).
        let dim = 16;
        let rho = 0.8;
        let n = 50_000;
        let c = UnitVector::basis(dim, 3);
        let pts = sample_cap(&c, Angle::new(rho).unwrap(), n, Seed::new(4));
        for theta in [0.4, 0.6, 0.75] {
            let p = (log_cap_beta(dim, theta) - log_cap_beta(dim, rho)).exp();
            let f = pts
                .iter()
                .filter(|x| angle_between(x, &c).unwrap().radians() <= theta)
                .count() as f64
                / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((f - p).abs() <= 4.0 * se, "theta={theta} f={f} p={p}");
        }
    }

    #[test]
    fn seeded_determinism() {
        let c = UnitVector::basis(6, 1);
        let r = Angle::new(0.4).unwrap();
        assert_eq!(
            sample_cap(&c, r, 20, Seed::new(8)),
            sample_cap(&c, r, 20, Seed::new(8))
        );
        assert_ne!(
            sample_cap(&c, r, 20, Seed::new(8)),
            sample_cap(&c, r, 20, Seed::new(9))
        );
    }
}
