//! Synthetic identity pipeline with cap-concentrated views.
//!
//! Identity `i` has a center `u_i`. Each view is, with probability
//! `1 - eta`, uniform on `Cap(u_i, rho)` and otherwise uniform on the whole
//! sphere. The cap therefore carries at least `1 - eta` of the mass, and for
//! `eta = 0` the view law has support equal to the full cap.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Seed;
use crate::sampling::{fill_uniform, CapSampler};
use crate::sphere::{check_dims, clamped_acos, dot, norm, Angle, UnitVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticPipeline {
    pub dimension: usize,
    pub centers: Vec<UnitVector>,
    pub rho: Angle,
    pub eta: f64,
    pub seed: Seed,
}

impl SyntheticPipeline {
    pub fn new(centers: Vec<UnitVector>, rho: Angle, eta: f64, seed: Seed) -> Result<Self> {
        let dimension = centers.first().ok_or(Error::Empty("codebook"))?.dim();
        for c in &centers {
            check_dims(dimension, c.dim())?;
        }
        if !(0.0..1.0).contains(&eta) {
            return Err(Error::param("eta", format!("{eta} is outside [0, 1)")));
        }
        Ok(SyntheticPipeline {
            dimension,
            centers,
            rho,
            eta,
            seed,
        })
    }

    pub fn identities(&self) -> usize {
        self.centers.len()
    }

    /// `K` views of identity `i`. View streams are keyed by identity, so the
    /// first `K` views of an identity do not depend on other requests.
    pub fn sample_views(&self, i: usize, k: usize) -> Result<IdentitySampleSet> {
        let center = self.centers.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.centers.len(),
        })?;
        if k == 0 {
            return Err(Error::param("K", "must be at least 1"));
        }
        let sampler = CapSampler::new(center.clone(), self.rho);
        let mut rng = self.seed.stream("pipeline/views", i as u64);
        let mut views = Vec::with_capacity(k);
        let mut buf = vec![0.0; self.dimension];
        for _ in 0..k {
            if self.eta > 0.0 && rng.random::<f64>() < self.eta {
                fill_uniform(&mut rng, &mut buf);
            } else {
                sampler.sample_into(&mut rng, &mut buf);
            }
            views.push(UnitVector::normalize(buf.clone()).expect("sampled unit vector"));
        }
        Ok(IdentitySampleSet { identity: i, views })
    }
}

/// Views `E_i^{(1..K)}` of one identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySampleSet {
    pub identity: usize,
    pub views: Vec<UnitVector>,
}

impl IdentitySampleSet {
    pub fn new(identity: usize, views: Vec<UnitVector>) -> Result<Self> {
        let d = views.first().ok_or(Error::Empty("sample set"))?.dim();
        for v in &views {
            check_dims(d, v.dim())?;
        }
        Ok(IdentitySampleSet { identity, views })
    }

    pub fn dim(&self) -> usize {
        self.views.first().map_or(0, UnitVector::dim)
    }

    /// Unnormalized Euclidean mean of the views.
    pub fn mean(&self) -> Vec<f64> {
        let d = self.dim();
        let mut m = vec![0.0; d];
        for v in &self.views {
            for (a, b) in m.iter_mut().zip(v.as_slice()) {
                *a += b;
            }
        }
        let n = self.views.len() as f64;
        m.iter_mut().for_each(|x| *x /= n);
        m
    }
}

/// Fraction of views farther than `rho` from `center`.
pub fn empirical_centered_check(
    samples: &IdentitySampleSet,
    center: &UnitVector,
    rho: Angle,
) -> Result<f64> {
    if samples.views.is_empty() {
        return Err(Error::Empty("sample set"));
    }
    check_dims(center.dim(), samples.dim())?;
    let outside = samples
        .views
        .iter()
        .filter(|v| clamped_acos(dot(v.as_slice(), center.as_slice())) > rho.radians())
        .count();
    Ok(outside as f64 / samples.views.len() as f64)
}

/// Normalized mean direction and the lower empirical `(1 - eta)`-quantile of
/// view angles around it (sorted index `ceil((1 - eta) n) - 1`).
pub fn estimate_center_and_radius(
    samples: &IdentitySampleSet,
    eta: f64,
) -> Result<(UnitVector, Angle)> {
    if samples.views.is_empty() {
        return Err(Error::Empty("sample set"));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::param("eta", format!("{eta} is outside [0, 1)")));
    }
    let mean = samples.mean();
    let n = norm(&mean);
    if n < 1e-6 {
        return Err(Error::DegenerateMean { norm: n });
    }
    let center = UnitVector::normalize(mean).expect("nonzero mean");
    let mut angles: Vec<f64> = samples
        .views
        .iter()
        .map(|v| clamped_acos(dot(v.as_slice(), center.as_slice())))
        .collect();
    angles.sort_by(f64::total_cmp);
    let count = angles.len();
    let idx = (((1.0 - eta) * count as f64).ceil() as usize).clamp(1, count) - 1;
    Ok((center, Angle::new(angles[idx])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::log_cap_beta;
    use crate::sampling::{sample_cap, uniform_point};

    fn ang(x: f64) -> Angle {
        Angle::new(x).unwrap()
    }

    fn pipeline(dim: usize, m: usize, rho: f64, eta: f64) -> SyntheticPipeline {
        let mut rng = Seed::new(10).stream("centers", 0);
        let centers = (0..m).map(|_| uniform_point(&mut rng, dim)).collect();
        SyntheticPipeline::new(centers, ang(rho), eta, Seed::new(20)).unwrap()
    }

    #[test]
    fn point_mass_regime() {
        let p = pipeline(5, 3, 0.0, 0.0);
        let s = p.sample_views(1, 20).unwrap();
        assert!(s.views.iter().all(|v| v == &p.centers[1]));
        assert!(p.sample_views(3, 1).is_err());
        assert!(p.sample_views(0, 0).is_err());
    }

    #[test]
    fn eta_zero_views_stay_in_cap() {
        let p = pipeline(12, 4, 0.4, 0.0);
        for i in 0..4 {
            let s = p.sample_views(i, 2000).unwrap();
            for v in &s.views {
                assert!((norm(v.as_slice()) - 1.0).abs() < 1e-12);
                assert!(clamped_acos(dot(v.as_slice(), p.centers[i].as_slice())) <= 0.4 + 1e-9);
            }
            assert_eq!(
                empirical_centered_check(&s, &p.centers[i], ang(0.4)).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn outlier_fraction() {
        let (dim, rho, eta) = (16usize, 0.3, 0.2);
        let p = pipeline(dim, 1, rho, eta);
        let k = 100_000;
        let s = p.sample_views(0, k).unwrap();
        let got = empirical_centered_check(&s, &p.centers[0], ang(rho)).unwrap();
        let expect = eta * (1.0 - log_cap_beta(dim, rho).exp());
        let se = (expect * (1.0 - expect) / k as f64).sqrt();
        assert!((got - expect).abs() <= 4.0 * se, "{got} vs {expect}");
        assert!(got <= eta + 4.0 * se);
    }

    #[test]
    fn centered_check_trivial() {
        let c = UnitVector::basis(3, 0);
        let s = IdentitySampleSet::new(0, vec![c.clone(); 5]).unwrap();
        assert_eq!(empirical_centered_check(&s, &c, ang(0.0)).unwrap(), 0.0);
        let s = IdentitySampleSet::new(
            0,
            sample_cap(&UnitVector::basis(3, 1), ang(3.0), 50, Seed::new(1)),
        )
        .unwrap();
        assert_eq!(
            empirical_centered_check(&s, &c, Angle::STRAIGHT).unwrap(),
            0.0
        );
        assert!(IdentitySampleSet::new(0, vec![]).is_err());
    }

    #[test]
    fn estimator_edge_cases() {
        let v = UnitVector::normalize(vec![0.1, 0.7, -0.2]).unwrap();
        let (u, r) =
            estimate_center_and_radius(&IdentitySampleSet::new(0, vec![v.clone()]).unwrap(), 0.0)
                .unwrap();
        assert!(clamped_acos(dot(u.as_slice(), v.as_slice())) < 1e-7);
        assert!(r.radians() < 1e-7);
        let anti = IdentitySampleSet::new(0, vec![v.clone(), v.negated()]).unwrap();
        assert!(matches!(
            estimate_center_and_radius(&anti, 0.0),
            Err(Error::DegenerateMean { .. })
        ));
    }

    #[test]
    fn estimator_consistency() {
        let c = UnitVector::normalize(vec![1.0, -2.0, 0.5, 0.0, 3.0, 1.0, -1.0, 0.2]).unwrap();
        let s = IdentitySampleSet::new(0, sample_cap(&c, ang(0.5), 10_000, Seed::new(6))).unwrap();
        let (u, r) = estimate_center_and_radius(&s, 0.0).unwrap();
        assert!(clamped_acos(dot(u.as_slice(), c.as_slice())) <= 0.05);
        assert!((r.radians() - 0.5).abs() <= 0.02, "{}", r.radians());
    }

    #[test]
    fn quantile_index_convention() {
        // angles 0.1, 0.2, ..., 1.0 around e1 in the (e1, e2) plane, eta = 0.25:
        // index ceil(0.75 * 10) - 1 = 7 -> 0.8, measured from the mean direction.
        let views: Vec<UnitVector> = (1..=10)
            .map(|k| {
                let t = 0.1 * k as f64;
                UnitVector::normalize(vec![t.cos(), t.sin()]).unwrap()
            })
            .collect();
        let s = IdentitySampleSet::new(0, views).unwrap();
        let (u, r) = estimate_center_and_radius(&s, 0.25).unwrap();
        let mut a: Vec<f64> = s
            .views
            .iter()
            .map(|v| clamped_acos(dot(v.as_slice(), u.as_slice())))
            .collect();
        a.sort_by(f64::total_cmp);
        assert_eq!(r.radians(), a[7]);
    }

    #[test]
    fn full_cap_coverage() {
        let c = UnitVector::basis(3, 2);
        let rho = 0.5;
        let p = SyntheticPipeline::new(vec![c.clone()], ang(rho), 0.0, Seed::new(2)).unwrap();
        let s = p.sample_views(0, 10_000).unwrap();
        // Probe the cap with fresh uniform points and boundary points.
        let mut probes = sample_cap(&c, ang(rho), 3000, Seed::new(99));
        for k in 0..360 {
            let phi = (k as f64).to_radians();
            probes.push(
                UnitVector::normalize(vec![
                    rho.sin() * phi.cos(),
                    rho.sin() * phi.sin(),
                    rho.cos(),
                ])
                .unwrap(),
            );
        }
        let coverage = probes
            .iter()
            .map(|q| {
                s.views
                    .iter()
                    .map(|v| clamped_acos(dot(v.as_slice(), q.as_slice())))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        assert!(coverage <= rho / 4.0, "{coverage}");
    }
}
