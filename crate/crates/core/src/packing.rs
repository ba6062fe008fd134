//! Spherical codes: cap-volume bounds, greedy and restricted constructions.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{conflict_masks, max_independent_set, EXACT_LIMIT};
use crate::measure::log_cap_beta;
use crate::rng::Seed;
use crate::sampling::fill_uniform;
use crate::sphere::{check_dims, clamped_acos, dot, Angle, UnitVector};

/// Slack applied to every minimum-angle comparison.
pub const ANGLE_SLACK: f64 = 1e-9;

/// A finite set of unit vectors with a certified minimum pairwise angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCode {
    pub dimension: usize,
    pub points: Vec<UnitVector>,
    /// Exact minimum pairwise angle (pi for a single point).
    pub min_angle: Angle,
    /// The construction ran until it could not add another point.
    pub saturated: bool,
}

impl SphericalCode {
    pub fn new(points: Vec<UnitVector>, saturated: bool) -> Result<Self> {
        let dimension = points.first().ok_or(Error::Empty("spherical code"))?.dim();
        for p in &points {
            check_dims(dimension, p.dim())?;
        }
        let min_angle = Angle::new(min_pairwise_angle(&points))?;
        Ok(SphericalCode {
            dimension,
            points,
            min_angle,
            saturated,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps the first `m` points.
    pub fn truncated(&self, m: usize) -> Result<Self> {
        SphericalCode::new(self.points[..m.min(self.len())].to_vec(), false)
    }
}

fn min_pairwise_angle(points: &[UnitVector]) -> f64 {
    let mut max_inner = f64::NEG_INFINITY;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            max_inner = max_inner.max(dot(p.as_slice(), q.as_slice()));
        }
    }
    if max_inner == f64::NEG_INFINITY {
        PI
    } else {
        clamped_acos(max_inner)
    }
}

/// Cap-volume sandwich on `A_D(psi)`:
/// `1 / V_D(psi) <= A_D(psi) <= 1 / V_D(psi / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingBounds {
    pub psi: Angle,
    pub dimension: usize,
    /// `-log V_D(psi)`
    pub log_lower: f64,
    /// `-log V_D(psi / 2)`
    pub log_upper: f64,
}

impl PackingBounds {
    pub fn lower(&self) -> f64 {
        self.log_lower.exp()
    }

    pub fn upper(&self) -> f64 {
        self.log_upper.exp()
    }

    /// Largest code size compatible with the upper bound.
    pub fn max_size(&self) -> f64 {
        (self.upper() + 1e-6).floor()
    }
}

pub fn packing_bounds(dim: usize, psi: Angle) -> Result<PackingBounds> {
    if dim < 2 {
        return Err(Error::param(
            "D",
            format!("packing bounds need D >= 2, got {dim}"),
        ));
    }
    if psi.radians() <= 0.0 {
        return Err(Error::param("psi", "bounds diverge at psi = 0"));
    }
    Ok(PackingBounds {
        psi,
        dimension: dim,
        log_lower: -log_cap_beta(dim, psi.radians()),
        log_upper: -log_cap_beta(dim, psi.radians() / 2.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeValidation {
    pub valid: bool,
    pub achieved_min_angle: Angle,
}

/// Checks that every pair of points is at least `psi` apart (ties pass).
pub fn validate_code(code: &SphericalCode, psi: Angle) -> CodeValidation {
    let achieved = min_pairwise_angle(&code.points);
    CodeValidation {
        valid: achieved >= psi.radians() - ANGLE_SLACK,
        achieved_min_angle: Angle::new(achieved).expect("acos lies in [0, pi]"),
    }
}

/// Random greedy code: uniform candidates are accepted when they are at
/// least `psi` from every accepted point, until `rejection_budget`
/// consecutive rejections (the code is then marked saturated).
pub fn greedy_packing(
    dim: usize,
    psi: Angle,
    rejection_budget: usize,
    seed: Seed,
) -> Result<SphericalCode> {
    greedy_packing_capped(dim, psi, rejection_budget, None, seed)
}

/// [`greedy_packing`] that also stops once `max_points` points are accepted.
pub fn greedy_packing_capped(
    dim: usize,
    psi: Angle,
    rejection_budget: usize,
    max_points: Option<usize>,
    seed: Seed,
) -> Result<SphericalCode> {
    if dim < 2 {
        return Err(Error::param("D", "greedy packing needs D >= 2"));
    }
    let p = psi.radians();
    if p <= 0.0 || p >= PI {
        return Err(Error::param("psi", format!("{p} is outside (0, pi)")));
    }
    if rejection_budget == 0 {
        return Err(Error::param("rejection_budget", "must be at least 1"));
    }
    let cap = max_points.unwrap_or(usize::MAX);
    if cap == 0 {
        return Err(Error::param("max_points", "must be at least 1"));
    }
    let mut rng = seed.stream("packing/greedy", 0);
    let mut flat: Vec<f64> = Vec::new();
    let mut cand = vec![0.0; dim];
    let mut rejections = 0usize;
    let mut count = 0usize;
    let mut saturated = false;
    while count < cap {
        fill_uniform(&mut rng, &mut cand);
        let ok = flat
            .chunks_exact(dim)
            .all(|q| clamped_acos(dot(q, &cand)) >= p);
        if ok {
            flat.extend_from_slice(&cand);
            count += 1;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= rejection_budget {
                saturated = true;
                break;
            }
        }
    }
    let points = flat
        .chunks_exact(dim)
        .map(|c| UnitVector::normalize(c.to_vec()).expect("unit vector"))
        .collect();
    SphericalCode::new(points, saturated)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    Greedy,
    Exact,
}

/// Largest (exact) or maximal (greedy) subset of `candidates` with pairwise
/// angles at least `psi`.
///
/// Greedy mode visits candidates in a seeded random order and keeps each one
/// compatible with those already kept. Exact mode solves maximum independent
/// set on the conflict graph and is limited to 25 candidates.
pub fn restricted_packing(
    candidates: &[UnitVector],
    psi: Angle,
    mode: SelectionMode,
    seed: Seed,
) -> Result<SphericalCode> {
    let dim = candidates.first().ok_or(Error::Empty("candidates"))?.dim();
    for c in candidates {
        check_dims(dim, c.dim())?;
    }
    let p = psi.radians();
    let compatible =
        |a: &UnitVector, b: &UnitVector| clamped_acos(dot(a.as_slice(), b.as_slice())) >= p;
    let chosen: Vec<UnitVector> = match mode {
        SelectionMode::Exact => {
            if candidates.len() > EXACT_LIMIT {
                return Err(Error::TooManyCandidates {
                    count: candidates.len(),
                    limit: EXACT_LIMIT,
                });
            }
            let adj = conflict_masks(candidates.len(), |i, j| {
                !compatible(&candidates[i], &candidates[j])
            });
            let mask = max_independent_set(&adj);
            (0..candidates.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| candidates[i].clone())
                .collect()
        }
        SelectionMode::Greedy => {
            let mut order: Vec<usize> = (0..candidates.len()).collect();
            order.shuffle(&mut seed.stream("packing/restricted", 0));
            let mut kept: Vec<&UnitVector> = Vec::new();
            for i in order {
                if kept.iter().all(|k| compatible(k, &candidates[i])) {
                    kept.push(&candidates[i]);
                }
            }
            kept.into_iter().cloned().collect()
        }
    };
    SphericalCode::new(chosen, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sample_uniform_sphere;
    use std::f64::consts::FRAC_PI_2;

    fn ang(x: f64) -> Angle {
        Angle::new(x).unwrap()
    }

    fn basis(d: usize) -> Vec<UnitVector> {
        (0..d).map(|k| UnitVector::basis(d, k)).collect()
    }

    #[test]
    fn bounds_closed_forms() {
        let b = packing_bounds(3, ang(FRAC_PI_2)).unwrap();
        assert!((b.lower() - 2.0).abs() < 1e-12);
        let upper = 2.0 / (1.0 - std::f64::consts::SQRT_2 / 2.0);
        assert!((b.upper() - upper).abs() < 1e-10, "{}", b.upper());
        assert!((b.upper() - 6.828_43).abs() < 1e-5);

        let b = packing_bounds(2, ang(FRAC_PI_2)).unwrap();
        assert!((b.lower() - 2.0).abs() < 1e-12);
        assert!((b.upper() - 4.0).abs() < 1e-12);

        for d in [2, 5, 40, 512] {
            let b = packing_bounds(d, ang(PI)).unwrap();
            assert!((b.lower() - 1.0).abs() < 1e-12);
            assert!((b.upper() - 2.0).abs() < 1e-12);
        }
        assert!(packing_bounds(3, ang(0.0)).is_err());
    }

    #[test]
    fn validation_cases() {
        let single = SphericalCode::new(vec![UnitVector::basis(4, 2)], false).unwrap();
        let v = validate_code(&single, ang(3.0));
        assert!(v.valid);
        assert_eq!(v.achieved_min_angle.radians(), PI);

        let b = SphericalCode::new(basis(3), false).unwrap();
        let v = validate_code(&b, ang(FRAC_PI_2));
        assert!(v.valid);
        assert_eq!(v.achieved_min_angle.radians(), FRAC_PI_2);

        let mut pts = basis(3);
        pts.push(pts[1].clone());
        let dup = SphericalCode::new(pts, false).unwrap();
        let v = validate_code(&dup, ang(FRAC_PI_2));
        assert!(!v.valid);
        assert_eq!(v.achieved_min_angle.radians(), 0.0);

        assert!(SphericalCode::new(vec![], false).is_err());
        assert!(SphericalCode::new(
            vec![UnitVector::basis(2, 0), UnitVector::basis(3, 0)],
            false
        )
        .is_err());
    }

    #[test]
    fn greedy_circle() {
        let psi = ang(2.0 * PI / 3.0);
        for s in 0..10 {
            let code = greedy_packing(2, psi, 20_000, Seed::new(s)).unwrap();
            assert!(code.saturated);
            assert!(validate_code(&code, psi).valid);
            assert!((2..=3).contains(&code.len()), "{}", code.len());
        }
    }

    #[test]
    fn greedy_octahedral_regime() {
        let psi = ang(FRAC_PI_2);
        let code = greedy_packing(3, psi, 100_000, Seed::new(5)).unwrap();
        assert!(code.saturated);
        assert!(validate_code(&code, psi).valid);
        assert!(code.len() >= 2);
        assert!(code.len() as f64 <= packing_bounds(3, psi).unwrap().max_size());
    }

    #[test]
    fn greedy_near_antipodal() {
        for d in [2, 3, 10] {
            let code = greedy_packing(d, ang(PI - 1e-3), 2000, Seed::new(1)).unwrap();
            assert!((1..=2).contains(&code.len()));
        }
    }

    #[test]
    fn greedy_rejects_bad_input() {
        assert!(greedy_packing(1, ang(1.0), 10, Seed::new(0)).is_err());
        assert!(greedy_packing(3, ang(0.0), 10, Seed::new(0)).is_err());
        assert!(greedy_packing(3, ang(PI), 10, Seed::new(0)).is_err());
        assert!(greedy_packing(3, ang(1.0), 0, Seed::new(0)).is_err());
    }

    #[test]
    fn greedy_cap_stops_early() {
        let code = greedy_packing_capped(16, ang(1.0), 1000, Some(7), Seed::new(2)).unwrap();
        assert_eq!(code.len(), 7);
        assert!(!code.saturated);
    }

    #[test]
    fn restricted_trivial_cases() {
        for d in [2, 3, 6] {
            let code = restricted_packing(
                &basis(d),
                ang(FRAC_PI_2),
                SelectionMode::Exact,
                Seed::new(0),
            )
            .unwrap();
            assert_eq!(code.len(), d);
            let code = restricted_packing(
                &basis(d),
                ang(FRAC_PI_2),
                SelectionMode::Greedy,
                Seed::new(0),
            )
            .unwrap();
            assert_eq!(code.len(), d);
        }
        let same = vec![UnitVector::basis(3, 1); 6];
        for mode in [SelectionMode::Exact, SelectionMode::Greedy] {
            assert_eq!(
                restricted_packing(&same, ang(0.1), mode, Seed::new(0))
                    .unwrap()
                    .len(),
                1
            );
        }
        let many = sample_uniform_sphere(3, 26, Seed::new(0)).unwrap();
        assert!(matches!(
            restricted_packing(&many, ang(0.5), SelectionMode::Exact, Seed::new(0)),
            Err(Error::TooManyCandidates { .. })
        ));
        assert!(restricted_packing(&[], ang(0.5), SelectionMode::Greedy, Seed::new(0)).is_err());
    }

    #[test]
    fn exact_dominates_greedy() {
        for s in 0..30 {
            let cands = sample_uniform_sphere(3, 15, Seed::new(100 + s)).unwrap();
            let psi = ang(1.0);
            let e = restricted_packing(&cands, psi, SelectionMode::Exact, Seed::new(s)).unwrap();
            let g = restricted_packing(&cands, psi, SelectionMode::Greedy, Seed::new(s)).unwrap();
            assert!(validate_code(&e, psi).valid && validate_code(&g, psi).valid);
            assert!(e.len() >= g.len());
        }
    }
}
