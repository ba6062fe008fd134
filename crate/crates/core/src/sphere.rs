//! Unit vectors and angles on the hypersphere.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs whose norm is within this distance of 1 are renormalized.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

/// A direction on the unit sphere in `R^D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Validates and renormalizes `coords`. Vectors farther than
    /// [`RENORMALIZE_TOLERANCE`] from unit norm are rejected; vectors already
    /// unit to rounding are kept bit-for-bit.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::param("coords", "dimension must be at least 1"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("coords", "non-finite coordinate"));
        }
        let norm = norm(&coords);
        if (norm - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return Err(Error::NotUnitNorm { norm });
        }
        if (norm - 1.0).abs() <= 1e-14 {
            return Ok(UnitVector(coords));
        }
        Ok(UnitVector(coords.into_iter().map(|c| c / norm).collect()))
    }

    /// Normalizes an arbitrary nonzero vector. Returns `None` for vectors with
    /// (near-)zero or non-finite norm.
    pub fn normalize(mut coords: Vec<f64>) -> Option<Self> {
        let n = norm(&coords);
        if !n.is_finite() || n < 1e-300 || coords.is_empty() {
            return None;
        }
        coords.iter_mut().for_each(|c| *c /= n);
        Some(UnitVector(coords))
    }

    /// The `k`-th standard basis vector of `R^dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        UnitVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn negated(&self) -> Self {
        UnitVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn dot(&self, other: &UnitVector) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(dot(&self.0, &other.0))
    }
}

impl TryFrom<Vec<f64>> for UnitVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        UnitVector::new(v)
    }
}

impl From<UnitVector> for Vec<f64> {
    fn from(u: UnitVector) -> Self {
        u.0
    }
}

/// An angle in radians, restricted to `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const RIGHT: Angle = Angle(PI / 2.0);
    pub const STRAIGHT: Angle = Angle(PI);

    pub fn new(radians: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&radians) {
            return Err(Error::param(
                "angle",
                format!("{radians} rad is outside [0, pi]"),
            ));
        }
        Ok(Angle(radians))
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        Angle::new(degrees.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }
}

impl TryFrom<f64> for Angle {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Angle::new(v)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> Self {
        a.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

pub(crate) fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Dot product with four independent accumulators so the compiler can
/// vectorize the loop.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `arccos` of an inner product, clamped to `[-1, 1]` first.
#[inline]
pub fn clamped_acos(inner: f64) -> f64 {
    inner.clamp(-1.0, 1.0).acos()
}

/// Geodesic angle between two unit vectors.
pub fn angle_between(u: &UnitVector, v: &UnitVector) -> Result<Angle> {
    let inner = u.dot(v)?;
    Ok(Angle(clamped_acos(inner)))
}

/// Maps a cosine threshold `tau` in `[0, 1)` to its angle `arccos(tau)`.
pub fn threshold_to_angle(tau: f64) -> Result<Angle> {
    check_threshold(tau)?;
    Ok(Angle(tau.acos()))
}

pub fn angle_to_threshold(psi: Angle) -> f64 {
    psi.cos()
}

pub(crate) fn check_threshold(tau: f64) -> Result<()> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::param("tau", format!("{tau} is outside [0, 1)")));
    }
    Ok(())
}

/// Returns some unit vector orthogonal to `u` (requires `dim >= 2`).
pub(crate) fn orthogonal_to(u: &[f64]) -> Vec<f64> {
    // Project the basis vector least aligned with u.
    let k = u
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(k, _)| k)
        .unwrap_or(0);
    let mut t: Vec<f64> = u.iter().map(|c| -c * u[k]).collect();
    t[k] += 1.0;
    let n = norm(&t);
    t.iter_mut().for_each(|c| *c /= n);
    t
}
