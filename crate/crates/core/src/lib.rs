//! Capacity of distinguishable identities under threshold verification on
//! the unit hypersphere.
//!
//! The crate covers the geometric side (cap measures, spherical-code
//! bounds), fixed-code and random-code capacity quantities, a synthetic
//! identity pipeline with cap-concentrated views, and empirical audits of
//! identity-grouped embedding datasets.

pub mod audit;
pub mod capacity;
pub mod centered;
pub mod error;
pub mod figures;
pub mod graph;
pub mod io;
pub mod measure;
pub mod packing;
pub mod random_code;
pub mod rng;
pub mod sampling;
pub mod sphere;
pub mod table;

pub use error::{Error, Result};
pub use measure::{log_cap_measure, log_cap_measure_quadrature, LogMeasure};
pub use rng::Seed;
pub use sampling::{sample_cap, sample_uniform_sphere, CapSampler};
pub use sphere::{angle_between, angle_to_threshold, threshold_to_angle, Angle, UnitVector};
