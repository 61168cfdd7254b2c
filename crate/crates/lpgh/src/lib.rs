//! A numerical laboratory for comparing unit balls of finite-dimensional
//! `l^p` spaces in two metrics: the classical Gromov-Hausdorff distance and
//! a quantum analogue that enters only through closed-form bounds.
//!
//! The two distances pull apart as `p` drops toward `1`: the coordinatewise
//! signed power map (the Mazur map) gives correspondences whose distortion,
//! and with it the classical distance, vanishes with `p - 1`, while in high
//! dimensions the quantum distance stays bounded away from zero. Everything
//! needed to check that separation numerically at desk scale lives here:
//!
//! - [`lp`]: norms, ball points, the Mazur map, and the scalar power
//!   estimates that control its distortion;
//! - [`sample`]: exact uniform sampling from `l^p` balls and spheres, plus
//!   deterministic grid nets;
//! - [`balance`]: the greedy sign-balancing argument bounding signed sums
//!   of ball points by `n^(1/p)`;
//! - [`gh`]: finite metric spaces, correspondences, distortion, exact
//!   brute-force Gromov-Hausdorff distance, and the sampled distortion
//!   experiment;
//! - [`bounds`]: the closed-form quantum lower bound with its certificate
//!   chain, separation tables over exponent sequences, a bridged embedding
//!   experiment, and the homogeneous extension of sphere maps.

pub mod balance;
pub mod bounds;
pub mod error;
pub mod gh;
pub mod lp;
pub mod sample;

#[cfg(test)]
pub(crate) mod testkit;

pub use error::{Error, Result};
