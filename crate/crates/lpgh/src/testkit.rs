//! Proptest strategies shared by the unit tests of this crate.

use std::ops::{Range, RangeInclusive};

use proptest::prelude::*;

use crate::gh::FiniteMetricSpace;
use crate::lp::{BallPoint, LpSpace};

/// Exponents across the whole supported interval, endpoints included.
pub fn exponent_any() -> impl Strategy<Value = f64> {
    1.0f64..=2.0
}

/// Exponents bounded away from both endpoints, for operations whose
/// hypotheses are strict.
pub fn exponent_open() -> impl Strategy<Value = f64> {
    1.000_001f64..=1.999_999
}

fn scaled_into_ball(mut coords: Vec<f64>, dim: usize, p: f64) -> BallPoint {
    let space = LpSpace::new(dim, p).unwrap();
    let norm = space.norm(&coords).unwrap();
    if norm > 1.0 {
        for c in &mut coords {
            *c /= norm;
        }
    }
    BallPoint::new(coords, space).unwrap()
}

/// A single point of some unit ball, with dimension and exponent drawn
/// from the given ranges.
pub fn ball_point_strategy(
    dims: Range<usize>,
    exponents: RangeInclusive<f64>,
) -> impl Strategy<Value = BallPoint> {
    (dims, exponents).prop_flat_map(|(dim, p)| {
        proptest::collection::vec(-1.0f64..=1.0, dim)
            .prop_map(move |coords| scaled_into_ball(coords, dim, p))
    })
}

/// A family of points sharing one unit ball, together with its exponent.
pub fn ball_family_strategy(
    dims: Range<usize>,
    exponents: RangeInclusive<f64>,
    counts: Range<usize>,
) -> impl Strategy<Value = (Vec<BallPoint>, f64)> {
    (dims, exponents, counts).prop_flat_map(|(dim, p, n)| {
        proptest::collection::vec(proptest::collection::vec(-1.0f64..=1.0, dim), n).prop_map(
            move |rows| {
                let pts = rows
                    .into_iter()
                    .map(|r| scaled_into_ball(r, dim, p))
                    .collect();
                (pts, p)
            },
        )
    })
}

/// A finite metric space realized by random points of the Euclidean unit
/// cube, so every metric axiom holds by construction.
pub fn metric_space_strategy(sizes: Range<usize>) -> impl Strategy<Value = FiniteMetricSpace> {
    sizes.prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(0.0f64..=1.0, 3), n).prop_map(|pts| {
            let rows: Vec<Vec<f64>> = pts
                .iter()
                .map(|a| {
                    pts.iter()
                        .map(|b| {
                            a.iter()
                                .zip(b)
                                .map(|(s, t)| (s - t) * (s - t))
                                .sum::<f64>()
                                .sqrt()
                        })
                        .collect()
                })
                .collect();
            FiniteMetricSpace::from_matrix(rows).unwrap()
        })
    })
}

/// Metric spaces small enough for exhaustive correspondence enumeration.
pub fn tiny_metric_space_strategy() -> impl Strategy<Value = FiniteMetricSpace> {
    metric_space_strategy(1..4)
}
