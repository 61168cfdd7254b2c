//! Point generation on `K_p^N`: seeded uniform sampling of the ball and its
//! boundary sphere, and deterministic lattice nets for small dimensions.
//!
//! All randomness flows through a ChaCha8 stream seeded from the config's
//! 64-bit seed, so a config identifies its output exactly. Bitwise
//! reproducibility is promised within this crate only; across
//! implementations of the same pipelines the agreement is in distribution,
//! since transcendental rounding differs between math libraries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{Error, Result};
use crate::lp::{p_norm, BallPoint, LpSpace, MEMBERSHIP_TOL};

/// Largest dimension for which lattice generation is allowed; the lattice
/// has `(resolution + 1)^N` candidate points.
pub const GRID_MAX_DIM: usize = 3;

/// What a [`SampleConfig`] generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Uniform with respect to Lebesgue measure on the ball.
    UniformBall,
    /// The normalized p-generalized surface law on the sphere.
    UniformSphere,
    /// The deterministic lattice of [`grid_points`].
    Grid,
}

impl SampleMode {
    pub fn label(self) -> &'static str {
        match self {
            SampleMode::UniformBall => "uniform_ball",
            SampleMode::UniformSphere => "uniform_sphere",
            SampleMode::Grid => "grid",
        }
    }
}

/// A complete description of one sampling run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    space: LpSpace,
    count: usize,
    seed: u64,
    mode: SampleMode,
}

impl SampleConfig {
    /// # Errors
    ///
    /// Rejects `count = 0`, and grid mode in dimension above
    /// [`GRID_MAX_DIM`].
    pub fn new(space: LpSpace, count: usize, seed: u64, mode: SampleMode) -> Result<Self> {
        if count == 0 {
            return Err(Error::Empty { what: "sample count" });
        }
        if mode == SampleMode::Grid && space.dim() > GRID_MAX_DIM {
            return Err(Error::TooLarge {
                what: "grid dimension",
                got: space.dim() as u64,
                cap: GRID_MAX_DIM as u64,
            });
        }
        Ok(SampleConfig {
            space,
            count,
            seed,
            mode,
        })
    }

    pub fn space(&self) -> LpSpace {
        self.space
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> SampleMode {
        self.mode
    }

    fn require_mode(&self, expected: SampleMode) -> Result<()> {
        if self.mode != expected {
            return Err(Error::Mode {
                expected: expected.label(),
                got: self.mode.label(),
            });
        }
        Ok(())
    }
}

/// One coordinate block of the p-generalized normal law: `N` independent
/// variates with density proportional to `exp(-|t|^p)`, realized as
/// `sign * a^(1/p)` with `a ~ Gamma(1/p, 1)`. Returns the signed variates
/// together with `sum a_i = sum |g_i|^p`, kept in its exact Gamma form so
/// the normalizers below never re-round it.
fn signed_variates(rng: &mut ChaCha8Rng, gamma: &Gamma<f64>, space: LpSpace) -> (Vec<f64>, f64) {
    let e = space.p().recip();
    let mut sum = 0.0;
    let coords = (0..space.dim())
        .map(|_| {
            let a: f64 = gamma.sample(rng);
            let negative: bool = rng.random();
            sum += a;
            let g = a.powf(e);
            if negative {
                -g
            } else {
                g
            }
        })
        .collect();
    (coords, sum)
}

/// `count` points distributed uniformly on the ball of `config.space`.
///
/// Uses the exact mixture representation of the uniform law: with
/// `g_i ~ exp(-|t|^p)` i.i.d. and an independent standard exponential `z`,
/// the vector `g / (sum |g_i|^p + z)^(1/p)` is uniform on `K_p^N`. No
/// rejection step, so the cost is linear in `count * N` for every `p`.
///
/// # Errors
///
/// The config's mode must be [`SampleMode::UniformBall`].
pub fn sample_ball(config: &SampleConfig) -> Result<Vec<BallPoint>> {
    config.require_mode(SampleMode::UniformBall)?;
    let space = config.space();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed());
    let gamma = Gamma::new(space.p().recip(), 1.0).expect("positive shape and scale");
    let mut out = Vec::with_capacity(config.count());
    for _ in 0..config.count() {
        let (raw, weight) = signed_variates(&mut rng, &gamma, space);
        let z: f64 = rng.sample(Exp1);
        let denom = (weight + z).powf(space.p().recip());
        let coords = raw.iter().map(|g| g / denom).collect();
        out.push(BallPoint::new_renormalized(coords, space));
    }
    Ok(out)
}

/// `count` points on the unit sphere of `config.space`, each with
/// `| ||x||_p - 1 | <= 1e-12`, distributed by normalizing the
/// p-generalized law of [`sample_ball`].
///
/// # Errors
///
/// The config's mode must be [`SampleMode::UniformSphere`].
pub fn sample_sphere(config: &SampleConfig) -> Result<Vec<BallPoint>> {
    config.require_mode(SampleMode::UniformSphere)?;
    let space = config.space();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed());
    let gamma = Gamma::new(space.p().recip(), 1.0).expect("positive shape and scale");
    let mut out = Vec::with_capacity(config.count());
    for _ in 0..config.count() {
        let (raw, weight) = signed_variates(&mut rng, &gamma, space);
        let denom = weight.powf(space.p().recip());
        let coords = raw.iter().map(|g| g / denom).collect();
        out.push(BallPoint::new_renormalized(coords, space));
    }
    Ok(out)
}

/// All points of the lattice `{-1, -1 + 2/resolution, ..., 1}^N` that lie
/// in the ball (within the membership tolerance), ordered with the first
/// coordinate varying slowest.
///
/// For even resolutions the lattice contains `0` and the returned set is a
/// `2 sqrt(N) / resolution`-net of the ball in its own metric, for every
/// `p in [1, 2]` and `N <= 3`. Odd resolutions omit the axes and the net
/// radius degrades near `p = 1`, so consumers that rely on the net bound
/// should stick to even resolutions.
///
/// # Errors
///
/// Rejects dimensions above [`GRID_MAX_DIM`] and `resolution = 0`.
pub fn grid_points(space: LpSpace, resolution: u32) -> Result<Vec<BallPoint>> {
    if space.dim() > GRID_MAX_DIM {
        return Err(Error::TooLarge {
            what: "grid dimension",
            got: space.dim() as u64,
            cap: GRID_MAX_DIM as u64,
        });
    }
    if resolution == 0 {
        return Err(Error::Range {
            what: "grid resolution",
            value: 0.0,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let ticks: Vec<f64> = (0..=resolution)
        .map(|k| -1.0 + 2.0 * f64::from(k) / f64::from(resolution))
        .collect();
    let dim = space.dim();
    let mut out = Vec::new();
    let mut index = vec![0usize; dim];
    loop {
        let coords: Vec<f64> = index.iter().map(|&k| ticks[k]).collect();
        if p_norm(&coords, space.p()).expect("ticks are finite") <= 1.0 + MEMBERSHIP_TOL {
            out.push(BallPoint::new(coords, space).expect("membership just checked"));
        }
        let mut axis = dim;
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            if index[axis] + 1 < ticks.len() {
                index[axis] += 1;
                break;
            }
            index[axis] = 0;
        }
    }
}

/// Nominal covering radius of [`grid_points`]: `2 sqrt(N) / resolution`.
///
/// A true covering radius of the lattice net for even resolutions and
/// `p in [1, 2]`, `N <= 3`; see [`grid_points`] for the odd-resolution
/// caveat.
pub fn net_radius(space: LpSpace, resolution: u32) -> f64 {
    2.0 * (space.dim() as f64).sqrt() / f64::from(resolution)
}
