//! Finite metric spaces, correspondences, and Gromov-Hausdorff distance.
//!
//! A correspondence between two finite spaces is a relation that covers both
//! index sets; half of its worst distance discrepancy bounds the GH distance
//! from above, and minimizing over all correspondences attains it. This
//! module provides audited metric matrices, the distortion functional, an
//! exact brute-force GH oracle for spaces of at most [`BRUTE_FORCE_CAP`]
//! points, Hausdorff distance between index subsets, and the sampled
//! distortion experiment for the coordinatewise signed power map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::{mazur_map, BallPoint, LpSpace};
use crate::sample::{sample_ball, sample_sphere, SampleConfig, SampleMode};

/// Slack allowed when auditing the triangle inequality; p-th roots near
/// `p = 1` accumulate more rounding than a 1e-12 audit would tolerate.
pub const METRIC_AUDIT_TOL: f64 = 1e-9;

/// Size cap for [`brute_force_gh`] on each input space.
pub const BRUTE_FORCE_CAP: usize = 6;

/// Point count up to which distortion experiments scan all pairs; larger
/// samples fall back to [`SUBSAMPLED_PAIRS`] random pairs.
pub const ALL_PAIRS_MAX_POINTS: usize = 2000;

/// Number of random pairs scanned when a sample is too large for the
/// all-pairs sweep.
pub const SUBSAMPLED_PAIRS: u64 = 4_000_000;

const SPHERE_STREAM_SALT: u64 = 0x9E37_79B9_7F4A_7C15;
const PAIR_STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// A finite metric space given by its distance matrix, validated at
/// construction: zero diagonal, exact symmetry, nonnegative finite entries,
/// and the triangle inequality within [`METRIC_AUDIT_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    size: usize,
    dist: Vec<f64>,
}

impl FiniteMetricSpace {
    /// Builds and audits a space from a square matrix.
    ///
    /// # Errors
    ///
    /// Rejects empty or ragged input and any metric-axiom violation. The
    /// triangle audit is cubic in the size.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::Empty { what: "distance matrix" });
        }
        let mut dist = Vec::with_capacity(size * size);
        for row in &rows {
            if row.len() != size {
                return Err(Error::Length {
                    what: "distance matrix row",
                    expected: size,
                    got: row.len(),
                });
            }
            dist.extend_from_slice(row);
        }
        let space = FiniteMetricSpace { size, dist };
        space.audit()?;
        Ok(space)
    }

    fn audit(&self) -> Result<()> {
        let m = self.size;
        for i in 0..m {
            for j in 0..m {
                let d = self.dist(i, j);
                if !d.is_finite() {
                    return Err(Error::NonFinite { what: "distance matrix" });
                }
                if d < 0.0 {
                    return Err(Error::MetricAxiom {
                        detail: format!("dist[{i}][{j}] = {d} is negative"),
                    });
                }
                if self.dist(j, i) != d {
                    return Err(Error::MetricAxiom {
                        detail: format!(
                            "dist[{i}][{j}] = {d} differs from dist[{j}][{i}] = {}",
                            self.dist(j, i)
                        ),
                    });
                }
            }
            if self.dist(i, i) != 0.0 {
                return Err(Error::MetricAxiom {
                    detail: format!("dist[{i}][{i}] = {} is not zero", self.dist(i, i)),
                });
            }
        }
        for i in 0..m {
            for j in 0..m {
                let dij = self.dist(i, j);
                for k in 0..m {
                    if self.dist(i, k) > dij + self.dist(j, k) + METRIC_AUDIT_TOL {
                        return Err(Error::MetricAxiom {
                            detail: format!(
                                "triangle violated at ({i},{j},{k}): {} > {} + {}",
                                self.dist(i, k),
                                dij,
                                self.dist(j, k)
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Distance between points `i` and `j`; panics if an index is out of
    /// range, like slice indexing.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.size && j < self.size, "index out of range");
        self.dist[i * self.size + j]
    }
}

/// The pairwise distance matrix of a list of ball points, with exact
/// symmetry and zero diagonal by construction.
///
/// # Errors
///
/// Rejects an empty list and points outside the given space; the triangle
/// audit of [`FiniteMetricSpace::from_matrix`] then applies.
pub fn metric_from_points(points: &[BallPoint], space: LpSpace) -> Result<FiniteMetricSpace> {
    if points.is_empty() {
        return Err(Error::Empty { what: "point list" });
    }
    if points.iter().any(|x| x.space() != space) {
        return Err(Error::SpaceMismatch {
            what: "metric points must share the given space",
        });
    }
    let m = points.len();
    let mut rows = vec![vec![0.0f64; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let d = space.distance(points[i].coords(), points[j].coords())?;
            rows[i][j] = d;
            rows[j][i] = d;
        }
    }
    FiniteMetricSpace::from_matrix(rows)
}

/// A relation between the index sets of two spaces that covers both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
    left_size: usize,
    right_size: usize,
}

impl Correspondence {
    /// Builds a correspondence from `pairs` between index sets of the given
    /// sizes; duplicates are collapsed and the pair list is kept sorted.
    ///
    /// # Errors
    ///
    /// Rejects empty sides, out-of-range indices, and relations that leave
    /// an index of either side uncovered.
    pub fn new(mut pairs: Vec<(usize, usize)>, left_size: usize, right_size: usize) -> Result<Self> {
        if left_size == 0 || right_size == 0 {
            return Err(Error::Correspondence {
                reason: "both index sets must be nonempty",
            });
        }
        if pairs.iter().any(|&(i, j)| i >= left_size || j >= right_size) {
            return Err(Error::Correspondence {
                reason: "pair index out of range",
            });
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut left = vec![false; left_size];
        let mut right = vec![false; right_size];
        for &(i, j) in &pairs {
            left[i] = true;
            right[j] = true;
        }
        if left.iter().any(|c| !c) {
            return Err(Error::Correspondence {
                reason: "left side not fully covered",
            });
        }
        if right.iter().any(|c| !c) {
            return Err(Error::Correspondence {
                reason: "right side not fully covered",
            });
        }
        Ok(Correspondence {
            pairs,
            left_size,
            right_size,
        })
    }

    /// The identity pairing on `n` indices.
    pub fn identity(n: usize) -> Result<Self> {
        Correspondence::new((0..n).map(|i| (i, i)).collect(), n, n)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }
}

fn check_sizes(r: &Correspondence, a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<()> {
    if r.left_size() != a.size() {
        return Err(Error::Length {
            what: "correspondence left size",
            expected: a.size(),
            got: r.left_size(),
        });
    }
    if r.right_size() != b.size() {
        return Err(Error::Length {
            what: "correspondence right size",
            expected: b.size(),
            got: r.right_size(),
        });
    }
    Ok(())
}

/// `max |d_A(i, i') - d_B(j, j')|` over pairs `(i, j), (i', j')` of the
/// correspondence: how badly the relation distorts distances.
///
/// # Errors
///
/// The correspondence must be sized for exactly these two spaces.
pub fn correspondence_distortion(
    r: &Correspondence,
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
) -> Result<f64> {
    check_sizes(r, a, b)?;
    let mut worst = 0.0f64;
    for &(i, j) in r.pairs() {
        for &(i2, j2) in r.pairs() {
            worst = worst.max((a.dist(i, i2) - b.dist(j, j2)).abs());
        }
    }
    Ok(worst)
}

/// Half the distortion of `r`: an upper bound for the GH distance of the
/// two spaces, exact when `r` attains the minimal distortion.
pub fn gh_upper_from_correspondence(
    r: &Correspondence,
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
) -> Result<f64> {
    Ok(correspondence_distortion(r, a, b)? / 2.0)
}

/// Worst discrepancy of the candidate pair against the committed ones.
fn added_distortion(
    pairs: &[(usize, usize)],
    cand: (usize, usize),
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
) -> f64 {
    let mut worst = 0.0f64;
    for &(i, j) in pairs {
        worst = worst.max((a.dist(i, cand.0) - b.dist(j, cand.1)).abs());
    }
    worst
}

struct GhSearch<'a> {
    a: &'a FiniteMetricSpace,
    b: &'a FiniteMetricSpace,
    pairs: Vec<(usize, usize)>,
    covered_b: Vec<bool>,
    best: f64,
}

impl GhSearch<'_> {
    /// Assign a partner in B to each point of A, depth-first, pruning on
    /// the running maximum.
    fn assign_left(&mut self, i: usize, running: f64) {
        if i == self.a.size() {
            let uncovered: Vec<usize> =
                (0..self.b.size()).filter(|&j| !self.covered_b[j]).collect();
            self.assign_uncovered(&uncovered, 0, running);
            return;
        }
        for j in 0..self.b.size() {
            let step = running.max(added_distortion(&self.pairs, (i, j), self.a, self.b));
            if step >= self.best {
                continue;
            }
            self.pairs.push((i, j));
            let fresh = !self.covered_b[j];
            self.covered_b[j] = true;
            self.assign_left(i + 1, step);
            if fresh {
                self.covered_b[j] = false;
            }
            self.pairs.pop();
        }
    }

    /// Give each still-uncovered point of B a partner in A.
    fn assign_uncovered(&mut self, uncovered: &[usize], k: usize, running: f64) {
        if k == uncovered.len() {
            self.best = running;
            return;
        }
        let j = uncovered[k];
        for i in 0..self.a.size() {
            let step = running.max(added_distortion(&self.pairs, (i, j), self.a, self.b));
            if step >= self.best {
                continue;
            }
            self.pairs.push((i, j));
            self.assign_uncovered(uncovered, k + 1, step);
            self.pairs.pop();
        }
    }
}

/// Exact GH distance of two spaces with at most [`BRUTE_FORCE_CAP`] points
/// each: half the minimal correspondence distortion.
///
/// Every correspondence contains one of the form "a partner for each point
/// of A, plus a partner for each point of B left uncovered", and dropping
/// pairs never increases the maximum, so minimizing over that family is
/// enough. The family is enumerated depth-first with branch-and-bound on
/// the running maximum, seeded with the index-order pairing.
///
/// # Errors
///
/// Rejects spaces above the size cap.
pub fn brute_force_gh(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<f64> {
    for space in [a, b] {
        if space.size() > BRUTE_FORCE_CAP {
            return Err(Error::TooLarge {
                what: "brute-force space size",
                got: space.size() as u64,
                cap: BRUTE_FORCE_CAP as u64,
            });
        }
    }
    let seed_pairs: Vec<(usize, usize)> = (0..a.size().max(b.size()))
        .map(|k| (k.min(a.size() - 1), k.min(b.size() - 1)))
        .collect();
    let seed = Correspondence::new(seed_pairs, a.size(), b.size()).expect("covers both sides");
    let mut search = GhSearch {
        a,
        b,
        pairs: Vec::with_capacity(a.size() + b.size()),
        covered_b: vec![false; b.size()],
        best: correspondence_distortion(&seed, a, b)?,
    };
    search.assign_left(0, 0.0);
    Ok(search.best / 2.0)
}

/// Hausdorff distance between two index subsets of one space:
/// `max(sup_{s in S} d(s, T), sup_{t in T} d(t, S))`.
///
/// # Errors
///
/// Rejects empty subsets and out-of-range indices.
pub fn hausdorff_distance(s: &[usize], t: &[usize], m: &FiniteMetricSpace) -> Result<f64> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::Empty { what: "index subset" });
    }
    for &i in s.iter().chain(t) {
        if i >= m.size() {
            return Err(Error::Range {
                what: "subset index",
                value: i as f64,
                lo: 0.0,
                hi: (m.size() - 1) as f64,
            });
        }
    }
    let directed = |from: &[usize], to: &[usize]| {
        from.iter()
            .map(|&i| {
                to.iter()
                    .map(|&j| m.dist(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
    };
    Ok(directed(s, t).max(directed(t, s)))
}

/// Outcome of [`mazur_correspondence_experiment`]: the empirical distortion
/// of the pairing `x <-> phi(x)` over sampled pairs, against its proved
/// ceiling.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    /// Exponent of the sampled ball.
    pub p: f64,
    /// Dimension of the sampled ball.
    pub dim: usize,
    /// Number of sampled points (ball and sphere halves combined).
    pub sample_count: usize,
    /// Seed of the ball stream; the sphere and pair-subsampling streams are
    /// salted from it.
    pub seed: u64,
    /// Number of point pairs actually scanned.
    pub pair_count: u64,
    /// `max |  ||x-y||_p - ||phi(x)-phi(y)||_1 |` over scanned pairs.
    pub empirical_distortion: f64,
    /// `max | ||x-y||_p^p - ||phi(x)-phi(y)||_1 |` over scanned pairs, the
    /// intermediate step behind the distortion bound.
    pub power_gap_max: f64,
    /// `2 (2^p - 2)`, the proved distortion ceiling.
    pub theoretical_bound: f64,
    /// `2^p - 2`, the resulting GH upper bound and the ceiling for
    /// [`power_gap_max`](Self::power_gap_max).
    pub gh_upper_bound: f64,
}

/// Samples `K_p^N` (half uniform ball, half uniform sphere), pairs every
/// point `x` with its image `phi(x)` in the l^1 ball, and measures the
/// worst empirical distortion of that pairing over sampled point pairs.
///
/// All pairs are scanned up to [`ALL_PAIRS_MAX_POINTS`] points; beyond
/// that, [`SUBSAMPLED_PAIRS`] uniformly random pairs are scanned instead,
/// making the result a lower estimate of the true supremum either way. The
/// report's maxima must respect their proved ceilings; a violation reports
/// an internal inconsistency instead of a result.
///
/// # Errors
///
/// Requires `p` in `[1, 2]`, `dim >= 1`, `sample_count >= 2`.
pub fn mazur_correspondence_experiment(
    p: f64,
    dim: usize,
    sample_count: usize,
    seed: u64,
) -> Result<DistortionReport> {
    if !p.is_finite() || !(1.0..=2.0).contains(&p) {
        return Err(Error::Exponent {
            p,
            required: "1 <= p <= 2",
        });
    }
    let space = LpSpace::new(dim, p)?;
    if sample_count < 2 {
        return Err(Error::Range {
            what: "sample count",
            value: sample_count as f64,
            lo: 2.0,
            hi: f64::INFINITY,
        });
    }
    let sphere_count = sample_count / 2;
    let ball_count = sample_count - sphere_count;
    let mut points = sample_ball(&SampleConfig::new(
        space,
        ball_count,
        seed,
        SampleMode::UniformBall,
    )?)?;
    points.extend(sample_sphere(&SampleConfig::new(
        space,
        sphere_count.max(1),
        seed ^ SPHERE_STREAM_SALT,
        SampleMode::UniformSphere,
    )?)?);
    points.truncate(sample_count);
    let images: Vec<BallPoint> = points.iter().map(mazur_map).collect();
    let l1 = images[0].space();

    let mut empirical = 0.0f64;
    let mut power_gap = 0.0f64;
    let mut pair_count = 0u64;
    let mut scan = |i: usize, j: usize| -> Result<()> {
        let dp = space.distance(points[i].coords(), points[j].coords())?;
        let d1 = l1.distance(images[i].coords(), images[j].coords())?;
        empirical = empirical.max((dp - d1).abs());
        power_gap = power_gap.max((dp.powf(p) - d1).abs());
        pair_count += 1;
        Ok(())
    };
    if points.len() <= ALL_PAIRS_MAX_POINTS {
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                scan(i, j)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ PAIR_STREAM_SALT);
        let mut drawn = 0u64;
        while drawn < SUBSAMPLED_PAIRS {
            let i = rng.random_range(0..points.len());
            let j = rng.random_range(0..points.len());
            if i == j {
                continue;
            }
            scan(i, j)?;
            drawn += 1;
        }
    }

    let gh_upper_bound = 2f64.powf(p) - 2.0;
    let theoretical_bound = 2.0 * gh_upper_bound;
    if empirical > theoretical_bound + 1e-9 {
        return Err(Error::Consistency {
            detail: format!(
                "empirical distortion {empirical} exceeds the proved ceiling {theoretical_bound}"
            ),
        });
    }
    if power_gap > gh_upper_bound + 1e-9 {
        return Err(Error::Consistency {
            detail: format!(
                "power-gap maximum {power_gap} exceeds the proved ceiling {gh_upper_bound}"
            ),
        });
    }
    Ok(DistortionReport {
        p,
        dim,
        sample_count,
        seed,
        pair_count,
        empirical_distortion: empirical,
        power_gap_max: power_gap,
        theoretical_bound,
        gh_upper_bound,
    })
}
