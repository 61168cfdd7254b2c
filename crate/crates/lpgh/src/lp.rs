//! Geometry of the unit ball `K_p^N = { x in R^N : ||x||_p <= 1 }`.
//!
//! Besides the norms themselves this module houses the Mazur map, the
//! coordinatewise signed power map that carries `K_p^N` onto `K_1^N`
//! bijectively, and the elementary scalar inequalities that everything
//! downstream leans on: the gap function `x -> |x^p - x|` on `[0, 2]`,
//! Clarkson's uniform-convexity inequality for `1 < p < 2`, and the
//! two-sided signed power gap estimate.

use crate::error::{Error, Result};

/// Slack allowed on ball membership.
///
/// Points produced by normalization can overshoot the unit sphere by a few
/// ulp; rejecting them would make sampled boundary points unusable.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Additive tolerance baked into [`scalar_gap_within_bound`].
pub const SCALAR_GAP_TOL: f64 = 1e-12;

/// The p-norm `(sum_i |x_i|^p)^(1/p)` for `p >= 1`.
///
/// # Errors
///
/// Rejects `p < 1` (not a norm for any exponent below 1), empty vectors,
/// and non-finite coordinates.
pub fn p_norm(x: &[f64], p: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Empty { what: "vector" });
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::Exponent {
            p,
            required: "1 <= p < infinity",
        });
    }
    if x.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite { what: "vector" });
    }
    if p == 1.0 {
        return Ok(x.iter().map(|c| c.abs()).sum());
    }
    if p == 2.0 {
        return Ok(x.iter().map(|c| c * c).sum::<f64>().sqrt());
    }
    let sum: f64 = x.iter().map(|c| c.abs().powf(p)).sum();
    Ok(sum.powf(p.recip()))
}

/// The conjugate exponent `q = p / (p - 1)`, the unique solution of
/// `1/p + 1/q = 1`. Undefined at `p = 1`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::Exponent { p, required: "p > 1" });
    }
    Ok(p / (p - 1.0))
}

/// A finite-dimensional l^p space: a dimension `N >= 1` and an exponent
/// `p in [1, infinity)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpSpace {
    dim: usize,
    p: f64,
}

impl LpSpace {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty { what: "space dimension" });
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::Exponent {
                p,
                required: "1 <= p < infinity",
            });
        }
        Ok(LpSpace { dim, p })
    }

    pub fn dim(self) -> usize {
        self.dim
    }

    pub fn p(self) -> f64 {
        self.p
    }

    /// Conjugate exponent of the space's `p`; errors at `p = 1`.
    pub fn conjugate(self) -> Result<f64> {
        conjugate_exponent(self.p)
    }

    /// Norm of a vector of matching dimension.
    pub fn norm(self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        p_norm(x, self.p)
    }

    /// Distance `||x - y||_p` between two vectors of matching dimension.
    pub fn distance(self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        p_norm(&diff, self.p)
    }

    fn check_dim(self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Length {
                what: "vector dimension",
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// A point of the closed unit ball of its space, validated to within
/// [`MEMBERSHIP_TOL`] at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    space: LpSpace,
    coords: Vec<f64>,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>, space: LpSpace) -> Result<Self> {
        let norm = space.norm(&coords)?;
        if norm > 1.0 + MEMBERSHIP_TOL {
            return Err(Error::OutsideBall {
                norm,
                tol: MEMBERSHIP_TOL,
            });
        }
        Ok(BallPoint { space, coords })
    }

    /// The origin of the given space.
    pub fn origin(space: LpSpace) -> Self {
        BallPoint {
            space,
            coords: vec![0.0; space.dim()],
        }
    }

    /// Constructor for coordinates that are inside the ball up to rounding.
    ///
    /// Accumulated floating-point error can push a mathematically valid norm
    /// a few ulp past the membership tolerance; such points are pulled back
    /// onto the sphere instead of rejected. Points already within tolerance
    /// are kept bit for bit.
    pub(crate) fn new_renormalized(mut coords: Vec<f64>, space: LpSpace) -> Self {
        let norm = p_norm(&coords, space.p()).expect("caller supplies finite coords");
        if norm > 1.0 + MEMBERSHIP_TOL {
            debug_assert!(
                norm < 1.0 + 1e-9,
                "renormalization is meant for rounding slack, not out-of-ball data"
            );
            for c in &mut coords {
                *c /= norm;
            }
        }
        BallPoint { space, coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn space(&self) -> LpSpace {
        self.space
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// The point's norm, recomputed from the coordinates.
    pub fn norm(&self) -> f64 {
        p_norm(&self.coords, self.space.p()).expect("validated at construction")
    }
}

/// `sgn(t) |t|^e`, with `0` mapped to `0` regardless of sign bit and the
/// exponent-1 case kept bit-exact.
fn signed_power(t: f64, e: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else if e == 1.0 {
        t
    } else {
        t.signum() * t.abs().powf(e)
    }
}

/// The Mazur map `phi: K_p^N -> K_1^N`, `phi(x)_i = sgn(x_i) |x_i|^p`.
///
/// Bijective onto `K_1^N`, with `||phi(x)||_1 = ||x||_p^p`. At `p = 1` it is
/// the identity. Ball membership of the input is carried by the type; the
/// image is renormalized only if rounding pushes its norm past the
/// membership tolerance, which cannot happen for inputs with norm <= 1.
pub fn mazur_map(x: &BallPoint) -> BallPoint {
    let p = x.space().p();
    let coords: Vec<f64> = x.coords().iter().map(|&c| signed_power(c, p)).collect();
    let target = LpSpace::new(x.space().dim(), 1.0).expect("dimension validated with x");
    BallPoint::new_renormalized(coords, target)
}

/// Inverse of the Mazur map: `y in K_1^N` goes to `sgn(y_i) |y_i|^(1/p)`
/// in `K_p^N`.
///
/// # Errors
///
/// The input must live in an exponent-1 space (membership in `K_1^N` is then
/// carried by the type) and the target exponent must satisfy `p >= 1`.
pub fn mazur_map_inverse(y: &BallPoint, p: f64) -> Result<BallPoint> {
    if y.space().p() != 1.0 {
        return Err(Error::Exponent {
            p: y.space().p(),
            required: "source space exponent exactly 1",
        });
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::Exponent {
            p,
            required: "1 <= p < infinity",
        });
    }
    let coords: Vec<f64> = y
        .coords()
        .iter()
        .map(|&c| signed_power(c, p.recip()))
        .collect();
    let target = LpSpace::new(y.space().dim(), p)?;
    Ok(BallPoint::new_renormalized(coords, target))
}

/// The gap `f(x) = |x^p - x|` on `[0, 2]`.
///
/// Over that interval the maximum sits at the right endpoint with value
/// `2^p - 2`; the only interior critical point is `(1/p)^(1/(p-1))`. This
/// is the first of the two elementary estimates behind the distortion
/// bound on the Mazur map.
pub fn power_gap(x: f64, p: f64) -> Result<f64> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::Exponent {
            p,
            required: "1 <= p < infinity",
        });
    }
    if !x.is_finite() || !(0.0..=2.0).contains(&x) {
        return Err(Error::Range {
            what: "x",
            value: x,
            lo: 0.0,
            hi: 2.0,
        });
    }
    Ok((x.powf(p) - x).abs())
}

/// Slacks of the two-sided split estimate for `t >= s >= 0`:
///
/// `(t-s)^p + s^p  <=  t^p  <=  2^(p-1) ((t-s)^p + s^p)`
///
/// Returns `(t^p - lower, upper - t^p)`; the estimate holds exactly when
/// both components are nonnegative. This is the second elementary estimate
/// behind the distortion bound on the Mazur map, the one that splits a
/// p-th power across a difference.
pub fn power_split_slacks(t: f64, s: f64, p: f64) -> Result<(f64, f64)> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::Exponent {
            p,
            required: "1 <= p < infinity",
        });
    }
    if !t.is_finite() || !s.is_finite() {
        return Err(Error::NonFinite { what: "split pair" });
    }
    if s < 0.0 || t < s {
        return Err(Error::Range {
            what: "s",
            value: s,
            lo: 0.0,
            hi: t,
        });
    }
    let lower = (t - s).powf(p) + s.powf(p);
    let tp = t.powf(p);
    Ok((tp - lower, 2f64.powf(p - 1.0) * lower - tp))
}

/// Slack of Clarkson's inequality for `1 < p <= 2` with conjugate `q`:
///
/// `2 (||x||_p^p + ||y||_p^p)^(q/p) - ||x+y||_p^q - ||x-y||_p^q`
///
/// Nonnegative for all pairs; this is the uniform convexity of l^p. The
/// slack vanishes when `y = x` or `y = -x`, and at `p = 2` the inequality
/// collapses to the parallelogram law, so it vanishes identically.
///
/// Evaluated in the factored form `a^q (2 - (||x+y||/a)^q - (||x-y||/a)^q)`
/// with `a = (||x||^p + ||y||^p)^(1/p)`, which survives the conjugate
/// exponents in the hundreds of thousands that arise as `p` approaches 1:
/// both ratios stay at or below `2^(1/q)`, so only the leading factor can
/// overflow. When it does, the result saturates to infinity of the correct
/// sign, or to zero when the parenthesized slack sits inside rounding
/// noise. Accuracy is a few ulps of the leading factor.
pub fn clarkson_slack(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Length {
            what: "clarkson pair",
            expected: x.len(),
            got: y.len(),
        });
    }
    if !p.is_finite() || p <= 1.0 || p > 2.0 {
        return Err(Error::Exponent {
            p,
            required: "1 < p <= 2",
        });
    }
    let q = conjugate_exponent(p)?;
    let sum: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let nx = p_norm(x, p)?;
    let ny = p_norm(y, p)?;
    let ns = p_norm(&sum, p)?;
    let nd = p_norm(&diff, p)?;
    let a = (nx.powf(p) + ny.powf(p)).powf(p.recip());
    if a == 0.0 {
        return Ok(0.0);
    }
    let g = 2.0 - (ns / a).powf(q) - (nd / a).powf(q);
    let lead = a.powf(q);
    if lead.is_infinite() {
        // Rounding in the ratios is amplified q-fold by the powers, so the
        // noise window has to scale with q.
        let noise = q * 1e-13;
        return Ok(if g > noise {
            f64::INFINITY
        } else if g < -noise {
            f64::NEG_INFINITY
        } else {
            0.0
        });
    }
    Ok(lead * g)
}

/// Checks the two-sided scalar estimate
///
/// `| |a-b|^p - |sgn(a)|a|^p - sgn(b)|b|^p| |  <=  (2^(p-1) - 1)(|a|^p + |b|^p)`
///
/// within [`SCALAR_GAP_TOL`] additive slack. This is the coordinatewise
/// inequality that sums up to the p-th-power distortion bound of the Mazur
/// map. Total on finite reals; inputs of huge magnitude are rescaled by
/// their maximum first (the estimate is homogeneous of degree p), so the
/// check never overflows into NaN.
pub fn scalar_gap_within_bound(a: f64, b: f64, p: f64) -> Result<bool> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::Exponent {
            p,
            required: "1 <= p < infinity",
        });
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite { what: "scalar pair" });
    }
    let m = a.abs().max(b.abs());
    let (a, b) = if m > 1e100 { (a / m, b / m) } else { (a, b) };
    let gap = ((a - b).abs().powf(p) - (signed_power(a, p) - signed_power(b, p)).abs()).abs();
    let bound = (2f64.powf(p - 1.0) - 1.0) * (a.abs().powf(p) + b.abs().powf(p));
    Ok(gap <= bound + SCALAR_GAP_TOL)
}
