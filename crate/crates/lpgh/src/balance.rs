//! Greedy sign balancing: given points `x_1, ..., x_n` of the unit ball of
//! `l^p` with `1 < p < 2`, choose signs `a_i` in `{-1, +1}` one at a time so
//! that `||sum a_i x_i||_p <= n^(1/p)`.
//!
//! The choice is the obvious one, keep whichever of `s + x` and `s - x` is
//! shorter, and uniform convexity (Clarkson's inequality) guarantees that
//! the shorter option never breaks the running bound `k^(1/p)`. The module
//! exposes the balancer and an independent certificate checker that
//! recomputes everything from the raw inputs.

use crate::error::{Error, Result};
use crate::lp::{p_norm, BallPoint, LpSpace};

/// Outcome of [`balance_signs`]: the chosen signs together with the signed
/// sum, its norm, the bound `n^(1/p)`, and the norm of every prefix sum.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceResult {
    signs: Vec<i8>,
    signed_sum: Vec<f64>,
    norm: f64,
    bound: f64,
    prefix_norms: Vec<f64>,
}

impl BalanceResult {
    /// The chosen signs, each `-1` or `+1`, in input order.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `sum_i signs[i] * x_i`.
    pub fn signed_sum(&self) -> &[f64] {
        &self.signed_sum
    }

    /// `|| signed_sum ||_p`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `n^(1/p)` for the input length `n`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Norm of the partial sum after each step; entry `k` is bounded by
    /// `(k+1)^(1/p)`, the induction invariant behind the final bound.
    pub fn prefix_norms(&self) -> &[f64] {
        &self.prefix_norms
    }
}

fn validate_family(points: &[BallPoint], p: f64) -> Result<LpSpace> {
    if points.is_empty() {
        return Err(Error::Empty { what: "point list" });
    }
    if !p.is_finite() || p <= 1.0 || p >= 2.0 {
        return Err(Error::Exponent {
            p,
            required: "1 < p < 2",
        });
    }
    let space = points[0].space();
    if space.p() != p {
        return Err(Error::SpaceMismatch {
            what: "points must live in the l^p space of the given exponent",
        });
    }
    if points.iter().any(|x| x.space() != space) {
        return Err(Error::SpaceMismatch {
            what: "all points must share one space",
        });
    }
    Ok(space)
}

/// Chooses signs for `points` greedily so that the signed sum has p-norm at
/// most `n^(1/p)`.
///
/// Step `k+1` with partial sum `s` keeps `+1` when
/// `||s + x||_p <= ||s - x||_p` and `-1` otherwise, so the first sign and
/// all ties resolve to `+1`. Every prefix obeys `||s_k||_p <= k^(1/p)`; the
/// returned [`BalanceResult`] records the prefix norms so callers can audit
/// that invariant without re-running the induction.
///
/// # Errors
///
/// Rejects an empty list, exponents outside `(1, 2)`, and points whose
/// spaces disagree with each other or with `p`. Ball membership itself is
/// carried by [`BallPoint`].
pub fn balance_signs(points: &[BallPoint], p: f64) -> Result<BalanceResult> {
    let space = validate_family(points, p)?;
    let n = points.len();
    let mut sum = vec![0.0f64; space.dim()];
    let mut plus = vec![0.0f64; space.dim()];
    let mut minus = vec![0.0f64; space.dim()];
    let mut signs = Vec::with_capacity(n);
    let mut prefix_norms = Vec::with_capacity(n);
    for x in points {
        for i in 0..space.dim() {
            plus[i] = sum[i] + x.coords()[i];
            minus[i] = sum[i] - x.coords()[i];
        }
        let norm_plus = p_norm(&plus, p)?;
        let norm_minus = p_norm(&minus, p)?;
        if norm_plus <= norm_minus {
            signs.push(1i8);
            sum.copy_from_slice(&plus);
            prefix_norms.push(norm_plus);
        } else {
            signs.push(-1i8);
            sum.copy_from_slice(&minus);
            prefix_norms.push(norm_minus);
        }
    }
    let norm = *prefix_norms.last().expect("n >= 1");
    let bound = (n as f64).powf(p.recip());
    if norm > bound + 1e-9 {
        return Err(Error::Consistency {
            detail: format!("balanced norm {norm} exceeds n^(1/p) = {bound}"),
        });
    }
    Ok(BalanceResult {
        signs,
        signed_sum: sum,
        norm,
        bound,
        prefix_norms,
    })
}

/// Verifies a sign assignment from scratch: recomputes the signed sum and
/// accepts iff its p-norm is at most `n^(1/p) + 1e-9`.
///
/// Entries of `signs` other than `-1` and `+1` make the certificate
/// invalid, so they yield `false` rather than an error.
///
/// # Errors
///
/// Rejects mismatched lengths and the same family-validation failures as
/// [`balance_signs`].
pub fn balance_certificate_check(points: &[BallPoint], signs: &[i8], p: f64) -> Result<bool> {
    let space = validate_family(points, p)?;
    if signs.len() != points.len() {
        return Err(Error::Length {
            what: "sign count",
            expected: points.len(),
            got: signs.len(),
        });
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Ok(false);
    }
    let mut sum = vec![0.0f64; space.dim()];
    for (x, &s) in points.iter().zip(signs) {
        for (acc, c) in sum.iter_mut().zip(x.coords()) {
            *acc += f64::from(s) * c;
        }
    }
    let norm = p_norm(&sum, p)?;
    let bound = (points.len() as f64).powf(p.recip());
    Ok(norm <= bound + 1e-9)
}
