//! Arimoto divergence and its relatives.
//!
//! `D_{f_α}(P‖Q) = α/(α-1) · (Σ_x (p(x)^α + q(x)^α)^{1/α} - 2^{1/α})`.
//!
//! The sum is evaluated term by term as
//! `α/(α-1) · Σ_x [(p^α + q^α)^{1/α} - 2^{1/α-1}(p + q)]`, which is the same
//! quantity for normalized inputs but keeps every summand small, symmetric and
//! free of the `O(1)` cancellation near `α = 1`. At `α = 1` the terms become
//! `p ln(2p/(p+q)) + q ln(2q/(p+q))` (twice Jensen-Shannon) and at `α = ∞`
//! they become `|p - q| / 2` (total variation).

use serde::Serialize;
use std::f64::consts::LN_2;

use crate::loss::{AlphaParam, Branch};
use crate::math::{half_pow, power_sum_root, xlogx_over_y};
use crate::prob::DiscreteDistribution;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceValue {
    pub value: f64,
    pub alpha: AlphaParam,
    /// Summands short-circuited because an atom carried zero mass, plus one if
    /// a negative rounding residue in the total was clamped to 0.
    pub clamped_terms: usize,
}

/// One summand of the divergence for masses `a, b ≥ 0`; symmetric in `(a, b)`.
fn arimoto_term(branch: Branch, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    match branch {
        Branch::One => {
            let m = a + b;
            if m == 0.0 {
                0.0
            } else {
                xlogx_over_y(a, m / 2.0) + xlogx_over_y(b, m / 2.0)
            }
        }
        Branch::Infinity => (a - b).abs() / 2.0,
        Branch::Generic(alpha) => {
            alpha / (alpha - 1.0) * (power_sum_root(a, b, alpha) - half_pow(alpha) * (a + b))
        }
    }
}

/// `α/(α-1) · (2^{1/α} - 2)`: the value of the game at equilibrium when the
/// generator matches the data. Limits are `-ln 4` at `α = 1` and `-1` at `α = ∞`.
pub fn equilibrium_constant(alpha: AlphaParam) -> f64 {
    match alpha.branch() {
        Branch::One => -2.0 * LN_2,
        Branch::Infinity => -1.0,
        Branch::Generic(a) => a / (a - 1.0) * (((1.0 / a) * LN_2).exp() - 2.0),
    }
}

fn check_nonnegative(u: f64) -> Result<()> {
    if u < 0.0 || u.is_nan() {
        Err(Error::Negative { what: "u", value: u })
    } else {
        Ok(())
    }
}

/// Generator of the Arimoto divergence, normalized so that `f(1) = 0` and
/// `f(u) = u f(1/u)`:
///
/// `f_α(u) = α/(α-1) · ((1 + u^α)^{1/α} - 2^{1/α-1}(1 + u))`.
///
/// It differs from [`f_alpha_affine`] only by an affine term in `u - 1`,
/// which no f-divergence can see. Branches: `u ln u - (1+u) ln((1+u)/2)` at
/// `α = 1`, `|u - 1| / 2` at `α = ∞`.
pub fn f_alpha(alpha: AlphaParam, u: f64) -> Result<f64> {
    check_nonnegative(u)?;
    Ok(arimoto_term(alpha.branch(), u, 1.0))
}

/// Generator in the form `α/(α-1) · ((1 + u^α)^{1/α} - (1 + u) - 2^{1/α} + 2)`,
/// i.e. `f_α(u) + K (u - 1) / 2` with `K` = [`equilibrium_constant`].
/// At `α = ∞` this is `max(1, u) - u`.
pub fn f_alpha_affine(alpha: AlphaParam, u: f64) -> Result<f64> {
    Ok(f_alpha(alpha, u)? + equilibrium_constant(alpha) * (u - 1.0) / 2.0)
}

pub fn arimoto_divergence(
    alpha: AlphaParam,
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
) -> Result<DivergenceValue> {
    p.check_support(q)?;
    let branch = alpha.branch();
    let mut clamped_terms = 0;
    let mut total = 0.0;
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        if a == 0.0 || b == 0.0 {
            clamped_terms += 1;
        }
        total += arimoto_term(branch, a, b);
    }
    if total < 0.0 {
        total = 0.0;
        clamped_terms += 1;
    }
    Ok(DivergenceValue {
        value: total,
        alpha,
        clamped_terms,
    })
}

/// Jensen-Shannon divergence in nats, `∈ [0, ln 2]`.
pub fn jsd(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_support(q)?;
    let mut kl_pm = 0.0;
    let mut kl_qm = 0.0;
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        let m = 0.5 * (a + b);
        kl_pm += xlogx_over_y(a, m);
        kl_qm += xlogx_over_y(b, m);
    }
    Ok((0.5 * (kl_pm + kl_qm)).max(0.0))
}

/// Squared Hellinger distance `½ Σ (√p - √q)²`, `∈ [0, 1]`.
pub fn sq_hellinger(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_support(q)?;
    Ok(0.5
        * p.probs()
            .iter()
            .zip(q.probs())
            .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
            .sum::<f64>())
}

/// Total variation `½ Σ |p - q|`, `∈ [0, 1]`.
pub fn tv(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_support(q)?;
    Ok(0.5 * p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `ψ_α(p) = α/(α-1) · (((1+p)^α + (1-p)^α)^{1/α} - 2^{1/α})`, the lower
/// envelope of `D_{f_α}` as a function of total variation.
pub fn psi_alpha(alpha: AlphaParam, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    Ok(match alpha.branch() {
        Branch::One => xlogx_over_y(1.0 + p, 1.0) + xlogx_over_y(1.0 - p, 1.0),
        Branch::Infinity => p,
        Branch::Generic(a) => {
            a / (a - 1.0) * (power_sum_root(1.0 + p, 1.0 - p, a) - 2.0 * half_pow(a))
        }
    })
}

/// `ψ_α(1) = α/(α-1) · (2 - 2^{1/α})`; `2 ln 2` at `α = 1`, `1` at `α = ∞`.
pub fn psi_alpha_at_one(alpha: AlphaParam) -> f64 {
    match alpha.branch() {
        Branch::One => 2.0 * LN_2,
        Branch::Infinity => 1.0,
        Branch::Generic(a) => a / (a - 1.0) * (2.0 - ((1.0 / a) * LN_2).exp()),
    }
}

/// Exponent `min(α, 1/2)` that turns `D_{f_α}` into a metric.
pub fn metric_exponent(alpha: AlphaParam) -> f64 {
    alpha.value().min(0.5)
}

/// `D_{f_α}(p, q)^{min(α, 1/2)}`.
pub fn metric_power(
    alpha: AlphaParam,
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
) -> Result<f64> {
    Ok(arimoto_divergence(alpha, p, q)?.value.powf(metric_exponent(alpha)))
}
