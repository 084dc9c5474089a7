//! Recovering the Arimoto generator from the margin-based α-loss.
//!
//! For a margin loss `ℓ̃`, `f(u) = -inf_t (u ℓ̃(t) + ℓ̃(-t))` is convex and
//! satisfies `f(u) = u f(1/u)`. With `ℓ̃ = ℓ̃_α` the infimum has the closed form
//! `inf_t η ℓ̃_α(t) + (1-η) ℓ̃_α(-t) = α/(α-1) (1 - (η^α + (1-η)^α)^{1/α})`;
//! here it is also located numerically, so the generator can be rebuilt
//! without using that identity.

use crate::arimoto::{equilibrium_constant, f_alpha};
use crate::loss::{loss_margin, AlphaParam, Branch};
use crate::math::{binary_entropy, log_sigmoid, power_sum_root, sigmoid};
use crate::search::golden_section_min;
use crate::{Error, Result};

const INITIAL_BRACKET: f64 = 40.0;
const MAX_BRACKET: f64 = 700.0;
const SEARCH_TOL: f64 = 1e-10;

/// Infimum over the margin `t` of the η-weighted margin loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginInfimum {
    /// Closed-form infimum.
    pub value: f64,
    /// Objective at the numerically located minimizer.
    pub numeric_value: f64,
    /// Minimizer; `±∞` when the infimum is only approached at the ends.
    pub argmin: f64,
}

/// `η ℓ̃_α(t) + (1-η) ℓ̃_α(-t)`.
pub fn weighted_margin_loss(alpha: AlphaParam, eta: f64, t: f64) -> f64 {
    let pos = if eta == 0.0 { 0.0 } else { eta * loss_margin(alpha, t) };
    let neg = if eta == 1.0 { 0.0 } else { (1.0 - eta) * loss_margin(alpha, -t) };
    pos + neg
}

/// Closed-form `α/(α-1) (1 - (η^α + (1-η)^α)^{1/α})`; binary entropy at
/// `α = 1`, `min(η, 1-η)` at `α = ∞`.
pub fn margin_infimum_closed_form(alpha: AlphaParam, eta: f64) -> f64 {
    match alpha.branch() {
        Branch::One => binary_entropy(eta),
        Branch::Infinity => eta.min(1.0 - eta),
        Branch::Generic(a) => a / (a - 1.0) * (1.0 - power_sum_root(eta, 1.0 - eta, a)),
    }
}

/// `ln` of the ratio between the increasing and decreasing parts of
/// `d/dt [η ℓ̃(t) + (1-η) ℓ̃(-t)] = (1-η) σ(-t)^e σ(t) - η σ(t)^e σ(-t)`,
/// with `e = (α-1)/α`. Positive where the objective increases.
fn slope_log_ratio(alpha: AlphaParam, eta: f64, t: f64) -> f64 {
    let e = alpha.exponent();
    let (lp, lm) = (log_sigmoid(t), log_sigmoid(-t));
    ((1.0 - eta).ln() + e * lm + lp) - (eta.ln() + e * lp + lm)
}

/// Bisection on the slope sign around a golden-section estimate; the
/// objective is too flat near far-out minimizers for value comparisons alone
/// to pin `t*` down.
fn polish_minimizer(alpha: AlphaParam, eta: f64, t0: f64) -> f64 {
    let slope = |t: f64| slope_log_ratio(alpha, eta, t);
    let mut step = 1e-6 * t0.abs().max(1.0);
    let (mut lo, mut hi) = (t0 - step, t0 + step);
    while slope(lo) > 0.0 || slope(hi) < 0.0 {
        step *= 2.0;
        if step > 1.0 {
            return t0;
        }
        lo = t0 - step;
        hi = t0 + step;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn locate_minimizer(alpha: AlphaParam, eta: f64) -> (f64, f64) {
    let objective = |t: f64| weighted_margin_loss(alpha, eta, t);
    let mut radius = INITIAL_BRACKET;
    loop {
        let m = golden_section_min(objective, -radius, radius, SEARCH_TOL);
        let at_edge = m.x.abs() > radius - 1e-6 * radius;
        if !at_edge {
            if matches!(alpha.branch(), Branch::Infinity) {
                return (m.x, m.value);
            }
            let t = polish_minimizer(alpha, eta, m.x);
            return (t, objective(t));
        }
        if radius >= MAX_BRACKET {
            return (m.x.signum() * f64::INFINITY, m.value);
        }
        radius = (2.0 * radius).min(MAX_BRACKET);
    }
}

pub fn margin_infimum(alpha: AlphaParam, eta: f64) -> Result<MarginInfimum> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange {
            what: "eta",
            value: eta,
            range: "[0, 1]",
        });
    }
    let value = margin_infimum_closed_form(alpha, eta);
    // the loss vanishes only at t = ±∞, so the endpoints are handled analytically
    if eta == 0.0 || eta == 1.0 {
        return Ok(MarginInfimum {
            value,
            numeric_value: 0.0,
            argmin: if eta == 0.0 { f64::NEG_INFINITY } else { f64::INFINITY },
        });
    }
    if eta == 0.5 {
        return Ok(MarginInfimum {
            value,
            numeric_value: weighted_margin_loss(alpha, eta, 0.0),
            argmin: 0.0,
        });
    }
    let (argmin, numeric_value) = locate_minimizer(alpha, eta);
    Ok(MarginInfimum {
        value,
        numeric_value,
        argmin,
    })
}

/// First-order condition at an interior minimizer `t*`: `σ(t*/α) = η`
/// (equivalently the tilted ratio of `σ(t*)` and `σ(-t*)` recovers η).
/// `None` on the infinity branch, where no interior minimizer exists.
pub fn stationarity_residual(alpha: AlphaParam, eta: f64, t: f64) -> Option<f64> {
    match alpha.branch() {
        Branch::Infinity => None,
        Branch::One => Some((sigmoid(t) - eta).abs()),
        Branch::Generic(a) => Some((sigmoid(t / a) - eta).abs()),
    }
}

fn check_u(u: f64) -> Result<()> {
    if u < 0.0 || !u.is_finite() {
        Err(Error::Negative { what: "u", value: u })
    } else {
        Ok(())
    }
}

/// `-inf_t (u ℓ̃_α(t) + ℓ̃_α(-t))` from the numerically located minimizer,
/// via `η = u / (1 + u)`.
pub fn nguyen_generator(alpha: AlphaParam, u: f64) -> Result<f64> {
    check_u(u)?;
    let eta = u / (1.0 + u);
    Ok(-(1.0 + u) * margin_infimum(alpha, eta)?.numeric_value)
}

/// Rebuilds [`f_alpha`] from the margin loss:
/// `-inf_t (u ℓ̃_α(t) + ℓ̃_α(-t)) - K (1 + u) / 2` with `K` the equilibrium constant.
pub fn reconstruct_f(alpha: AlphaParam, u: f64) -> Result<f64> {
    Ok(nguyen_generator(alpha, u)? - equilibrium_constant(alpha) * (1.0 + u) / 2.0)
}

/// The same construction shifted by the constant `K` only, which reproduces
/// [`crate::arimoto::f_alpha_affine`].
pub fn reconstruct_f_affine(alpha: AlphaParam, u: f64) -> Result<f64> {
    Ok(nguyen_generator(alpha, u)? - equilibrium_constant(alpha))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    pub holds: bool,
    /// Largest `|f_α(u) - u f_α(1/u)|` over the grid.
    pub worst: f64,
}

/// Checks `f_α(u) = u f_α(1/u)` to `1e-9` on a grid of positive `u`.
pub fn perspective_symmetry_check(alpha: AlphaParam, u_grid: &[f64]) -> Result<SymmetryReport> {
    let mut worst: f64 = 0.0;
    for &u in u_grid {
        if u <= 0.0 || !u.is_finite() {
            return Err(Error::OutOfRange {
                what: "u",
                value: u,
                range: "(0, inf)",
            });
        }
        let gap = (f_alpha(alpha, u)? - u * f_alpha(alpha, 1.0 / u)?).abs();
        worst = worst.max(gap);
    }
    Ok(SymmetryReport {
        holds: worst <= 1e-9,
        worst,
    })
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
