//! Scalar helpers shared by the loss, divergence and training code.

use std::f64::consts::LN_2;

/// Logistic sigmoid `1 / (1 + e^{-t})`, exact at `±∞`.
pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^t)` without overflow.
pub fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// `ln σ(t) = -softplus(-t)`.
pub fn log_sigmoid(t: f64) -> f64 {
    -softplus(-t)
}

/// `x · ln(x / y)` with the conventions `0 · ln(0/y) = 0`.
pub fn xlogx_over_y(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// Overflow-safe power mean `(a^α + b^α)^{1/α}` for `a, b ≥ 0` and finite `α > 0`.
///
/// Computed as `m · (1 + (s/m)^α)^{1/α}` with `m = max(a, b)`, `s = min(a, b)`.
pub fn power_sum_root(a: f64, b: f64, alpha: f64) -> f64 {
    let (m, s) = if a >= b { (a, b) } else { (b, a) };
    if m == 0.0 {
        return 0.0;
    }
    if s == 0.0 {
        return m;
    }
    let r_pow = (alpha * (s / m).ln()).exp();
    m * (r_pow.ln_1p() / alpha).exp()
}

/// `2^{1/α - 1}`, the per-unit-mass value of the power mean at equal masses.
pub fn half_pow(alpha: f64) -> f64 {
    ((1.0 / alpha - 1.0) * LN_2).exp()
}

/// Binary entropy in nats with `0 ln 0 = 0`.
pub fn binary_entropy(eta: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    term(eta) + term(1.0 - eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_limits() {
        assert_eq!(sigmoid(f64::INFINITY), 1.0);
        assert_eq!(sigmoid(f64::NEG_INFINITY), 0.0);
        assert_eq!(sigmoid(0.0), 0.5);
    }

    #[test]
    fn softplus_is_stable() {
        assert!((softplus(1000.0) - 1000.0).abs() < 1e-12);
        assert!(softplus(-1000.0) >= 0.0);
        assert!((softplus(0.0) - LN_2).abs() < 1e-15);
        assert!((log_sigmoid(-800.0) + 800.0).abs() < 1e-9);
    }

    #[test]
    fn power_sum_root_matches_naive_and_survives_large_alpha() {
        let naive = (0.3f64.powf(2.5) + 0.7f64.powf(2.5)).powf(1.0 / 2.5);
        assert!((power_sum_root(0.3, 0.7, 2.5) - naive).abs() < 1e-15);
        // naive form underflows to 0^(1/α) here
        let v = power_sum_root(1e-3, 2e-3, 500.0);
        assert!((v - 2e-3).abs() < 1e-15);
        assert_eq!(power_sum_root(0.0, 0.0, 3.0), 0.0);
        assert_eq!(power_sum_root(0.4, 0.0, 0.2), 0.4);
    }

    #[test]
    fn binary_entropy_endpoints() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - LN_2).abs() < 1e-15);
    }
}
