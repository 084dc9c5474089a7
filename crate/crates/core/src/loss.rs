//! α-loss in its three forms.
//!
//! For `α ∈ (0, 1) ∪ (1, ∞)` the probability form is
//! `ℓ_α(p̂) = α/(α-1) · (1 - p̂^{(α-1)/α})`, extended continuously by
//! `ℓ_1 = -ln p̂` and `ℓ_∞ = 1 - p̂`. The binary-label form applies it to `ŷ`
//! or `1 - ŷ`, and the margin form to `σ(t)`.
//!
//! Everything is evaluated from `ln p̂` as `-α/(α-1) · expm1((α-1)/α · ln p̂)`,
//! which stays accurate near `α = 1` and for `p̂` close to 1.

use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::math::log_sigmoid;
use crate::{Error, Result};

/// `|α - 1|` below this evaluates the `α = 1` closed form.
pub const ALPHA_ONE_TOL: f64 = 1e-9;
/// Finite orders at or above this evaluate the `α = ∞` closed form.
pub const ALPHA_INF_THRESHOLD: f64 = 1e8;
/// Smallest probability fed to the loss when `α ≤ 1`.
pub const PROB_FLOOR: f64 = 1e-12;

/// Order `α ∈ (0, ∞]` of the loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaParam {
    Finite(f64),
    Infinity,
}

/// Which closed form an order evaluates through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    One,
    Infinity,
    Generic(f64),
}

impl AlphaParam {
    pub const ONE: AlphaParam = AlphaParam::Finite(1.0);
    pub const HALF: AlphaParam = AlphaParam::Finite(0.5);

    /// `α = 0` (infinite loss) and negative orders are rejected.
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha == f64::INFINITY {
            Ok(Self::Infinity)
        } else if alpha.is_nan() || alpha <= 0.0 {
            Err(Error::InvalidAlpha(format!("{alpha} (must be > 0)")))
        } else {
            Ok(Self::Finite(alpha))
        }
    }

    /// Numeric value, `f64::INFINITY` for the infinite order.
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(a) => a,
            Self::Infinity => f64::INFINITY,
        }
    }

    pub fn branch(self) -> Branch {
        match self {
            Self::Infinity => Branch::Infinity,
            Self::Finite(a) if a >= ALPHA_INF_THRESHOLD => Branch::Infinity,
            Self::Finite(a) if (a - 1.0).abs() < ALPHA_ONE_TOL => Branch::One,
            Self::Finite(a) => Branch::Generic(a),
        }
    }

    /// `(α-1)/α`: 0 on the one-branch, 1 on the infinity branch.
    pub fn exponent(self) -> f64 {
        match self.branch() {
            Branch::One => 0.0,
            Branch::Infinity => 1.0,
            Branch::Generic(a) => (a - 1.0) / a,
        }
    }

    /// True when the loss diverges at `p̂ = 0` (α ≤ 1).
    pub fn is_at_most_one(self) -> bool {
        match self.branch() {
            Branch::One => true,
            Branch::Infinity => false,
            Branch::Generic(a) => a < 1.0,
        }
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(a) => write!(f, "{a}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// Accepts decimal literals, `p/q` fractions and `inf`.
impl FromStr for AlphaParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "∞" => return Ok(Self::Infinity),
            _ => {}
        }
        let bad = || Error::InvalidAlpha(format!("cannot parse {s:?}"));
        let value = match s.split_once('/') {
            Some((num, den)) => {
                let num: f64 = num.trim().parse().map_err(|_| bad())?;
                let den: f64 = den.trim().parse().map_err(|_| bad())?;
                num / den
            }
            None => s.parse().map_err(|_| bad())?,
        };
        if value.is_infinite() {
            return Err(bad());
        }
        Self::new(value)
    }
}

impl Serialize for AlphaParam {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(a) => serializer.serialize_f64(*a),
            Self::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// Binary label: `Real` is `y = 1`, `Fake` is `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Real,
    Fake,
}

impl Label {
    pub fn from_bit(y: u8) -> Result<Self> {
        match y {
            1 => Ok(Self::Real),
            0 => Ok(Self::Fake),
            _ => Err(Error::InvalidArgument(format!("label {y} is not 0 or 1"))),
        }
    }
}

/// Loss value together with whether the input probability had to be floored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossValue {
    pub value: f64,
    pub clamped: bool,
}

/// α-loss of an outcome whose predicted log-probability is `ln_p ∈ [-∞, 0]`.
pub fn loss_from_log_prob(alpha: AlphaParam, ln_p: f64) -> f64 {
    match alpha.branch() {
        Branch::One => -ln_p,
        Branch::Infinity => -ln_p.exp_m1(),
        Branch::Generic(a) => {
            let e = (a - 1.0) / a;
            -(a / (a - 1.0)) * (e * ln_p).exp_m1()
        }
    }
}

fn check_prob(p_hat: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p_hat) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "probability",
            value: p_hat,
            range: "[0, 1]",
        })
    }
}

/// Probability-form α-loss, reporting whether `p̂` was floored at [`PROB_FLOOR`].
pub fn loss_prob_checked(alpha: AlphaParam, p_hat: f64) -> Result<LossValue> {
    check_prob(p_hat)?;
    let clamped = alpha.is_at_most_one() && p_hat < PROB_FLOOR;
    let p = if clamped { PROB_FLOOR } else { p_hat };
    Ok(LossValue {
        value: loss_from_log_prob(alpha, p.ln()),
        clamped,
    })
}

pub fn loss_prob(alpha: AlphaParam, p_hat: f64) -> Result<f64> {
    loss_prob_checked(alpha, p_hat).map(|l| l.value)
}

/// Binary-classification α-loss `ℓ_α(y, ŷ)`.
pub fn loss_binary(alpha: AlphaParam, y: Label, y_hat: f64) -> Result<f64> {
    check_prob(y_hat)?;
    match y {
        Label::Real => loss_prob(alpha, y_hat),
        Label::Fake => loss_prob(alpha, 1.0 - y_hat),
    }
}

/// Cross-entropy `ℓ_CE(y, ŷ) = -y ln ŷ - (1-y) ln(1-ŷ)`, floored like the α = 1 loss.
pub fn cross_entropy(y: Label, y_hat: f64) -> Result<f64> {
    check_prob(y_hat)?;
    let p = match y {
        Label::Real => y_hat,
        Label::Fake => 1.0 - y_hat,
    };
    Ok(-p.max(PROB_FLOOR).ln())
}

/// Margin-based α-loss `ℓ̃_α(t) = ℓ_α(σ(t))` on the extended reals.
pub fn loss_margin(alpha: AlphaParam, t: f64) -> f64 {
    loss_from_log_prob(alpha, log_sigmoid(t))
}

/// Outcome of checking `φ(t) + ψ(t) ≤ φ(1/2) + ψ(1/2)` on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGuessReport {
    pub holds: bool,
    /// Largest `φ(t) + ψ(t) - φ(1/2) - ψ(1/2)` seen on the grid.
    pub worst: f64,
    pub worst_t: f64,
}

/// Checks that a discriminator facing identical distributions is best off
/// answering 1/2, with `φ = -ℓ_α(1, ·)` and `ψ = -ℓ_α(0, ·)`.
pub fn check_uniform_guess_condition(alpha: AlphaParam, grid_size: usize) -> Result<UniformGuessReport> {
    if grid_size < 3 {
        return Err(Error::InvalidArgument(format!("grid size {grid_size} < 3")));
    }
    let total = |t: f64| -> Result<f64> {
        Ok(-loss_binary(alpha, Label::Real, t)? - loss_binary(alpha, Label::Fake, t)?)
    };
    let center = total(0.5)?;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_t = 0.0;
    for i in 0..grid_size {
        let t = i as f64 / (grid_size - 1) as f64;
        let gap = total(t)? - center;
        if gap > worst {
            worst = gap;
            worst_t = t;
        }
    }
    Ok(UniformGuessReport {
        holds: worst <= 1e-12,
        worst,
        worst_t,
    })
}
