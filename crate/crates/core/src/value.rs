//! The α-GAN value function
//! `V_α = α/(α-1) · (E_{P_r}[D^{(α-1)/α}] + E_{P_g}[(1-D)^{(α-1)/α}] - 2)`,
//! with the vanilla limit `E_{P_r}[ln D] + E_{P_g}[ln(1-D)]` at `α = 1` and the
//! IPM-style limit `E_{P_r}[D] - E_{P_g}[D] - 1` at `α = ∞`.
//!
//! The discriminator is kept in `[0, 1]` on every branch, including `α = ∞`.

use crate::loss::{AlphaParam, Branch, Label};
use crate::mlp::{MlpModel, OutputMap};
use crate::prob::{DiscreteDistribution, Samples};
use crate::{Error, Result};

/// When `α < 1`, real-side outputs are floored at this value and fake-side
/// outputs capped at one minus it.
pub const DISC_CLAMP: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum DiscriminatorFn {
    /// One output per support atom.
    Tabular(Vec<f64>),
    Constant(f64),
    /// Single-output network ending in a sigmoid.
    Neural(MlpModel),
}

fn check_unit(v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "discriminator output",
            value: v,
            range: "[0, 1]",
        })
    }
}

impl DiscriminatorFn {
    pub fn tabular(values: Vec<f64>) -> Result<Self> {
        values.iter().try_for_each(|&v| check_unit(v))?;
        Ok(Self::Tabular(values))
    }

    pub fn constant(value: f64) -> Result<Self> {
        check_unit(value)?;
        Ok(Self::Constant(value))
    }

    pub fn neural(model: MlpModel) -> Result<Self> {
        if model.output_dim() != 1 || model.output_map() != OutputMap::Sigmoid {
            return Err(Error::InvalidArgument(
                "neural discriminator needs one sigmoid output".into(),
            ));
        }
        Ok(Self::Neural(model))
    }

    pub fn values(&self) -> Option<&[f64]> {
        match self {
            Self::Tabular(v) => Some(v),
            _ => None,
        }
    }

    /// Output on atom `i` of a finite support.
    pub fn at_atom(&self, i: usize) -> Result<f64> {
        match self {
            Self::Tabular(v) => v.get(i).copied().ok_or(Error::DimensionMismatch {
                expected: v.len(),
                got: i + 1,
            }),
            Self::Constant(c) => Ok(*c),
            Self::Neural(_) => Err(Error::NotApplicable(
                "neural discriminator has no atom table".into(),
            )),
        }
    }

    /// Output on a sample vector; tabular discriminators read the atom index
    /// from a one-dimensional sample.
    pub fn at_point(&self, x: &[f64]) -> Result<f64> {
        match self {
            Self::Neural(m) => Ok(m.forward(x)?[0]),
            Self::Constant(c) => Ok(*c),
            Self::Tabular(v) => {
                if x.len() != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        got: x.len(),
                    });
                }
                let idx = x[0];
                if idx < 0.0 || idx.fract() != 0.0 || idx as usize >= v.len() {
                    return Err(Error::OutOfRange {
                        what: "atom index",
                        value: idx,
                        range: "support",
                    });
                }
                Ok(v[idx as usize])
            }
        }
    }

    fn check_support(&self, n: usize) -> Result<()> {
        match self {
            Self::Tabular(v) if v.len() != n => Err(Error::SupportMismatch(v.len(), n)),
            Self::Neural(_) => Err(Error::NotApplicable(
                "exact value needs a tabular or constant discriminator".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Running sums of `D^e` over real inputs and `(1-D)^e` over fake inputs,
/// turned into the value function by [`Accumulator::finish`].
struct Accumulator {
    alpha: AlphaParam,
    real: f64,
    fake: f64,
}

impl Accumulator {
    fn new(alpha: AlphaParam) -> Self {
        Self {
            alpha,
            real: 0.0,
            fake: 0.0,
        }
    }

    fn clamps(&self) -> bool {
        self.alpha.is_at_most_one() && !matches!(self.alpha.branch(), Branch::One)
    }

    // For α < 1 only the side that blows up is clamped: D^e at D = 0 and
    // (1-D)^e at D = 1. The finite side stays exact.
    fn add_real(&mut self, weight: f64, d: f64) {
        let d = if self.clamps() { d.max(DISC_CLAMP) } else { d };
        self.real += weight
            * match self.alpha.branch() {
                Branch::One => d.ln(),
                Branch::Infinity => d,
                Branch::Generic(a) => d.powf((a - 1.0) / a),
            };
    }

    fn add_fake(&mut self, weight: f64, d: f64) {
        let d = if self.clamps() { d.min(1.0 - DISC_CLAMP) } else { d };
        self.fake += weight
            * match self.alpha.branch() {
                Branch::One => (-d).ln_1p(),
                Branch::Infinity => d,
                Branch::Generic(a) => (1.0 - d).powf((a - 1.0) / a),
            };
    }

    fn finish(self) -> f64 {
        match self.alpha.branch() {
            Branch::One => self.real + self.fake,
            Branch::Infinity => self.real - self.fake - 1.0,
            Branch::Generic(a) => a / (a - 1.0) * (self.real + self.fake - 2.0),
        }
    }
}

/// `V_α` for finite-support `p_r`, `p_g`. Zero-mass atoms contribute nothing.
pub fn value_alpha_exact(
    alpha: AlphaParam,
    p_r: &DiscreteDistribution,
    p_g: &DiscreteDistribution,
    d: &DiscriminatorFn,
) -> Result<f64> {
    p_r.check_support(p_g)?;
    d.check_support(p_r.support_size())?;
    let mut acc = Accumulator::new(alpha);
    for (i, (&r, &g)) in p_r.probs().iter().zip(p_g.probs()).enumerate() {
        let di = d.at_atom(i)?;
        if r > 0.0 {
            acc.add_real(r, di);
        }
        if g > 0.0 {
            acc.add_fake(g, di);
        }
    }
    Ok(acc.finish())
}

/// Plug-in estimate of `V_α` from sample means.
pub fn value_alpha_mc(
    alpha: AlphaParam,
    real: &Samples,
    fake: &Samples,
    d: &DiscriminatorFn,
) -> Result<f64> {
    if real.is_empty() || fake.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut acc = Accumulator::new(alpha);
    let wr = 1.0 / real.len() as f64;
    for x in real.rows() {
        acc.add_real(wr, d.at_point(x)?);
    }
    let wf = 1.0 / fake.len() as f64;
    for x in fake.rows() {
        acc.add_fake(wf, d.at_point(x)?);
    }
    Ok(acc.finish())
}

/// Value function of a GAN built from an arbitrary binary loss:
/// `E_{P_r}[-ℓ(1, D)] + E_{P_g}[-ℓ(0, D)]`.
pub fn general_loss_value(
    loss: &dyn Fn(Label, f64) -> Result<f64>,
    p_r: &DiscreteDistribution,
    p_g: &DiscreteDistribution,
    d: &DiscriminatorFn,
) -> Result<f64> {
    p_r.check_support(p_g)?;
    d.check_support(p_r.support_size())?;
    let mut total = 0.0;
    for (i, (&r, &g)) in p_r.probs().iter().zip(p_g.probs()).enumerate() {
        let di = d.at_atom(i)?;
        if r > 0.0 {
            total -= r * loss(Label::Real, di)?;
        }
        if g > 0.0 {
            total -= g * loss(Label::Fake, di)?;
        }
    }
    Ok(total)
}
