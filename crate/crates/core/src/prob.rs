//! Finite discrete distributions, toy continuous data distributions and sampling.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::rng::Rng;
use crate::{Error, Result};

/// Probability vector over a finite, ordered support. Zero-mass atoms are kept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    /// Normalizes non-negative weights by their sum.
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::AllZero);
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::NonFinite(format!("weight {w}")));
        }
        if let Some(&w) = weights.iter().find(|&&w| w < 0.0) {
            return Err(Error::Negative {
                what: "weight",
                value: w,
            });
        }
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            return Err(Error::AllZero);
        }
        Ok(Self {
            probs: weights.iter().map(|w| w / total).collect(),
        })
    }

    /// Two-point distribution `[1 - θ, θ]`; index 1 is the outcome "1".
    pub fn bernoulli(theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::OutOfRange {
                what: "theta",
                value: theta,
                range: "[0, 1]",
            });
        }
        Ok(Self {
            probs: vec![1.0 - theta, theta],
        })
    }

    pub fn uniform(support_size: usize) -> Result<Self> {
        Self::new(&vec![1.0; support_size])
    }

    /// Draw from the flat Dirichlet on the simplex of the given size.
    pub fn random(support_size: usize, rng: &mut Rng) -> Self {
        assert!(support_size >= 1);
        loop {
            let w: Vec<f64> = (0..support_size).map(|_| rng.exponential()).collect();
            if let Ok(d) = Self::new(&w) {
                return d;
            }
        }
    }

    /// `(1 - λ)·self + λ·other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        self.check_support(other)?;
        let w: Vec<f64> = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (1.0 - lambda) * a + lambda * b)
            .collect();
        Self::new(&w)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn check_support(&self, other: &Self) -> Result<()> {
        if self.probs.len() == other.probs.len() {
            Ok(())
        } else {
            Err(Error::SupportMismatch(self.probs.len(), other.probs.len()))
        }
    }

    /// Draw one atom index by inverse CDF.
    pub fn draw_index(&self, rng: &mut Rng) -> usize {
        let u = rng.uniform();
        let mut cum = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            cum += p;
            if u < cum {
                return i;
            }
        }
        // u landed in the rounding gap above the final partial sum
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub std: f64,
}

/// Toy data distributions for the trainer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ToyContinuousDist {
    Gaussian1d { mean: f64, std: f64 },
    GaussianMixture1d { components: Vec<MixtureComponent> },
    Ring2d { n_modes: usize, radius: f64, mode_std: f64 },
}

/// A mode center together with its spread.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub center: Vec<f64>,
    pub std: f64,
}

impl ToyContinuousDist {
    pub fn gaussian1d(mean: f64, std: f64) -> Result<Self> {
        let d = Self::Gaussian1d { mean, std };
        d.validate()?;
        Ok(d)
    }

    pub fn mixture1d(components: Vec<MixtureComponent>) -> Result<Self> {
        let d = Self::GaussianMixture1d { components };
        d.validate()?;
        Ok(d)
    }

    pub fn ring2d(n_modes: usize, radius: f64, mode_std: f64) -> Result<Self> {
        let d = Self::Ring2d {
            n_modes,
            radius,
            mode_std,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let positive_std = |s: f64| {
            if s > 0.0 && s.is_finite() {
                Ok(())
            } else {
                Err(Error::OutOfRange {
                    what: "std",
                    value: s,
                    range: "(0, inf)",
                })
            }
        };
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::NonFinite(format!("{what} {x}")))
            }
        };
        match self {
            Self::Gaussian1d { mean, std } => {
                finite(*mean, "mean")?;
                positive_std(*std)
            }
            Self::GaussianMixture1d { components } => {
                if components.is_empty() {
                    return Err(Error::InvalidArgument("mixture has no components".into()));
                }
                for c in components {
                    finite(c.mean, "mean")?;
                    positive_std(c.std)?;
                    if !(c.weight >= 0.0 && c.weight.is_finite()) {
                        return Err(Error::Negative {
                            what: "mixture weight",
                            value: c.weight,
                        });
                    }
                }
                let total: f64 = components.iter().map(|c| c.weight).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::OutOfRange {
                        what: "sum of mixture weights",
                        value: total,
                        range: "{1}",
                    });
                }
                Ok(())
            }
            Self::Ring2d {
                n_modes,
                radius,
                mode_std,
            } => {
                if *n_modes == 0 {
                    return Err(Error::InvalidArgument("ring needs at least one mode".into()));
                }
                finite(*radius, "radius")?;
                positive_std(*mode_std)
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Gaussian1d { .. } | Self::GaussianMixture1d { .. } => 1,
            Self::Ring2d { .. } => 2,
        }
    }

    /// Discrete mode structure, if the distribution has one.
    pub fn modes(&self) -> Option<Vec<Mode>> {
        match self {
            Self::Gaussian1d { .. } => None,
            Self::GaussianMixture1d { components } => Some(
                components
                    .iter()
                    .map(|c| Mode {
                        center: vec![c.mean],
                        std: c.std,
                    })
                    .collect(),
            ),
            Self::Ring2d {
                n_modes,
                radius,
                mode_std,
            } => Some(
                (0..*n_modes)
                    .map(|k| {
                        let angle = TAU * k as f64 / *n_modes as f64;
                        Mode {
                            center: vec![radius * angle.cos(), radius * angle.sin()],
                            std: *mode_std,
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Per-dimension range covering essentially all of the mass (±6σ around every mode).
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        let modes = match self {
            Self::Gaussian1d { mean, std } => vec![Mode {
                center: vec![*mean],
                std: *std,
            }],
            _ => self.modes().unwrap_or_default(),
        };
        (0..self.dim())
            .map(|j| {
                modes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| {
                    (lo.min(m.center[j] - 6.0 * m.std), hi.max(m.center[j] + 6.0 * m.std))
                })
            })
            .collect()
    }
}

/// Row-major `n × dim` sample matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    dim: usize,
    data: Vec<f64>,
}

impl Samples {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            data: Vec::new(),
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(1, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mean(&self) -> Vec<f64> {
        let n = self.len().max(1) as f64;
        let mut m = vec![0.0; self.dim];
        for r in self.rows() {
            for (acc, x) in m.iter_mut().zip(r) {
                *acc += x;
            }
        }
        m.iter_mut().for_each(|x| *x /= n);
        m
    }

    /// Per-dimension population standard deviation.
    pub fn std(&self) -> Vec<f64> {
        let mean = self.mean();
        let n = self.len().max(1) as f64;
        let mut v = vec![0.0; self.dim];
        for r in self.rows() {
            for ((acc, x), m) in v.iter_mut().zip(r).zip(&mean) {
                *acc += (x - m) * (x - m);
            }
        }
        v.iter().map(|s| (s / n).sqrt()).collect()
    }
}

/// Anything that can draw one vector-valued sample at a time.
pub trait Sampler {
    fn dim(&self) -> usize;
    fn draw(&self, rng: &mut Rng, out: &mut Vec<f64>);
}

impl Sampler for DiscreteDistribution {
    fn dim(&self) -> usize {
        1
    }

    /// Outcomes are encoded as the atom index.
    fn draw(&self, rng: &mut Rng, out: &mut Vec<f64>) {
        out.push(self.draw_index(rng) as f64);
    }
}

impl Sampler for ToyContinuousDist {
    fn dim(&self) -> usize {
        ToyContinuousDist::dim(self)
    }

    fn draw(&self, rng: &mut Rng, out: &mut Vec<f64>) {
        match self {
            Self::Gaussian1d { mean, std } => out.push(mean + std * rng.normal()),
            Self::GaussianMixture1d { components } => {
                let u = rng.uniform();
                let mut cum = 0.0;
                let mut pick = components.len() - 1;
                for (i, c) in components.iter().enumerate() {
                    cum += c.weight;
                    if u < cum {
                        pick = i;
                        break;
                    }
                }
                let c = &components[pick];
                out.push(c.mean + c.std * rng.normal());
            }
            Self::Ring2d {
                n_modes,
                radius,
                mode_std,
            } => {
                let k = rng.index(*n_modes);
                let angle = TAU * k as f64 / *n_modes as f64;
                out.push(radius * angle.cos() + mode_std * rng.normal());
                out.push(radius * angle.sin() + mode_std * rng.normal());
            }
        }
    }
}

/// Standard normal latent vectors.
#[derive(Debug, Clone, Copy)]
pub struct StandardNormal {
    pub dim: usize,
}

impl Sampler for StandardNormal {
    fn dim(&self) -> usize {
        self.dim
    }

    fn draw(&self, rng: &mut Rng, out: &mut Vec<f64>) {
        out.extend((0..self.dim).map(|_| rng.normal()));
    }
}

/// `n` i.i.d. draws as an `n × d` matrix.
pub fn sample<S: Sampler + ?Sized>(dist: &S, n: usize, rng: &mut Rng) -> Result<Samples> {
    if n == 0 {
        return Err(Error::EmptyBatch);
    }
    let mut data = Vec::with_capacity(n * dist.dim());
    for _ in 0..n {
        dist.draw(rng, &mut data);
    }
    Samples::new(dist.dim(), data)
}
