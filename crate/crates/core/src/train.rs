//! Desk-scale α-GAN training on toy continuous data.
//!
//! Generator and discriminator are small [`MlpModel`]s. Gradients of the
//! batch value `V̂_α` are derived by hand through the discriminator logit `s`:
//! with `e = (α-1)/α`,
//!
//! ```text
//! ∂V̂/∂s = D^e (1-D) / n_r        on real samples
//! ∂V̂/∂s = -(1-D)^e D / n_f       on generated samples
//! ```
//!
//! which covers `α = 1` (`e = 0`) and `α = ∞` (`e = 1`) without special cases.
//! The discriminator ascends `V̂_α`, the generator descends it.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::arimoto::arimoto_divergence;
use crate::loss::{AlphaParam, Branch};
use crate::math::{log_sigmoid, sigmoid};
use crate::mlp::{MlpModel, OutputMap};
use crate::prob::{sample, DiscreteDistribution, Mode, Samples, StandardNormal, ToyContinuousDist};
use crate::rng::Rng;
use crate::{Error, Result};

/// Discriminator outputs are kept in `[ε, 1-ε]` inside the `α < 1` branch.
pub const TRAIN_DISC_CLAMP: f64 = 1e-6;

/// Bins per dimension of the histogram divergence estimate.
pub const HISTOGRAM_BINS: usize = 64;

const INIT_STREAM: u64 = 0;
const DATA_STREAM: u64 = 1;
const LATENT_STREAM: u64 = 2;
const EVAL_STREAM: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainConfig {
    pub alpha: AlphaParam,
    pub dataset: ToyContinuousDist,
    pub latent_dim: usize,
    pub batch_size: usize,
    /// Discriminator updates per generator update.
    pub disc_steps: usize,
    pub lr_disc: f64,
    pub lr_gen: f64,
    /// Heavy-ball momentum in `[0, 1)`; 0 is plain SGD.
    pub momentum: f64,
    pub total_gen_steps: usize,
    pub seed: u64,
    pub eval_every: usize,
    pub eval_samples: usize,
    pub gen_hidden: Vec<usize>,
    pub disc_hidden: Vec<usize>,
    /// Radius, in mode standard deviations, used for mode coverage.
    pub mode_threshold_std: f64,
}

impl TrainConfig {
    /// Defaults for everything except the order and the data.
    pub fn new(alpha: AlphaParam, dataset: ToyContinuousDist) -> Self {
        Self {
            alpha,
            dataset,
            latent_dim: 1,
            batch_size: 64,
            disc_steps: 1,
            lr_disc: 0.05,
            lr_gen: 0.05,
            momentum: 0.0,
            total_gen_steps: 5000,
            seed: 0,
            eval_every: 500,
            eval_samples: 2000,
            gen_hidden: vec![16, 16],
            disc_hidden: vec![32, 32],
            mode_threshold_std: 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.dataset.validate()?;
        let counts = [
            ("latent_dim", self.latent_dim),
            ("batch_size", self.batch_size),
            ("disc_steps", self.disc_steps),
            ("eval_every", self.eval_every),
            ("eval_samples", self.eval_samples),
        ];
        for (what, v) in counts {
            if v == 0 {
                return Err(Error::InvalidArgument(format!("{what} must be at least 1")));
            }
        }
        if self.gen_hidden.iter().chain(&self.disc_hidden).any(|&h| h == 0) {
            return Err(Error::InvalidArgument("hidden layer widths must be at least 1".into()));
        }
        for (what, v) in [("lr_disc", self.lr_disc), ("lr_gen", self.lr_gen)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange {
                    what,
                    value: v,
                    range: "(0, inf)",
                });
            }
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::OutOfRange {
                what: "momentum",
                value: self.momentum,
                range: "[0, 1)",
            });
        }
        if !(self.mode_threshold_std > 0.0 && self.mode_threshold_std.is_finite()) {
            return Err(Error::OutOfRange {
                what: "mode_threshold_std",
                value: self.mode_threshold_std,
                range: "(0, inf)",
            });
        }
        Ok(())
    }

    pub fn gen_dims(&self) -> Vec<usize> {
        let mut d = vec![self.latent_dim];
        d.extend(&self.gen_hidden);
        d.push(self.dataset.dim());
        d
    }

    pub fn disc_dims(&self) -> Vec<usize> {
        let mut d = vec![self.dataset.dim()];
        d.extend(&self.disc_hidden);
        d.push(1);
        d
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRecord {
    pub step: usize,
    /// `V̂_α` on fresh evaluation batches.
    pub value_estimate: f64,
    /// Arimoto divergence between binned real and generated samples.
    pub divergence_estimate: f64,
    pub modes_covered: usize,
    pub sample_mean: Vec<f64>,
    pub sample_std: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainReport {
    pub config: TrainConfig,
    pub seed: u64,
    pub records: Vec<EvalRecord>,
    /// Not serialized, so identical runs give identical documents.
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl TrainReport {
    pub fn final_record(&self) -> Option<&EvalRecord> {
        self.records.last()
    }
}

/// Batch value together with its gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub value: f64,
    pub disc: Vec<f64>,
    pub gen: Vec<f64>,
}

/// The logit range matching `D ∈ [ε, 1-ε]`.
fn logit_bound() -> f64 {
    ((1.0 - TRAIN_DISC_CLAMP) / TRAIN_DISC_CLAMP).ln()
}

/// Per-sample contribution and its derivative in the logit, for one side.
struct Side {
    alpha: AlphaParam,
    clamp: bool,
}

impl Side {
    fn new(alpha: AlphaParam) -> Self {
        let clamp = matches!(alpha.branch(), Branch::Generic(a) if a < 1.0);
        Self { alpha, clamp }
    }

    /// `(h(s), h'(s))` where `h = D^e` on real samples (`sign = 1`) and
    /// `h = (1-D)^e` on generated samples (`sign = -1`); the `α = 1` branch
    /// uses the logarithm instead.
    fn eval(&self, s: f64, sign: f64) -> (f64, f64) {
        let (s, live) = if self.clamp {
            let b = logit_bound();
            (s.clamp(-b, b), s.abs() < b)
        } else {
            (s, true)
        };
        // ln of the probability this side wants large, and its complement
        let ln_own = log_sigmoid(sign * s);
        let other = sigmoid(-sign * s);
        let (h, dh) = match self.alpha.branch() {
            Branch::One => (ln_own, other),
            Branch::Infinity => {
                let own = ln_own.exp();
                (own, own * other)
            }
            Branch::Generic(a) => {
                let e = (a - 1.0) / a;
                let pow = (e * ln_own).exp();
                (pow, e * pow * other)
            }
        };
        (h, if live { sign * dh } else { 0.0 })
    }
}

fn combine(alpha: AlphaParam, real: f64, fake: f64) -> f64 {
    match alpha.branch() {
        Branch::One => real + fake,
        // (1-D) on the fake side, so E_r[D] - E_f[D] - 1 = E_r[D] + E_f[1-D] - 2
        Branch::Infinity => real + fake - 2.0,
        Branch::Generic(a) => a / (a - 1.0) * (real + fake - 2.0),
    }
}

/// Scale turning `h'` into `∂V/∂s`.
fn outer_scale(alpha: AlphaParam) -> f64 {
    match alpha.branch() {
        Branch::One | Branch::Infinity => 1.0,
        Branch::Generic(a) => a / (a - 1.0),
    }
}

fn check_models(gen: &MlpModel, disc: &MlpModel, real: &Samples, latent: &Samples) -> Result<()> {
    if real.is_empty() || latent.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if disc.output_dim() != 1 || disc.output_map() != OutputMap::Sigmoid {
        return Err(Error::InvalidArgument("discriminator needs one sigmoid output".into()));
    }
    if gen.output_dim() != disc.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: disc.input_dim(),
            got: gen.output_dim(),
        });
    }
    if real.dim() != disc.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: disc.input_dim(),
            got: real.dim(),
        });
    }
    if latent.dim() != gen.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: gen.input_dim(),
            got: latent.dim(),
        });
    }
    Ok(())
}

/// Monte-Carlo value `V̂_α` of real samples against `G(z)` for the latent batch.
pub fn batch_value(
    alpha: AlphaParam,
    real: &Samples,
    latent: &Samples,
    gen: &MlpModel,
    disc: &MlpModel,
) -> Result<f64> {
    check_models(gen, disc, real, latent)?;
    let side = Side::new(alpha);
    let mut r = 0.0;
    for x in real.rows() {
        r += side.eval(disc.forward_pre(x)?[0], 1.0).0;
    }
    let mut f = 0.0;
    for z in latent.rows() {
        let x = gen.forward(z)?;
        f += side.eval(disc.forward_pre(&x)?[0], -1.0).0;
    }
    Ok(combine(alpha, r / real.len() as f64, f / latent.len() as f64))
}

/// Exact gradients of [`batch_value`] with respect to the discriminator and
/// generator parameters.
pub fn grads_value_alpha(
    alpha: AlphaParam,
    real: &Samples,
    latent: &Samples,
    gen: &MlpModel,
    disc: &MlpModel,
) -> Result<Gradients> {
    check_models(gen, disc, real, latent)?;
    let side = Side::new(alpha);
    let scale = outer_scale(alpha);
    let mut gd = vec![0.0; disc.num_params()];
    let mut gg = vec![0.0; gen.num_params()];

    let wr = 1.0 / real.len() as f64;
    let mut r = 0.0;
    for x in real.rows() {
        let tape = disc.forward_tape(x)?;
        let (h, dh) = side.eval(tape.pre_output[0], 1.0);
        r += h;
        disc.backward(&tape, &[scale * dh * wr], &mut gd);
    }

    let wf = 1.0 / latent.len() as f64;
    let mut f = 0.0;
    for z in latent.rows() {
        let gtape = gen.forward_tape(z)?;
        let dtape = disc.forward_tape(&gtape.pre_output)?;
        let (h, dh) = side.eval(dtape.pre_output[0], -1.0);
        f += h;
        let dx = disc.backward(&dtape, &[scale * dh * wf], &mut gd);
        gen.backward(&gtape, &dx, &mut gg);
    }

    let value = combine(alpha, r * wr, f * wf);
    if !value.is_finite() || gd.iter().chain(&gg).any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("value-function gradient".into()));
    }
    Ok(Gradients {
        value,
        disc: gd,
        gen: gg,
    })
}

fn coverage(samples: &Samples, modes: &[Mode], threshold_std: f64) -> usize {
    if samples.is_empty() {
        return 0;
    }
    let needed = 20.max(samples.len().div_ceil(100));
    modes
        .iter()
        .filter(|m| {
            let r2 = (threshold_std * m.std).powi(2);
            let hits = samples
                .rows()
                .filter(|x| x.iter().zip(&m.center).map(|(a, b)| (a - b).powi(2)).sum::<f64>() <= r2)
                .count();
            hits >= needed
        })
        .count()
}

/// Number of modes holding at least `max(20, 1%)` of the samples within
/// `threshold_std` mode deviations of their center.
pub fn eval_mode_coverage(samples: &Samples, dataset: &ToyContinuousDist, threshold_std: f64) -> Result<usize> {
    let modes = dataset
        .modes()
        .ok_or_else(|| Error::NotApplicable("dataset has no discrete modes".into()))?;
    if samples.dim() != dataset.dim() {
        return Err(Error::DimensionMismatch {
            expected: dataset.dim(),
            got: samples.dim(),
        });
    }
    Ok(coverage(samples, &modes, threshold_std))
}

fn histogram(samples: &Samples, bbox: &[(f64, f64)]) -> Vec<f64> {
    let mut counts = vec![0.0; HISTOGRAM_BINS.pow(bbox.len() as u32)];
    for x in samples.rows() {
        let mut idx = 0;
        for (&xi, &(lo, hi)) in x.iter().zip(bbox) {
            let b = ((xi - lo) / (hi - lo) * HISTOGRAM_BINS as f64).floor();
            idx = idx * HISTOGRAM_BINS + (b.max(0.0) as usize).min(HISTOGRAM_BINS - 1);
        }
        counts[idx] += 1.0;
    }
    counts
}

/// Arimoto divergence between 64-bins-per-dimension histograms of the two
/// sample sets over the dataset's bounding box. Out-of-range samples land in
/// the edge bins.
pub fn histogram_divergence(
    alpha: AlphaParam,
    real: &Samples,
    fake: &Samples,
    dataset: &ToyContinuousDist,
) -> Result<f64> {
    if real.is_empty() || fake.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let bbox = dataset.bounding_box();
    let p = DiscreteDistribution::new(&histogram(real, &bbox))?;
    let q = DiscreteDistribution::new(&histogram(fake, &bbox))?;
    Ok(arimoto_divergence(alpha, &p, &q)?.value)
}

/// Mutable state of one training run.
#[derive(Debug, Clone)]
pub struct Trainer {
    config: TrainConfig,
    gen: MlpModel,
    disc: MlpModel,
    vel_gen: Vec<f64>,
    vel_disc: Vec<f64>,
    data_rng: Rng,
    latent_rng: Rng,
    eval_rng: Rng,
    latent: StandardNormal,
}

impl Trainer {
    pub fn new(config: TrainConfig) -> Result<Self> {
        config.validate()?;
        let mut init = Rng::with_stream(config.seed, INIT_STREAM);
        let gen = MlpModel::init(&config.gen_dims(), OutputMap::Identity, &mut init)?;
        let disc = MlpModel::init(&config.disc_dims(), OutputMap::Sigmoid, &mut init)?;
        Ok(Self {
            vel_gen: vec![0.0; gen.num_params()],
            vel_disc: vec![0.0; disc.num_params()],
            data_rng: Rng::with_stream(config.seed, DATA_STREAM),
            latent_rng: Rng::with_stream(config.seed, LATENT_STREAM),
            eval_rng: Rng::with_stream(config.seed, EVAL_STREAM),
            latent: StandardNormal {
                dim: config.latent_dim,
            },
            gen,
            disc,
            config,
        })
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn generator(&self) -> &MlpModel {
        &self.gen
    }

    pub fn discriminator(&self) -> &MlpModel {
        &self.disc
    }

    /// Replaces the generator (warm start); momentum is reset.
    pub fn set_generator(&mut self, gen: MlpModel) -> Result<()> {
        if gen.layer_dims() != self.config.gen_dims() {
            return Err(Error::InvalidArgument("generator shape differs from config".into()));
        }
        self.vel_gen = vec![0.0; gen.num_params()];
        self.gen = gen;
        Ok(())
    }

    fn batches(&mut self) -> Result<(Samples, Samples)> {
        let n = self.config.batch_size;
        Ok((
            sample(&self.config.dataset, n, &mut self.data_rng)?,
            sample(&self.latent, n, &mut self.latent_rng)?,
        ))
    }

    fn momentum_step(model: &mut MlpModel, vel: &mut [f64], grad: &[f64], momentum: f64, lr: f64) -> Result<()> {
        for (v, g) in vel.iter_mut().zip(grad) {
            *v = momentum * *v + g;
        }
        model.add_scaled(vel, lr)
    }

    /// One ascent step of the discriminator; returns the batch value before the step.
    pub fn disc_step(&mut self) -> Result<f64> {
        let (real, latent) = self.batches()?;
        let g = grads_value_alpha(self.config.alpha, &real, &latent, &self.gen, &self.disc)?;
        let (m, lr) = (self.config.momentum, self.config.lr_disc);
        Self::momentum_step(&mut self.disc, &mut self.vel_disc, &g.disc, m, lr)?;
        Ok(g.value)
    }

    /// One descent step of the generator; returns the batch value before the step.
    pub fn gen_step(&mut self) -> Result<f64> {
        let (real, latent) = self.batches()?;
        let g = grads_value_alpha(self.config.alpha, &real, &latent, &self.gen, &self.disc)?;
        let (m, lr) = (self.config.momentum, self.config.lr_gen);
        Self::momentum_step(&mut self.gen, &mut self.vel_gen, &g.gen, m, -lr)?;
        Ok(g.value)
    }

    /// `n` generator samples from fresh evaluation noise.
    pub fn generate(&mut self, n: usize) -> Result<Samples> {
        let z = sample(&self.latent, n, &mut self.eval_rng)?;
        let mut data = Vec::with_capacity(n * self.gen.output_dim());
        for row in z.rows() {
            data.extend(self.gen.forward(row)?);
        }
        Samples::new(self.gen.output_dim(), data)
    }

    /// `V̂_α` of the current pair on fresh evaluation batches of size `n`.
    pub fn evaluation_value(&mut self, n: usize) -> Result<f64> {
        let real = sample(&self.config.dataset, n, &mut self.eval_rng)?;
        let z = sample(&self.latent, n, &mut self.eval_rng)?;
        batch_value(self.config.alpha, &real, &z, &self.gen, &self.disc)
    }

    pub fn evaluate(&mut self, step: usize) -> Result<EvalRecord> {
        let n = self.config.eval_samples;
        let value_estimate = self.evaluation_value(n)?;
        let real = sample(&self.config.dataset, n, &mut self.eval_rng)?;
        let fake = self.generate(n)?;
        let divergence_estimate = histogram_divergence(self.config.alpha, &real, &fake, &self.config.dataset)?;
        let modes = match &self.config.dataset {
            ToyContinuousDist::Gaussian1d { mean, std } => vec![Mode {
                center: vec![*mean],
                std: *std,
            }],
            d => d.modes().unwrap_or_default(),
        };
        let record = EvalRecord {
            step,
            value_estimate,
            divergence_estimate,
            modes_covered: coverage(&fake, &modes, self.config.mode_threshold_std),
            sample_mean: fake.mean(),
            sample_std: fake.std(),
        };
        let finite = [record.value_estimate, record.divergence_estimate]
            .iter()
            .chain(&record.sample_mean)
            .chain(&record.sample_std)
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Diverged {
                step,
                reason: "non-finite evaluation".into(),
            });
        }
        Ok(record)
    }
}

fn diverged(step: usize, e: Error) -> Error {
    match e {
        Error::NonFinite(what) => Error::Diverged { step, reason: what },
        other => other,
    }
}

/// Alternating optimization: `disc_steps` ascent steps, then one generator
/// descent step, evaluated every `eval_every` generator steps and at the end.
pub fn train(config: &TrainConfig) -> Result<TrainReport> {
    let started = Instant::now();
    let mut trainer = Trainer::new(config.clone())?;
    let mut records = Vec::new();
    let total = config.total_gen_steps;
    for step in 1..=total {
        for _ in 0..config.disc_steps {
            trainer.disc_step().map_err(|e| diverged(step, e))?;
        }
        trainer.gen_step().map_err(|e| diverged(step, e))?;
        if step % config.eval_every == 0 || step == total {
            records.push(trainer.evaluate(step).map_err(|e| diverged(step, e))?);
        }
    }
    Ok(TrainReport {
        config: config.clone(),
        seed: config.seed,
        records,
        wall_clock: started.elapsed(),
    })
}
