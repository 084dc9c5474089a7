//! Randomized numeric checks of the library's identities and bounds.
//!
//! Trial `i` draws from `Rng::with_stream(seed, i)`, so verdicts do not depend
//! on how rayon schedules the trials.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use alphagan::arimoto::{arimoto_divergence, f_alpha, jsd, metric_power, sq_hellinger, tv};
use alphagan::convergence::sandwich_violation;
use alphagan::equilibrium::{brute_force_discriminator, generator_objective, optimal_discriminator};
use alphagan::value::value_alpha_exact;
use alphagan::variational::{perspective_symmetry_check, reconstruct_f};
use alphagan::{AlphaParam, DiscreteDistribution, Rng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Equilibrium,
    Variational,
    Bounds,
    Limits,
    Metric,
    Lin,
}

impl CheckName {
    pub const ALL: [CheckName; 6] = [
        Self::Equilibrium,
        Self::Variational,
        Self::Bounds,
        Self::Limits,
        Self::Metric,
        Self::Lin,
    ];

    fn as_str(self) -> &'static str {
        match self {
            Self::Equilibrium => "equilibrium",
            Self::Variational => "variational",
            Self::Bounds => "bounds",
            Self::Limits => "limits",
            Self::Metric => "metric",
            Self::Lin => "lin",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::UnknownCheck(s.to_string()))
    }
}

/// One measured quantity with its own tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubCheck {
    pub name: &'static str,
    pub worst_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SubCheck {
    fn new(name: &'static str, worst_error: f64, tolerance: f64) -> Self {
        Self {
            name,
            worst_error,
            tolerance,
            pass: worst_error <= tolerance,
        }
    }
}

/// `worst_error` and `tolerance` describe the first entry of `details`;
/// `pass` requires every entry to pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckVerdict {
    pub check: CheckName,
    pub trials: usize,
    pub seed: u64,
    pub worst_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub details: Vec<SubCheck>,
}

impl CheckVerdict {
    fn from_parts(check: CheckName, trials: usize, seed: u64, details: Vec<SubCheck>) -> Self {
        Self {
            check,
            trials,
            seed,
            worst_error: details[0].worst_error,
            tolerance: details[0].tolerance,
            pass: details.iter().all(|d| d.pass),
            details,
        }
    }
}

pub const EQUILIBRIUM_ALPHAS: [f64; 7] = [0.3, 0.5, 1.0, 2.0, 7.0, 1e3, f64::INFINITY];
pub const VARIATIONAL_ALPHAS: [f64; 6] = [0.3, 0.5, 0.99, 1.01, 2.0, 10.0];
pub const BOUNDS_ALPHAS: [f64; 7] = [0.2, 0.5, 1.0, 2.0, 5.0, 100.0, f64::INFINITY];
pub const METRIC_ALPHAS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, f64::INFINITY];

/// Grid size used by the brute-force discriminator (before refinement).
pub const BRUTE_FORCE_GRID: usize = 1000;

fn alpha_of(list: &[f64], trial: usize) -> AlphaParam {
    AlphaParam::new(list[trial % list.len()]).expect("constant orders are valid")
}

/// Flat-Dirichlet distribution on `k` atoms; a quarter of the draws get one
/// atom zeroed so zero-mass handling is exercised too.
pub fn random_distribution(k: usize, rng: &mut Rng) -> DiscreteDistribution {
    let d = DiscreteDistribution::random(k, rng);
    if rng.index(4) == 0 {
        let mut w = d.probs().to_vec();
        w[rng.index(k)] = 0.0;
        if let Ok(z) = DiscreteDistribution::new(&w) {
            return z;
        }
    }
    d
}

/// Random support size in `2..=max_support`.
pub fn random_support(max_support: usize, rng: &mut Rng) -> usize {
    2 + rng.index(max_support - 1)
}

fn max_over<F>(trials: usize, seed: u64, width: usize, f: F) -> CliResult<Vec<f64>>
where
    F: Fn(usize, &mut Rng) -> alphagan::Result<Vec<f64>> + Sync,
{
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|i| f(i, &mut Rng::with_stream(seed, i as u64)))
        .collect::<alphagan::Result<Vec<_>>>()?;
    Ok(per_trial.into_iter().fold(vec![0.0; width], |acc, e| {
        acc.iter().zip(&e).map(|(a, b)| a.max(*b)).collect()
    }))
}

fn equilibrium(trials: usize, seed: u64) -> CliResult<Vec<SubCheck>> {
    let w = max_over(trials, seed, 2, |i, rng| {
        let alpha = alpha_of(&EQUILIBRIUM_ALPHAS, i);
        let k = random_support(16, rng);
        let (pr, pg) = (random_distribution(k, rng), random_distribution(k, rng));
        let opt = optimal_discriminator(alpha, &pr, &pg)?;
        let brute = brute_force_discriminator(alpha, &pr, &pg, BRUTE_FORCE_GRID)?;
        let oracle = opt
            .values()
            .unwrap()
            .iter()
            .zip(brute.values().unwrap())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let identity = (value_alpha_exact(alpha, &pr, &pg, &opt)? - generator_objective(alpha, &pr, &pg)?).abs();
        Ok(vec![oracle, identity])
    })?;
    Ok(vec![
        SubCheck::new("brute_force_agreement", w[0], 1e-4),
        SubCheck::new("equilibrium_identity", w[1], 1e-10),
    ])
}

fn variational(trials: usize, seed: u64) -> CliResult<Vec<SubCheck>> {
    let w = max_over(trials, seed, 2, |i, rng| {
        let alpha = alpha_of(&VARIATIONAL_ALPHAS, i);
        let u = 10f64.powf(rng.uniform_range(-3.0, 3.0));
        let recon = (reconstruct_f(alpha, u)? - f_alpha(alpha, u)?).abs();
        Ok(vec![recon, perspective_symmetry_check(alpha, &[u])?.worst])
    })?;
    Ok(vec![
        SubCheck::new("reconstruction", w[0], 1e-7),
        SubCheck::new("perspective_symmetry", w[1], 1e-9),
    ])
}

fn random_pair(rng: &mut Rng) -> (DiscreteDistribution, DiscreteDistribution) {
    let k = random_support(16, rng);
    (random_distribution(k, rng), random_distribution(k, rng))
}

fn bounds(trials: usize, seed: u64) -> CliResult<Vec<SubCheck>> {
    let w = max_over(trials, seed, 1, |i, rng| {
        let alpha = alpha_of(&BOUNDS_ALPHAS, i);
        let (p, q) = random_pair(rng);
        let d = arimoto_divergence(alpha, &p, &q)?.value;
        Ok(vec![sandwich_violation(alpha, tv(&p, &q)?, d)?])
    })?;
    Ok(vec![SubCheck::new("sandwich", w[0], 1e-12)])
}

fn limits(trials: usize, seed: u64) -> CliResult<Vec<SubCheck>> {
    let w = max_over(trials, seed, 3, |_, rng| {
        let (p, q) = random_pair(rng);
        let d = |a: f64| arimoto_divergence(AlphaParam::new(a)?, &p, &q).map(|v| v.value);
        let hellinger = (d(0.5)? - 2.0 * sq_hellinger(&p, &q)?).abs();
        let j = 2.0 * jsd(&p, &q)?;
        let js = (d(1.0 - 1e-5)? - j).abs().max((d(1.0 + 1e-5)? - j).abs());
        let total = (d(1e4)? - tv(&p, &q)?).abs();
        Ok(vec![hellinger, js, total])
    })?;
    Ok(vec![
        SubCheck::new("hellinger_at_one_half", w[0], 1e-12),
        SubCheck::new("jensen_shannon_near_one", w[1], 1e-4),
        SubCheck::new("total_variation_at_1e4", w[2], 1e-3),
    ])
}

fn metric(trials: usize, seed: u64) -> CliResult<Vec<SubCheck>> {
    let w = max_over(trials, seed, 1, |i, rng| {
        let alpha = alpha_of(&METRIC_ALPHAS, i);
        let k = random_support(16, rng);
        let (p, q, r) = (
            random_distribution(k, rng),
            random_distribution(k, rng),
            random_distribution(k, rng),
        );
        let slack = metric_power(alpha, &p, &q)? + metric_power(alpha, &q, &r)? - metric_power(alpha, &p, &r)?;
        Ok(vec![(-slack).max(0.0)])
    })?;
    Ok(vec![SubCheck::new("triangle_violation", w[0], 1e-12)])
}

fn lin(trials: usize, seed: u64) -> CliResult<Vec<SubCheck>> {
    let w = max_over(trials, seed, 1, |_, rng| {
        let (p, q) = random_pair(rng);
        Ok(vec![(jsd(&p, &q)? - LN_2 * tv(&p, &q)?).max(0.0)])
    })?;
    Ok(vec![SubCheck::new("jsd_minus_ln2_tv", w[0], 1e-12)])
}

pub fn run_check(check: CheckName, trials: usize, seed: u64) -> CliResult<CheckVerdict> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let details = match check {
        CheckName::Equilibrium => equilibrium(trials, seed)?,
        CheckName::Variational => variational(trials, seed)?,
        CheckName::Bounds => bounds(trials, seed)?,
        CheckName::Limits => limits(trials, seed)?,
        CheckName::Metric => metric(trials, seed)?,
        CheckName::Lin => lin(trials, seed)?,
    };
    Ok(CheckVerdict::from_parts(check, trials, seed, details))
}
