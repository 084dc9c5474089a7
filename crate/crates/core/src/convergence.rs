//! Finite-horizon experiments on convergence in Arimoto divergence.
//!
//! All Arimoto divergences are squeezed between functions of total variation,
//! `ψ_α(TV) ≤ D_{f_α} ≤ ψ_α(1)·TV`, so a sequence converges in one of them iff
//! it converges in all. The lab generates sequences, records divergence traces
//! and turns tails into verdicts that can be compared across orders.

use serde::Serialize;
use std::f64::consts::LN_2;

use crate::arimoto::{arimoto_divergence, jsd, psi_alpha, psi_alpha_at_one, tv};
use crate::loss::AlphaParam;
use crate::prob::DiscreteDistribution;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceKind {
    /// `Ber(θ_n)` with `θ_n = target + amplitude / n`, clipped to `[0, 1]`.
    BernoulliDrift { target_theta: f64, amplitude: f64 },
    /// `(1 - 1/n)·base + (1/n)·noise`.
    ShrinkingMixture {
        base: DiscreteDistribution,
        noise: DiscreteDistribution,
    },
    Custom(Vec<DiscreteDistribution>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistSequence {
    kind: SequenceKind,
    length: usize,
}

impl DistSequence {
    pub fn bernoulli_drift(target_theta: f64, amplitude: f64, length: usize) -> Result<Self> {
        DiscreteDistribution::bernoulli(target_theta)?;
        Self::build(
            SequenceKind::BernoulliDrift {
                target_theta,
                amplitude,
            },
            length,
        )
    }

    pub fn shrinking_mixture(
        base: DiscreteDistribution,
        noise: DiscreteDistribution,
        length: usize,
    ) -> Result<Self> {
        base.check_support(&noise)?;
        Self::build(SequenceKind::ShrinkingMixture { base, noise }, length)
    }

    pub fn custom(elements: Vec<DiscreteDistribution>) -> Result<Self> {
        if let Some(first) = elements.first() {
            for e in &elements {
                first.check_support(e)?;
            }
        }
        let length = elements.len();
        Self::build(SequenceKind::Custom(elements), length)
    }

    /// `length` copies of one distribution.
    pub fn constant(dist: DiscreteDistribution, length: usize) -> Result<Self> {
        Self::custom(vec![dist; length])
    }

    fn build(kind: SequenceKind, length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidArgument("empty sequence".into()));
        }
        Ok(Self { kind, length })
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Element `n` for `n = 1..=len`.
    pub fn element(&self, n: usize) -> Result<DiscreteDistribution> {
        if n == 0 || n > self.length {
            return Err(Error::InvalidArgument(format!("index {n} outside 1..={}", self.length)));
        }
        match &self.kind {
            SequenceKind::BernoulliDrift {
                target_theta,
                amplitude,
            } => DiscreteDistribution::bernoulli((target_theta + amplitude / n as f64).clamp(0.0, 1.0)),
            SequenceKind::ShrinkingMixture { base, noise } => base.mix(noise, 1.0 / n as f64),
            SequenceKind::Custom(v) => Ok(v[n - 1].clone()),
        }
    }

    /// The limit the sequence is built around, when it has one.
    pub fn limit(&self) -> Option<DiscreteDistribution> {
        match &self.kind {
            SequenceKind::BernoulliDrift { target_theta, .. } => {
                DiscreteDistribution::bernoulli(*target_theta).ok()
            }
            SequenceKind::ShrinkingMixture { base, .. } => Some(base.clone()),
            SequenceKind::Custom(_) => None,
        }
    }
}

/// Divergence of every sequence element to a fixed target, one column per order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub alphas: Vec<AlphaParam>,
    /// `TV(P_n, target)` for each row.
    pub tv: Vec<f64>,
    /// `values[n-1][j] = D_{f_{α_j}}(P_n ‖ target)`.
    pub values: Vec<Vec<f64>>,
}

impl Trace {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[j]).collect()
    }

    /// Largest violation of `ψ_α(TV) ≤ D ≤ ψ_α(1)·TV` over the trace.
    pub fn worst_sandwich_violation(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (row, &t) in self.values.iter().zip(&self.tv) {
            for (&alpha, &d) in self.alphas.iter().zip(row) {
                worst = worst.max(sandwich_violation(alpha, t, d)?);
            }
        }
        Ok(worst)
    }
}

pub fn divergence_trace(
    seq: &DistSequence,
    target: &DiscreteDistribution,
    alphas: &[AlphaParam],
) -> Result<Trace> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("no orders given".into()));
    }
    let mut tvs = Vec::with_capacity(seq.len());
    let mut values = Vec::with_capacity(seq.len());
    for n in 1..=seq.len() {
        let p = seq.element(n)?;
        tvs.push(tv(&p, target)?);
        values.push(
            alphas
                .iter()
                .map(|&a| arimoto_divergence(a, &p, target).map(|d| d.value))
                .collect::<Result<Vec<f64>>>()?,
        );
    }
    Ok(Trace {
        alphas: alphas.to_vec(),
        tv: tvs,
        values,
    })
}

/// How far `d` falls outside `[ψ_α(tv), ψ_α(1)·tv]`; 0 when inside.
pub fn sandwich_violation(alpha: AlphaParam, tv: f64, d: f64) -> Result<f64> {
    let lower = psi_alpha(alpha, tv.clamp(0.0, 1.0))?;
    let upper = psi_alpha_at_one(alpha) * tv;
    Ok((lower - d).max(d - upper).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    BothConverge,
    NeitherConverges,
    /// One order converged and the other did not.
    Violation,
}

/// A trace "converges" when the maximum over its last 10% is below `tol`.
pub fn tail_converged(column: &[f64], tol: f64) -> bool {
    let tail = (column.len() / 10).max(1);
    column[column.len().saturating_sub(tail)..]
        .iter()
        .all(|&v| v < tol)
}

pub fn verdict_from_columns(a: &[f64], b: &[f64], tol: f64) -> Verdict {
    match (tail_converged(a, tol), tail_converged(b, tol)) {
        (true, true) => Verdict::BothConverge,
        (false, false) => Verdict::NeitherConverges,
        _ => Verdict::Violation,
    }
}

pub fn equivalence_check(
    seq: &DistSequence,
    target: &DiscreteDistribution,
    alpha1: AlphaParam,
    alpha2: AlphaParam,
    tol: f64,
) -> Result<Verdict> {
    if !(tol > 0.0) {
        return Err(Error::OutOfRange {
            what: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let trace = divergence_trace(seq, target, &[alpha1, alpha2])?;
    Ok(verdict_from_columns(&trace.column(0), &trace.column(1), tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinBoundReport {
    pub holds: bool,
    /// Largest `jsd - ln 2 · tv` over the pairs.
    pub worst: f64,
}

/// Checks `JSD(p, q) ≤ ln 2 · TV(p, q)` (up to `1e-12`) on every pair.
pub fn lin_bound_check(pairs: &[(DiscreteDistribution, DiscreteDistribution)]) -> Result<LinBoundReport> {
    let mut worst = f64::NEG_INFINITY;
    for (p, q) in pairs {
        worst = worst.max(jsd(p, q)? - LN_2 * tv(p, q)?);
    }
    Ok(LinBoundReport {
        holds: worst <= 1e-12,
        worst,
    })
}
