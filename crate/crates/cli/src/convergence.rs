//! Convergence experiments: divergence traces and pairwise verdicts.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use alphagan::convergence::{divergence_trace, tail_converged, verdict_from_columns, DistSequence, Trace, Verdict};
use alphagan::{AlphaParam, DiscreteDistribution};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::with_output;

pub const CONVERGENCE_HEADER: &str = "n,alpha,divergence";

/// Built-in sequences, each paired with its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    /// `Ber(1/2 + 1/(2n))` towards `Ber(1/2)`.
    Drift,
    /// `Ber(0.9)` held fixed, measured against `Ber(1/2)`.
    Constant,
    /// `(1 - 1/n)·[0.1, 0.6, 0.3] + (1/n)·uniform` towards `[0.1, 0.6, 0.3]`.
    Mixture,
}

impl FromStr for SequenceKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "drift" => Ok(Self::Drift),
            "constant" => Ok(Self::Constant),
            "mixture" => Ok(Self::Mixture),
            other => Err(CliError::Usage(format!(
                "unknown sequence {other:?} (expected drift, constant or mixture)"
            ))),
        }
    }
}

impl SequenceKind {
    pub fn build(self, n_max: usize) -> CliResult<(DistSequence, DiscreteDistribution)> {
        let half = DiscreteDistribution::bernoulli(0.5)?;
        Ok(match self {
            Self::Drift => (DistSequence::bernoulli_drift(0.5, 0.5, n_max)?, half),
            Self::Constant => (
                DistSequence::constant(DiscreteDistribution::bernoulli(0.9)?, n_max)?,
                half,
            ),
            Self::Mixture => {
                let base = DiscreteDistribution::new(&[0.1, 0.6, 0.3])?;
                let noise = DiscreteDistribution::uniform(3)?;
                (DistSequence::shrinking_mixture(base.clone(), noise, n_max)?, base)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub alpha1: AlphaParam,
    pub alpha2: AlphaParam,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderStatus {
    pub alpha: AlphaParam,
    /// Whether the trace's last 10% stays below `tol`.
    pub converged: bool,
    pub final_divergence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSummary {
    pub sequence: SequenceKind,
    pub n_max: usize,
    pub tol: f64,
    pub orders: Vec<OrderStatus>,
    pub verdicts: Vec<PairVerdict>,
    /// True when no pair is a violation.
    pub all_agree: bool,
    pub worst_sandwich_violation: f64,
}

pub fn run_convergence(
    kind: SequenceKind,
    n_max: usize,
    alphas: &[AlphaParam],
    tol: f64,
) -> CliResult<(Trace, ConvergenceSummary)> {
    if alphas.is_empty() {
        return Err(CliError::Usage("--alphas needs at least one order".into()));
    }
    if n_max < 10 {
        return Err(CliError::Usage("--n-max must be at least 10".into()));
    }
    if !(tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let (seq, target) = kind.build(n_max)?;
    let trace = divergence_trace(&seq, &target, alphas)?;
    let columns: Vec<Vec<f64>> = (0..alphas.len()).map(|j| trace.column(j)).collect();
    let mut verdicts = Vec::new();
    for i in 0..alphas.len() {
        for j in i + 1..alphas.len() {
            verdicts.push(PairVerdict {
                alpha1: alphas[i],
                alpha2: alphas[j],
                verdict: verdict_from_columns(&columns[i], &columns[j], tol),
            });
        }
    }
    let summary = ConvergenceSummary {
        sequence: kind,
        n_max,
        tol,
        orders: alphas
            .iter()
            .zip(&columns)
            .map(|(&alpha, c)| OrderStatus {
                alpha,
                converged: tail_converged(c, tol),
                final_divergence: c[c.len() - 1],
            })
            .collect(),
        all_agree: verdicts.iter().all(|v| v.verdict != Verdict::Violation),
        verdicts,
        worst_sandwich_violation: trace.worst_sandwich_violation()?,
    };
    Ok((trace, summary))
}

pub fn write_trace_csv(w: &mut dyn Write, trace: &Trace) -> std::io::Result<()> {
    writeln!(w, "{CONVERGENCE_HEADER}")?;
    for (n, row) in trace.values.iter().enumerate() {
        for (alpha, d) in trace.alphas.iter().zip(row) {
            writeln!(w, "{},{alpha},{d}", n + 1)?;
        }
    }
    Ok(())
}

/// Writes the trace CSV to `out` (stdout if absent) and returns the summary.
pub fn cmd_convergence(
    kind: SequenceKind,
    n_max: usize,
    alphas: &[AlphaParam],
    tol: f64,
    out: Option<&Path>,
) -> CliResult<ConvergenceSummary> {
    let (trace, summary) = run_convergence(kind, n_max, alphas, tol)?;
    with_output(out, |w| write_trace_csv(w, &trace))?;
    Ok(summary)
}
