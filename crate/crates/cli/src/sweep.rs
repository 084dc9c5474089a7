//! Divergence between `Ber(1/2)` and `Ber(θ)` on a θ grid, one column per order.

use std::io::Write;
use std::path::Path;

use alphagan::arimoto::arimoto_divergence;
use alphagan::{AlphaParam, DiscreteDistribution};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::output::with_output;

pub const SWEEP_HEADER: &str = "alpha,theta,divergence";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: AlphaParam,
    pub theta: f64,
    pub divergence: f64,
}

/// `θ_i = i / (steps - 1)` for `i = 0..steps`.
pub fn theta_grid(steps: usize) -> CliResult<Vec<f64>> {
    if steps < 2 {
        return Err(CliError::Usage("--theta-steps must be at least 2".into()));
    }
    Ok((0..steps).map(|i| i as f64 / (steps - 1) as f64).collect())
}

/// Rows ordered by α (as given) then θ.
pub fn sweep_divergence(alphas: &[AlphaParam], steps: usize) -> CliResult<Vec<SweepRow>> {
    if alphas.is_empty() {
        return Err(CliError::Usage("--alphas needs at least one order".into()));
    }
    let thetas = theta_grid(steps)?;
    let half = DiscreteDistribution::bernoulli(0.5)?;
    let rows = alphas
        .par_iter()
        .map(|&alpha| {
            thetas
                .iter()
                .map(|&theta| {
                    let q = DiscreteDistribution::bernoulli(theta)?;
                    Ok(SweepRow {
                        alpha,
                        theta,
                        divergence: arimoto_divergence(alpha, &half, &q)?.value,
                    })
                })
                .collect::<alphagan::Result<Vec<_>>>()
        })
        .collect::<alphagan::Result<Vec<Vec<_>>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_sweep_csv(w: &mut dyn Write, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.alpha, r.theta, r.divergence)?;
    }
    Ok(())
}

pub fn cmd_sweep_divergence(alphas: &[AlphaParam], steps: usize, out: Option<&Path>) -> CliResult<Vec<SweepRow>> {
    let rows = sweep_divergence(alphas, steps)?;
    with_output(out, |w| write_sweep_csv(w, &rows))?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_rows() {
        assert_eq!(theta_grid(3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(theta_grid(1).is_err());
        let rows = sweep_divergence(&[AlphaParam::ONE, AlphaParam::Infinity], 5).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!(rows[2].divergence, 0.0);
        assert_eq!(rows[5].alpha, AlphaParam::Infinity);
        assert!((rows[5].divergence - 0.5).abs() < 1e-15);
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows[5..7]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "alpha,theta,divergence\ninf,0,0.5\ninf,0.25,0.25\n");
    }
}
