//! Nash equilibrium of the α-GAN game on finite supports.
//!
//! For fixed masses `a = p_r(x)`, `b = p_g(x)` the discriminator's pointwise
//! objective is `g(y) = α/(α-1) · (a y^{(α-1)/α} + b (1-y)^{(α-1)/α})`, which is
//! concave on `[0, 1]` and maximized at the tilted ratio `a^α / (a^α + b^α)`.
//! [`brute_force_discriminator`] maximizes `g` numerically and serves as the
//! independent check on [`optimal_discriminator`].

use crate::arimoto::{arimoto_divergence, equilibrium_constant};
use crate::loss::{AlphaParam, Branch};
use crate::prob::DiscreteDistribution;
use crate::search::golden_section_max;
use crate::value::DiscriminatorFn;
use crate::{Error, Result};

/// Tilted ratio for one atom; atoms with no mass on either side get 1/2.
fn tilted(alpha: AlphaParam, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.5;
    }
    if a == 0.0 {
        return 0.0;
    }
    if b == 0.0 {
        return 1.0;
    }
    match alpha.branch() {
        Branch::Infinity => {
            if a > b {
                1.0
            } else {
                0.0
            }
        }
        Branch::One => a / (a + b),
        Branch::Generic(al) => 1.0 / (1.0 + (al * (b.ln() - a.ln())).exp()),
    }
}

/// `D*(x) = p_r(x)^α / (p_r(x)^α + p_g(x)^α)`; the maximum-likelihood rule
/// `1{p_r > p_g} + ½·1{p_r = p_g}` at `α = ∞`.
pub fn optimal_discriminator(
    alpha: AlphaParam,
    p_r: &DiscreteDistribution,
    p_g: &DiscreteDistribution,
) -> Result<DiscriminatorFn> {
    p_r.check_support(p_g)?;
    DiscriminatorFn::tabular(
        p_r.probs()
            .iter()
            .zip(p_g.probs())
            .map(|(&a, &b)| tilted(alpha, a, b))
            .collect(),
    )
}

/// Pointwise discriminator objective `g(y)`; zero masses contribute nothing.
pub fn pointwise_objective(alpha: AlphaParam, a: f64, b: f64, y: f64) -> f64 {
    let term = |mass: f64, v: f64, f: &dyn Fn(f64) -> f64| if mass == 0.0 { 0.0 } else { mass * f(v) };
    match alpha.branch() {
        Branch::One => term(a, y, &f64::ln) + term(b, 1.0 - y, &f64::ln),
        Branch::Infinity => term(a, y, &|v| v) + term(b, 1.0 - y, &|v| v),
        Branch::Generic(al) => {
            let e = (al - 1.0) / al;
            al / (al - 1.0) * (term(a, y, &|v| v.powf(e)) + term(b, 1.0 - y, &|v| v.powf(e)))
        }
    }
}

fn brute_force_atom(alpha: AlphaParam, a: f64, b: f64, grid: usize) -> f64 {
    let g = |y: f64| pointwise_objective(alpha, a, b, y);
    let ys: Vec<f64> = (0..=grid).map(|i| i as f64 / grid as f64).collect();
    let vals: Vec<f64> = ys.iter().map(|&y| g(y)).collect();
    let best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-14 * best.abs().max(f64::MIN_POSITIVE);
    let ties: Vec<usize> = (0..=grid).filter(|&i| vals[i] >= best - slack).collect();
    // a flat objective (no preference) resolves to the maximizer nearest 1/2
    if ties.len() > 1 {
        return ties
            .iter()
            .map(|&i| ys[i])
            .min_by(|x, y| (x - 0.5).abs().total_cmp(&(y - 0.5).abs()))
            .unwrap_or(0.5);
    }
    let i = ties[0];
    let lo = ys[i.saturating_sub(1)];
    let hi = ys[(i + 1).min(grid)];
    let refined = golden_section_max(g, lo, hi, 1e-10);
    if refined.value >= vals[i] {
        refined.x
    } else {
        ys[i]
    }
}

/// Per-atom grid argmax of `g(y)` over `grid + 1` points, refined by
/// golden-section search to `1e-10`.
pub fn brute_force_discriminator(
    alpha: AlphaParam,
    p_r: &DiscreteDistribution,
    p_g: &DiscreteDistribution,
    grid: usize,
) -> Result<DiscriminatorFn> {
    p_r.check_support(p_g)?;
    if grid < 1000 {
        return Err(Error::InvalidArgument(format!("grid {grid} < 1000")));
    }
    DiscriminatorFn::tabular(
        p_r.probs()
            .iter()
            .zip(p_g.probs())
            .map(|(&a, &b)| brute_force_atom(alpha, a, b, grid))
            .collect(),
    )
}

/// Generator objective `C(G) = D_{f_α}(p_r‖p_g) + α/(α-1)(2^{1/α} - 2)`, the
/// value of the game once the discriminator plays optimally.
pub fn generator_objective(
    alpha: AlphaParam,
    p_r: &DiscreteDistribution,
    p_g: &DiscreteDistribution,
) -> Result<f64> {
    Ok(arimoto_divergence(alpha, p_r, p_g)?.value + equilibrium_constant(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use crate::value::value_alpha_exact;

    fn a(x: f64) -> AlphaParam {
        AlphaParam::new(x).unwrap()
    }

    fn atom(alpha: AlphaParam, pr: f64, pg: f64) -> (f64, f64) {
        let p = DiscreteDistribution::new(&[pr, 1.0 - pr]).unwrap();
        let q = DiscreteDistribution::new(&[pg, 1.0 - pg]).unwrap();
        let closed = optimal_discriminator(alpha, &p, &q).unwrap().at_atom(0).unwrap();
        let brute = brute_force_discriminator(alpha, &p, &q, 1000).unwrap().at_atom(0).unwrap();
        (closed, brute)
    }

    #[test]
    fn equal_masses_give_half() {
        let p = DiscreteDistribution::new(&[0.1, 0.0, 0.9]).unwrap();
        for alpha in [a(0.3), AlphaParam::ONE, a(4.0), AlphaParam::Infinity] {
            let d = optimal_discriminator(alpha, &p, &p).unwrap();
            assert!(d.values().unwrap().iter().all(|&v| v == 0.5));
            let b = brute_force_discriminator(alpha, &p, &p, 1000).unwrap();
            assert!(b.values().unwrap().iter().all(|&v| (v - 0.5).abs() < 1e-6));
        }
    }

    #[test]
    fn tilted_examples() {
        let (closed, brute) = atom(a(2.0), 0.3, 0.7);
        assert!((closed - 0.09 / 0.58).abs() < 1e-15);
        assert!((brute - closed).abs() < 1e-6);
        let (closed, brute) = atom(AlphaParam::ONE, 0.8, 0.2);
        assert!((closed - 0.8).abs() < 1e-15);
        assert!((brute - 0.8).abs() < 1e-6);
        let (closed, brute) = atom(AlphaParam::Infinity, 0.6, 0.2);
        assert_eq!(closed, 1.0);
        assert!((brute - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_mass_atoms() {
        let p = DiscreteDistribution::new(&[0.0, 0.5, 0.5, 0.0]).unwrap();
        let q = DiscreteDistribution::new(&[0.5, 0.0, 0.5, 0.0]).unwrap();
        for alpha in [a(0.5), AlphaParam::ONE, a(3.0), AlphaParam::Infinity] {
            let d = optimal_discriminator(alpha, &p, &q).unwrap();
            assert_eq!(d.values().unwrap(), &[0.0, 1.0, 0.5, 0.5]);
            let b = brute_force_discriminator(alpha, &p, &q, 1000).unwrap();
            for (x, y) in b.values().unwrap().iter().zip(d.values().unwrap()) {
                assert!((x - y).abs() < 1e-6, "α = {alpha}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn grid_too_coarse() {
        let p = DiscreteDistribution::uniform(2).unwrap();
        assert!(brute_force_discriminator(AlphaParam::ONE, &p, &p, 999).is_err());
    }

    #[test]
    fn generator_objective_examples() {
        let p = DiscreteDistribution::new(&[0.2, 0.8]).unwrap();
        let v = generator_objective(AlphaParam::ONE, &p, &p).unwrap();
        assert!((v + 4f64.ln()).abs() < 1e-15);
        for da in [1e-7, -1e-7] {
            assert!((generator_objective(a(1.0 + da), &p, &p).unwrap() + 4f64.ln()).abs() < 1e-6);
        }
        assert!((generator_objective(AlphaParam::Infinity, &p, &p).unwrap() + 1.0).abs() < 1e-15);
        let b5 = DiscreteDistribution::bernoulli(0.5).unwrap();
        let b0 = DiscreteDistribution::bernoulli(0.0).unwrap();
        let c = generator_objective(a(2.0), &b5, &b0).unwrap();
        let expected = 2.0 * (1.25f64.sqrt() + 0.5 - 2f64.sqrt()) + 2.0 * (2f64.sqrt() - 2.0);
        assert!((c - expected).abs() < 1e-15);
        let d = optimal_discriminator(a(2.0), &b5, &b0).unwrap();
        assert!((value_alpha_exact(a(2.0), &b5, &b0, &d).unwrap() - c).abs() < 1e-12);
    }

    #[test]
    fn caution_grows_with_alpha() {
        let mut rng = Rng::new(2);
        let alphas = [0.1, 0.5, 1.0, 2.0, 10.0, 100.0].map(a);
        for _ in 0..200 {
            let p = DiscreteDistribution::random(4, &mut rng);
            let q = DiscreteDistribution::random(4, &mut rng);
            let ds: Vec<Vec<f64>> = alphas
                .iter()
                .map(|&al| optimal_discriminator(al, &p, &q).unwrap().values().unwrap().to_vec())
                .collect();
            for j in 0..4 {
                for w in ds.windows(2) {
                    assert!((w[1][j] - 0.5).abs() >= (w[0][j] - 0.5).abs() - 1e-15);
                }
            }
        }
    }

    #[test]
    fn matching_the_data_is_the_global_minimum() {
        let mut rng = Rng::new(33);
        for alpha in [a(0.3), AlphaParam::ONE, a(2.0), AlphaParam::Infinity] {
            let pr = DiscreteDistribution::random(5, &mut rng);
            let best = generator_objective(alpha, &pr, &pr).unwrap();
            for _ in 0..500 {
                let pg = DiscreteDistribution::random(5, &mut rng);
                assert!(generator_objective(alpha, &pr, &pg).unwrap() >= best - 1e-10);
            }
        }
    }

    #[test]
    fn identity_holds_with_zero_mass_atoms_below_one() {
        let pr = DiscreteDistribution::new(&[0.0, 0.3, 0.7, 0.0]).unwrap();
        let pg = DiscreteDistribution::new(&[0.4, 0.0, 0.5, 0.1]).unwrap();
        for a in [0.3, 0.5, 0.9] {
            let alpha = AlphaParam::new(a).unwrap();
            let d = optimal_discriminator(alpha, &pr, &pg).unwrap();
            let v = value_alpha_exact(alpha, &pr, &pg, &d).unwrap();
            assert!((v - generator_objective(alpha, &pr, &pg).unwrap()).abs() <= 1e-10);
        }
    }
}
