use alphagan::arimoto::{arimoto_divergence, metric_power, psi_alpha, psi_alpha_at_one, tv};
use alphagan::equilibrium::optimal_discriminator;
use alphagan::loss::{loss_binary, loss_margin, loss_prob};
use alphagan::math::{log_sigmoid, sigmoid};
use alphagan::value::{value_alpha_exact, DiscriminatorFn};
use alphagan::variational::reconstruct_f;
use alphagan::{AlphaParam, Branch, DiscreteDistribution, Label};
use proptest::prelude::*;

fn alpha() -> impl Strategy<Value = AlphaParam> {
    prop_oneof![
        (0.05f64..50.0).prop_map(|a| AlphaParam::new(a).unwrap()),
        Just(AlphaParam::ONE),
        Just(AlphaParam::HALF),
        Just(AlphaParam::Infinity),
    ]
}

fn weights(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 6 => 0.0f64..1.0], k)
        .prop_filter("some mass", |w| w.iter().sum::<f64>() > 1e-3)
}

/// Two or three distributions on a common support of size 2..=8.
fn dists(count: usize) -> impl Strategy<Value = Vec<DiscreteDistribution>> {
    (2usize..=8).prop_flat_map(move |k| {
        prop::collection::vec(weights(k), count)
            .prop_map(|ws| ws.iter().map(|w| DiscreteDistribution::new(w).unwrap()).collect())
    })
}

proptest! {
    #[test]
    fn distributions_are_normalized(w in weights(12)) {
        let d = DiscreteDistribution::new(&w).unwrap();
        prop_assert!((d.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(d.support_size(), 12);
    }

    #[test]
    fn loss_label_symmetry(a in alpha(), y in 0.0f64..=1.0) {
        // 1 - (1 - y) == y holds exactly on [1/2, 1]; below that the flip itself rounds
        let y = if 1.0 - (1.0 - y) == y { y } else { 1.0 - y };
        prop_assert_eq!(
            loss_binary(a, Label::Real, y).unwrap(),
            loss_binary(a, Label::Fake, 1.0 - y).unwrap()
        );
    }

    #[test]
    fn margin_matches_probability_form(a in alpha(), t in -27.0f64..30.0) {
        let m = loss_margin(a, t);
        let p = loss_prob(a, sigmoid(t)).unwrap();
        // one rounding of σ(t) is amplified by the power p^e and by the α/(α-1) prefactor
        let e = a.exponent();
        let c = match a.branch() {
            Branch::Generic(x) => (x / (x - 1.0)).abs(),
            _ => 1.0,
        };
        let tol = 4.0 * f64::EPSILON * (1.0 + p.abs() + c) * (1.0 + (e * log_sigmoid(t)).abs());
        prop_assert!((m - p).abs() <= tol.max(1e-15), "{m} vs {p}");
    }

    #[test]
    fn margin_matches_probability_form_on_moderate_losses(t in -4.0f64..30.0, pick in 0usize..4) {
        let a = [AlphaParam::new(1.5).unwrap(), AlphaParam::new(2.0).unwrap(), AlphaParam::new(10.0).unwrap(), AlphaParam::Infinity][pick];
        prop_assert!((loss_margin(a, t) - loss_prob(a, sigmoid(t)).unwrap()).abs() <= 1e-15);
    }

    #[test]
    fn loss_is_midpoint_convex(a in alpha(), x in 0.001f64..1.0, y in 0.001f64..1.0) {
        let mid = loss_prob(a, 0.5 * (x + y)).unwrap();
        let avg = 0.5 * (loss_prob(a, x).unwrap() + loss_prob(a, y).unwrap());
        prop_assert!(mid <= avg + 1e-12);
    }

    #[test]
    fn loss_continuous_at_one_and_infinity(p in 0.02f64..1.0) {
        let at_one = loss_prob(AlphaParam::ONE, p).unwrap();
        for a in [1.0 - 1e-6, 1.0 + 1e-6] {
            prop_assert!((loss_prob(AlphaParam::new(a).unwrap(), p).unwrap() - at_one).abs() <= 1e-5);
        }
        let at_inf = loss_prob(AlphaParam::Infinity, p).unwrap();
        prop_assert!((loss_prob(AlphaParam::new(1e6).unwrap(), p).unwrap() - at_inf).abs() <= 1e-5);
    }

    #[test]
    fn loss_near_one_moves_at_the_first_order_rate(p in 0.001f64..0.02) {
        // ∂ℓ_α(p)/∂α at α = 1 is -(ln p)²/2, which exceeds 10 once p < e^{-√20}
        let at_one = loss_prob(AlphaParam::ONE, p).unwrap();
        let slope = p.ln().powi(2) / 2.0;
        for a in [1.0 - 1e-6, 1.0 + 1e-6] {
            let d = (loss_prob(AlphaParam::new(a).unwrap(), p).unwrap() - at_one).abs();
            prop_assert!(d <= 1e-6 * slope * 1.05 + 1e-9, "{d} vs {}", 1e-6 * slope);
        }
    }

    #[test]
    fn divergence_symmetric_nonnegative_and_sandwiched(a in alpha(), ds in dists(2)) {
        let (p, q) = (&ds[0], &ds[1]);
        let d = arimoto_divergence(a, p, q).unwrap().value;
        prop_assert_eq!(d, arimoto_divergence(a, q, p).unwrap().value);
        prop_assert!(d >= 0.0);
        prop_assert_eq!(arimoto_divergence(a, p, p).unwrap().value, 0.0);
        let t = tv(p, q).unwrap();
        prop_assert!(psi_alpha(a, t).unwrap() <= d + 1e-12);
        prop_assert!(d <= psi_alpha_at_one(a) * t + 1e-12);
    }

    #[test]
    fn metric_power_triangle(ds in dists(3), pick in 0usize..5) {
        let a = [0.25, 0.5, 1.0, 2.0, f64::INFINITY][pick];
        let a = AlphaParam::new(a).unwrap();
        let m = |i: usize, j: usize| metric_power(a, &ds[i], &ds[j]).unwrap();
        prop_assert!(m(0, 1) + m(1, 2) - m(0, 2) >= -1e-12);
    }

    #[test]
    fn optimal_discriminator_dominates(a in alpha(), ds in dists(2), raw in prop::collection::vec(0.0f64..=1.0, 8)) {
        let (pr, pg) = (&ds[0], &ds[1]);
        let best = value_alpha_exact(a, pr, pg, &optimal_discriminator(a, pr, pg).unwrap()).unwrap();
        let d = DiscriminatorFn::tabular(raw[..pr.support_size()].to_vec()).unwrap();
        prop_assert!(value_alpha_exact(a, pr, pg, &d).unwrap() <= best + 1e-12);
    }

    #[test]
    fn value_concave_in_each_coordinate(a in alpha(), ds in dists(2), x in 0.01f64..0.99, y in 0.01f64..0.99, i in 0usize..8) {
        let (pr, pg) = (&ds[0], &ds[1]);
        let i = i % pr.support_size();
        let v = |c: f64| {
            let mut t = vec![0.5; pr.support_size()];
            t[i] = c;
            value_alpha_exact(a, pr, pg, &DiscriminatorFn::tabular(t).unwrap()).unwrap()
        };
        prop_assert!(v(0.5 * (x + y)) >= 0.5 * (v(x) + v(y)) - 1e-12);
    }

    #[test]
    fn psi_strictly_increasing(a in alpha(), x in 0.0f64..0.99, dx in 0.001f64..0.01) {
        prop_assert!(psi_alpha(a, x).unwrap() < psi_alpha(a, x + dx).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reconstructed_generator_is_midpoint_convex(pick in 0usize..6, u in 0.01f64..100.0, v in 0.01f64..100.0) {
        let a = AlphaParam::new([0.3, 0.5, 0.99, 1.01, 2.0, 10.0][pick]).unwrap();
        let mid = reconstruct_f(a, 0.5 * (u + v)).unwrap();
        let avg = 0.5 * (reconstruct_f(a, u).unwrap() + reconstruct_f(a, v).unwrap());
        prop_assert!(mid <= avg + 1e-10);
    }
}
