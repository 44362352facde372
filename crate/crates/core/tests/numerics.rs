use contest_core::contest::rank_probability;
use contest_core::numerics::{beta, binomial, integrate, integrate_piecewise, log_beta};
use proptest::prelude::*;

const TOL: f64 = 1e-10;

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integration_is_linear(
        f in prop::collection::vec(-1.0f64..1.0, 1..7),
        g in prop::collection::vec(-1.0f64..1.0, 1..7),
        alpha in -3.0f64..3.0,
        beta_ in -3.0f64..3.0,
        a in -1.0f64..0.5,
        width in 0.1f64..2.0,
    ) {
        let b = a + width;
        let combined = integrate(|x| alpha * poly(&f, x) + beta_ * poly(&g, x), a, b, TOL).unwrap().value;
        let parts = alpha * integrate(|x| poly(&f, x), a, b, TOL).unwrap().value
            + beta_ * integrate(|x| poly(&g, x), a, b, TOL).unwrap().value;
        prop_assert!((combined - parts).abs() <= 10.0 * TOL);
    }

    #[test]
    fn log_beta_is_symmetric(a in 1e-3f64..200.0, b in 1e-3f64..200.0) {
        prop_assert_eq!(log_beta(a, b).unwrap(), log_beta(b, a).unwrap());
    }

    // ∫f g ≥ 0 when ∫f = 0, f crosses zero once from below, and g increases
    #[test]
    fn single_crossing_against_monotone_weight(
        c in 0.05f64..0.95,
        slope in 0.1f64..5.0,
        knots in prop::collection::vec((0.0f64..1.0, 0.0f64..2.0), 1..6),
        g0 in -2.0f64..2.0,
    ) {
        let rise = slope * c * c / ((1.0 - c) * (1.0 - c));
        let f = move |x: f64| if x < c { -slope * (c - x) } else { rise * (x - c) };
        let mut breaks: Vec<f64> = knots.iter().map(|k| k.0).collect();
        breaks.push(c);
        let g = move |x: f64| g0 + knots.iter().map(|&(k, s)| s * (x - k).max(0.0)).sum::<f64>();
        let up = integrate_piecewise(|x| f(x) * g(x), 0.0, 1.0, &breaks, TOL).unwrap().value;
        let down = integrate_piecewise(|x| -f(x) * g(x), 0.0, 1.0, &breaks, TOL).unwrap().value;
        prop_assert!(up >= -1e-9, "increasing weight gave {}", up);
        prop_assert!(down <= 1e-9, "decreasing weight gave {}", down);
    }
}

#[test]
fn order_statistic_moment_identity() {
    for n in 2..=8usize {
        for i in 1..=n {
            for k in [0.3, 0.5, 1.0, 2.0] {
                if i < n && k <= 1.0 - i as f64 {
                    continue;
                }
                let got = integrate(|t| t.powf(k) * rank_probability(n, i, t).unwrap().1, 0.0, 1.0, 1e-12)
                    .unwrap()
                    .value;
                let expect = if i == n {
                    (n as f64 - 1.0) / (n as f64 + k - 1.0)
                } else {
                    -k * binomial(n - 1, i - 1) * beta(i as f64 + k - 1.0, (n - i + 1) as f64).unwrap()
                };
                assert!((got - expect).abs() <= 1e-8, "n={n} i={i} k={k}: {got} vs {expect}");
            }
        }
    }
}

#[test]
fn rank_probabilities_form_a_distribution() {
    for n in 2..=9 {
        for t in [0.0, 0.13, 0.5, 0.77, 1.0] {
            let (mass, slope) = (1..=n).fold((0.0, 0.0), |(m, s), i| {
                let (p, dp) = rank_probability(n, i, t).unwrap();
                (m + p, s + dp)
            });
            assert!((mass - 1.0).abs() < 1e-14);
            assert!(slope.abs() < 1e-12);
        }
    }
}
