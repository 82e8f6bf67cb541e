use fracdyn::fracops::{
    caputo_composition_residual, caputo_derivative, exact_power_rule, rl_integral, semigroup_residual, FractionalOrder,
    GridFunction, PowerRuleKind,
};
use proptest::prelude::*;

fn order(v: f64) -> FractionalOrder {
    FractionalOrder::new(v).unwrap()
}

type Sample = fn(f64) -> f64;

struct PowerErrors {
    /// max |numerical − exact| over nodes τ > 0.
    abs: f64,
    /// max relative error over nodes in [0.01, 1].
    rel_interior: f64,
}

/// Errors of the numerical operator applied to τ^{β−1} on [0, 1].
fn power_rule_errors(kind: PowerRuleKind, alpha: f64, beta: f64, n: usize) -> PowerErrors {
    let g = GridFunction::from_fn(1.0, n, |t| if beta == 1.0 { 1.0 } else { t.powf(beta - 1.0) }).unwrap();
    let got = match kind {
        PowerRuleKind::Integral => rl_integral(&g, order(alpha)),
        PowerRuleKind::Caputo => caputo_derivative(&g, order(alpha)),
    };
    let mut e = PowerErrors {
        abs: 0.0,
        rel_interior: 0.0,
    };
    for (t, v) in got.taus().zip(got.values()).skip(1) {
        let want = exact_power_rule(kind, alpha, beta, t).unwrap();
        e.abs = e.abs.max((v - want).abs());
        if t >= 0.01 && want != 0.0 {
            e.rel_interior = e.rel_interior.max(((v - want) / want).abs());
        }
    }
    e
}

#[test]
fn power_rule_is_exact_for_constants_and_lines() {
    for kind in [PowerRuleKind::Integral, PowerRuleKind::Caputo] {
        for alpha in [0.3, 0.5, 0.7] {
            for beta in [1.0, 2.0] {
                let e = power_rule_errors(kind, alpha, beta, 4096);
                assert!(e.abs < 1e-12, "{kind:?} alpha {alpha} beta {beta}: {}", e.abs);
            }
        }
    }
}

#[test]
fn integral_of_square_root_converges_at_start_limited_rate() {
    for alpha in [0.3, 0.5, 0.7] {
        let e: Vec<PowerErrors> = [1024, 4096]
            .iter()
            .map(|&n| power_rule_errors(PowerRuleKind::Integral, alpha, 1.5, n))
            .collect();
        let rate = (e[0].abs / e[1].abs).log2() / 2.0;
        assert!((rate - (alpha + 0.5)).abs() < 0.1, "alpha {alpha}: rate {rate}");
        assert!(e[1].rel_interior < 1e-3, "alpha {alpha}: {}", e[1].rel_interior);
    }
}

#[test]
fn caputo_of_square_root_converges_away_from_origin() {
    for alpha in [0.3, 0.5, 0.7] {
        let coarse = power_rule_errors(PowerRuleKind::Caputo, alpha, 1.5, 1024).rel_interior;
        let fine = power_rule_errors(PowerRuleKind::Caputo, alpha, 1.5, 4096).rel_interior;
        assert!(fine < 2e-3 && coarse / fine > 4.0, "alpha {alpha}: {coarse} -> {fine}");
    }
}

#[test]
fn semigroup_and_composition_residuals_halve() {
    let flat: [(&str, Sample); 2] = [("t^2", |t| t * t), ("1-cos", |t| 1.0 - t.cos())];
    for (name, f) in flat {
        for (a, b) in [(0.5, 0.3), (0.3, 0.4), (0.7, 0.6)] {
            let coarse = GridFunction::from_fn(1.0, 2048, f).unwrap();
            let fine = GridFunction::from_fn(1.0, 4096, f).unwrap();
            let s0 = semigroup_residual(&coarse, order(a), order(b)).unwrap();
            let s1 = semigroup_residual(&fine, order(a), order(b)).unwrap();
            assert!(s0 < 5e-4 && s0 / s1 >= 2.0, "{name} semigroup ({a}, {b}): {s0} -> {s1}");
            let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
            let c0 = caputo_composition_residual(&coarse, order(hi), order(lo)).unwrap();
            let c1 = caputo_composition_residual(&fine, order(hi), order(lo)).unwrap();
            assert!(
                c0 < 5e-4 && c0 / c1 >= 2.0,
                "{name} composition ({hi}, {lo}): {c0} -> {c1}"
            );
        }
    }
}

#[test]
fn nonflat_start_limits_the_semigroup_rate() {
    // e^{−τ} has g(0) ≠ 0, so I^α g ~ τ^α near 0 and the nested integral
    // converges like h^{α+β} in the max norm.
    let r = |n| {
        let g = GridFunction::from_fn(1.0, n, |t| (-t).exp()).unwrap();
        semigroup_residual(&g, order(0.5), order(0.3)).unwrap()
    };
    let ratio = r(1024) / r(2048);
    assert!((ratio.log2() - 0.8).abs() < 0.05, "ratio {ratio}");
}

fn grid_from(values: &[f64]) -> GridFunction {
    GridFunction::new(1.0, values.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integral_is_linear(
        a in prop::collection::vec(-5.0f64..5.0, 33),
        b in prop::collection::vec(-5.0f64..5.0, 33),
        s in -3.0f64..3.0,
        alpha in 0.05f64..1.0,
    ) {
        let (ga, gb) = (grid_from(&a), grid_from(&b));
        let combo = ga.zip_map(&gb, |x, y| s * x + y).unwrap();
        let lhs = rl_integral(&combo, order(alpha));
        let rhs = rl_integral(&ga, order(alpha)).zip_map(&rl_integral(&gb, order(alpha)), |x, y| s * x + y).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn caputo_is_linear_and_kills_constants(
        a in prop::collection::vec(-5.0f64..5.0, 33),
        c in -10.0f64..10.0,
        alpha in 0.05f64..0.99,
    ) {
        let ga = grid_from(&a);
        let shifted = ga.map(|_, v| v + c).unwrap();
        let d0 = caputo_derivative(&ga, order(alpha));
        let d1 = caputo_derivative(&shifted, order(alpha));
        prop_assert!(d0.max_abs_diff(&d1).unwrap() <= 1e-11 * (1.0 + d0.max_abs()));
        let scaled = caputo_derivative(&ga.map(|_, v| c * v).unwrap(), order(alpha));
        let expect = d0.map(|_, v| c * v).unwrap();
        prop_assert!(scaled.max_abs_diff(&expect).unwrap() <= 1e-11 * (1.0 + expect.max_abs()));
    }

    #[test]
    fn integral_preserves_positivity(
        a in prop::collection::vec(0.0f64..5.0, 2..65),
        alpha in 0.05f64..1.0,
    ) {
        let g = grid_from(&a);
        prop_assert!(rl_integral(&g, order(alpha)).min_value() >= 0.0);
    }

    #[test]
    fn integral_then_derivative_recovers_smooth_functions(
        c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0,
        alpha in 0.1f64..0.9,
    ) {
        // D^α I^α g = g for g continuous.
        let g = GridFunction::from_fn(1.0, 1024, |t| c0 + c1 * t + c2 * t * t).unwrap();
        let back = caputo_derivative(&rl_integral(&g, order(alpha)), order(alpha));
        let err = back.taus().zip(back.values()).zip(g.values())
            .filter(|((t, _), _)| *t >= 0.25)
            .map(|((_, b), v)| (b - v).abs())
            .fold(0.0, f64::max);
        prop_assert!(err <= 2e-2 * (1.0 + c0.abs() + c1.abs() + c2.abs()), "err {}", err);
    }
}
