//! Structural properties of the cost and impact estimators on simulated orders.

use impactlab::estimators::{
    general_weights, naive_cost, order_metrics, total_impact, twap_slippage, weighted_impact,
    WeightCurve, WeightNormalization,
};
use impactlab::model::{propagate_impact, simulate_mid_and_fills, simulate_rate_path, RatePath};
use impactlab::rng::{stream, Leg};
use impactlab::{ModelParams, SimGrid};
use proptest::prelude::*;

fn params_strategy() -> impl Strategy<Value = ModelParams> {
    (
        500.0f64..5000.0,
        5.0f64..80.0,
        1.0f64..20.0,
        0.1f64..1.0,
        0.001f64..0.02,
        0.0f64..1.0,
    )
        .prop_map(|(q_total, tau_m, tau_q, a, lambda, sigma_q)| ModelParams {
            q_total,
            tau_m,
            tau_q,
            a,
            lambda,
            sigma_q,
            ..Default::default()
        })
}

fn grid() -> SimGrid {
    SimGrid::new(390.0, 780).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn twap_schedule_cancels_impact_and_noise(p in params_strategy(), seed in 0u64..1000) {
        let g = grid();
        let path = RatePath::twap(&p, &g);
        let imp = propagate_impact(&path, &p, &g);
        let prices = simulate_mid_and_fills(&path, imp, &p, &g, &mut stream(seed, 0, Leg::Mid)).unwrap();
        let dc = twap_slippage(&path, &prices, &p, &g).unwrap();
        let expected = p.a * p.spread * p.q_total * p.point_value;
        prop_assert!((dc - expected).abs() < 1e-6 * expected, "{} vs {}", dc, expected);
    }

    #[test]
    fn per_path_weights_are_normalized(p in params_strategy(), seed in 0u64..1000) {
        let g = grid();
        let path = simulate_rate_path(&p, &g, &mut stream(seed, 0, Leg::Rate));
        let w = general_weights(&path, &p, &g).unwrap();
        prop_assert!((w.squared_norm(&g) / p.horizon - 1.0).abs() < 5e-3);
    }

    #[test]
    fn equal_weights_reduce_to_total_impact(p in params_strategy(), seed in 0u64..1000) {
        let g = grid();
        let path = simulate_rate_path(&p, &g, &mut stream(seed, 0, Leg::Rate));
        let imp = propagate_impact(&path, &p, &g);
        let prices = simulate_mid_and_fills(&path, imp, &p, &g, &mut stream(seed, 0, Leg::Mid)).unwrap();
        let eq = weighted_impact(&prices, &WeightCurve::equal(&g)).unwrap();
        prop_assert!((eq - total_impact(&prices).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn costs_scale_with_point_value_and_ignore_price_level(
        p in params_strategy(),
        seed in 0u64..1000,
        pv in 1.0f64..100.0,
        shift in -1000.0f64..1000.0,
    ) {
        let g = grid();
        let path = simulate_rate_path(&p, &g, &mut stream(seed, 0, Leg::Rate));
        let metrics = |params: &ModelParams| {
            let imp = propagate_impact(&path, params, &g);
            let prices = simulate_mid_and_fills(&path, imp, params, &g, &mut stream(seed, 0, Leg::Mid)).unwrap();
            order_metrics(&path, &prices, params, &g, WeightNormalization::Analytic).unwrap()
        };
        let base = metrics(&p);
        let scaled = metrics(&ModelParams { point_value: pv, ..p });
        let k = pv / p.point_value;
        prop_assert!((scaled.cost_arrival - k * base.cost_arrival).abs() < 1e-6 * (1.0 + base.cost_arrival.abs() * k));
        prop_assert!((scaled.cost_to_twap - k * base.cost_to_twap).abs() < 1e-6 * (1.0 + base.cost_to_twap.abs() * k));
        prop_assert_eq!(scaled.impact_weighted, base.impact_weighted);

        let moved = metrics(&ModelParams { m0: p.m0 + shift, ..p });
        let tol = 1e-6 * p.point_value * p.q_total * (p.m0 + shift.abs());
        prop_assert!((moved.cost_arrival - base.cost_arrival).abs() < tol);
        prop_assert!((moved.cost_to_twap - base.cost_to_twap).abs() < tol);
        prop_assert!((moved.impact_total - base.impact_total).abs() < 1e-8);
    }

    #[test]
    fn cost_decomposition_is_exact(p in params_strategy(), seed in 0u64..1000) {
        let g = grid();
        let path = simulate_rate_path(&p, &g, &mut stream(seed, 0, Leg::Rate));
        let imp = propagate_impact(&path, &p, &g);
        let prices = simulate_mid_and_fills(&path, imp, &p, &g, &mut stream(seed, 0, Leg::Mid)).unwrap();
        let c = naive_cost(&path, &prices, &p, &g).unwrap();
        let scale = p.point_value * p.q_total * 100.0;
        prop_assert!((c.linear + c.impact + c.noise - c.total).abs() < 1e-9 * scale);
        let linear = p.a * p.spread * path.executed() * p.point_value;
        prop_assert!((c.linear - linear).abs() < 1e-9 * scale);
    }
}

#[test]
fn weighted_impact_preserves_noise_variance_under_per_path_weights() {
    // no impact: I_pi is pure noise with variance sigma_m^2 * sum pi^2 dt = sigma_m^2 T
    let p = ModelParams {
        lambda: 0.0,
        ..Default::default()
    };
    let g = grid();
    let n = 4000;
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let path = simulate_rate_path(&p, &g, &mut stream(21, i, Leg::Rate));
            let imp = propagate_impact(&path, &p, &g);
            let prices =
                simulate_mid_and_fills(&path, imp, &p, &g, &mut stream(21, i, Leg::Mid)).unwrap();
            weighted_impact(&prices, &general_weights(&path, &p, &g).unwrap()).unwrap()
        })
        .collect();
    let s = impactlab::stats::SampleMoments::from_slice(&values);
    assert!(
        (s.sd / 50.0 - 1.0).abs() < 3.0 * s.sd_std_error() / 50.0 + 1e-3,
        "sd {}",
        s.sd
    );
    assert!(s.mean.abs() < 4.0 * s.std_error());
}
