//! Monte Carlo checks of the trading-rate and price dynamics against closed
//! forms.

use impactlab::model::{
    brownian_path, simulate_rate_path, stationary_rate_moments, var_terminal_quantity,
    TerminalConditioner,
};
use impactlab::rng::{stream, Leg};
use impactlab::stats::{correlation, SampleMoments};
use impactlab::{ModelParams, SimGrid};

fn rate_paths(p: &ModelParams, g: &SimGrid, seed: u64, n: u64) -> Vec<impactlab::model::RatePath> {
    (0..n)
        .map(|i| simulate_rate_path(p, g, &mut stream(seed, i, Leg::Rate)))
        .collect()
}

#[test]
fn rate_is_stationary_with_closed_form_moments() {
    let p = ModelParams::default();
    let g = SimGrid::default();
    let paths = rate_paths(&p, &g, 11, 10_000);
    let m = stationary_rate_moments(&p);
    for i in [0, 1000, 1950, 3900] {
        let col: Vec<f64> = paths.iter().map(|path| path.q[i]).collect();
        let s = SampleMoments::from_slice(&col);
        assert!(
            (s.mean - m.mean).abs() < 4.0 * s.std_error(),
            "mean at {i}: {}",
            s.mean
        );
        assert!((s.sd / 4.054 - 1.0).abs() < 0.02, "sd at {i}: {}", s.sd);
    }
    // pooled over time the sd is pinned much tighter
    let pooled: Vec<f64> = paths
        .iter()
        .flat_map(|path| path.q.iter().step_by(100).copied())
        .collect();
    let s = SampleMoments::from_slice(&pooled);
    assert!(
        (s.sd / m.variance.sqrt() - 1.0).abs() < 0.01,
        "pooled sd {}",
        s.sd
    );
}

#[test]
fn terminal_quantity_dispersion() {
    let p = ModelParams::default();
    let g = SimGrid::default();
    let qt: Vec<f64> = rate_paths(&p, &g, 12, 10_000)
        .iter()
        .map(|r| r.executed())
        .collect();
    let s = SampleMoments::from_slice(&qt);
    assert!((s.mean - 2000.0).abs() < 4.0 * s.std_error());
    assert!((s.sd / 251.6 - 1.0).abs() < 0.02, "sd Q_T = {}", s.sd);
    assert!((s.sd / var_terminal_quantity(&p).sqrt() - 1.0).abs() < 0.02);
}

#[test]
fn conditional_midpoint_moments() {
    let p = ModelParams::default();
    let g = SimGrid::default();
    let cond = TerminalConditioner::new(&p, &g);
    let mid = g.n_steps / 2;
    let col: Vec<f64> = rate_paths(&p, &g, 13, 10_000)
        .iter()
        .map(|r| cond.apply(r, &g).unwrap().q[mid])
        .collect();
    let s = SampleMoments::from_slice(&col);
    // Var[q_i | S] = V - Cov(q_i, S)^2 / Var(S) = V - gain_i^2 Var(S)
    let v = stationary_rate_moments(&p).variance;
    let expected_var = v - cond.gain()[mid].powi(2) * cond.var_total();
    assert!((s.mean - p.twap_rate()).abs() < 4.0 * s.std_error());
    assert!(
        (s.sd * s.sd / expected_var - 1.0).abs() < 0.04,
        "{} vs {expected_var}",
        s.sd * s.sd
    );
    assert!(expected_var < v);
}

#[test]
fn market_noise_scale_and_independence() {
    let p = ModelParams::default();
    let g = SimGrid::default();
    let n = 20_000;
    let w_end: Vec<f64> = (0..n)
        .map(|i| {
            p.sigma_m
                * *brownian_path(&g, &mut stream(14, i, Leg::Mid))
                    .last()
                    .unwrap()
        })
        .collect();
    let s = SampleMoments::from_slice(&w_end);
    assert!((s.sd / 50.0 - 1.0).abs() < 0.015, "sd noise {}", s.sd);

    let qt: Vec<f64> = (0..n)
        .map(|i| simulate_rate_path(&p, &g, &mut stream(14, i, Leg::Rate)).executed())
        .collect();
    let r = correlation(&qt, &w_end);
    assert!(r.abs() < 4.0 / (n as f64).sqrt(), "corr {r}");
}
