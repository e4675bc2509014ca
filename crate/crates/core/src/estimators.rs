//! Per-order cost and impact metrics.
//!
//! * `cost_arrival` (C_T): slippage of the fills against the arrival mid.
//! * `cost_to_twap` (Delta C_T): the same slippage minus the slippage of a
//!   TWAP order priced at the realized mids. Impact and noise mostly cancel,
//!   the spread charge does not.
//! * `impact_total` (I): mid move over the order.
//! * `impact_weighted` (I_pi): mid increments weighted by their expected
//!   impact content.

use serde::{Deserialize, Serialize};

use crate::analytics;
use crate::error::{check_len, Error, Result};
use crate::model::{decayed_integral, PricePath, RatePath};
use crate::params::{ModelParams, SimGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderMetrics {
    pub cost_arrival: f64,
    /// Decomposition of `cost_arrival`; only available for simulated orders.
    pub cost_linear_part: Option<f64>,
    pub cost_impact_part: Option<f64>,
    pub cost_noise_part: Option<f64>,
    pub cost_to_twap: f64,
    pub impact_total: f64,
    pub impact_weighted: f64,
    pub executed_qty: f64,
}

/// Arrival-price cost and its spread / impact / noise decomposition, in dollars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaiveCost {
    pub total: f64,
    pub linear: f64,
    pub impact: f64,
    pub noise: f64,
}

fn check_inputs(path: &RatePath, prices: &PricePath, grid: &SimGrid) -> Result<()> {
    let n = grid.n_points();
    check_len("rate path", n, path.q.len())?;
    check_len("mid prices", n, prices.mid.len())?;
    check_len("fill prices", n, prices.fill.len())?;
    check_len("impact", n, prices.impact.len())
}

/// `point_value * int (fill - m0) q dt`.
pub(crate) fn arrival_cost(
    q: &[f64],
    fill: &[f64],
    m0: f64,
    point_value: f64,
    grid: &SimGrid,
) -> f64 {
    let slip: Vec<f64> = fill.iter().map(|p| p - m0).collect();
    point_value * grid.trapezoid_product(&slip, q)
}

/// Arrival cost minus the TWAP benchmark `int (mid - m0) Q/T dt`.
pub(crate) fn twap_relative_cost(
    q: &[f64],
    fill: &[f64],
    mid: &[f64],
    m0: f64,
    twap_rate: f64,
    point_value: f64,
    grid: &SimGrid,
) -> f64 {
    let mid_dev: Vec<f64> = mid.iter().map(|m| m - m0).collect();
    let benchmark = point_value * twap_rate * grid.trapezoid(&mid_dev);
    arrival_cost(q, fill, m0, point_value, grid) - benchmark
}

pub fn naive_cost(
    path: &RatePath,
    prices: &PricePath,
    params: &ModelParams,
    grid: &SimGrid,
) -> Result<NaiveCost> {
    check_inputs(path, prices, grid)?;
    let pv = params.point_value;
    let total = arrival_cost(&path.q, &prices.fill, params.m0, pv, grid);
    let spread: Vec<f64> = prices
        .fill
        .iter()
        .zip(&prices.mid)
        .map(|(f, m)| f - m)
        .collect();
    let noise = prices.noise(params.m0);
    Ok(NaiveCost {
        total,
        linear: pv * grid.trapezoid_product(&spread, &path.q),
        impact: pv * grid.trapezoid_product(&prices.impact, &path.q),
        noise: pv * grid.trapezoid_product(&noise, &path.q),
    })
}

pub fn twap_slippage(
    path: &RatePath,
    prices: &PricePath,
    params: &ModelParams,
    grid: &SimGrid,
) -> Result<f64> {
    check_inputs(path, prices, grid)?;
    Ok(twap_relative_cost(
        &path.q,
        &prices.fill,
        &prices.mid,
        params.m0,
        params.twap_rate(),
        params.point_value,
        grid,
    ))
}

pub fn total_impact(prices: &PricePath) -> Result<f64> {
    match (prices.mid.first(), prices.mid.last()) {
        (Some(first), Some(last)) => Ok(last - first),
        _ => Err(Error::InvalidInput("empty mid price path".into())),
    }
}

/// Weights applied to the `n_steps` mid increments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightCurve {
    pub pi: Vec<f64>,
}

impl WeightCurve {
    pub fn equal(grid: &SimGrid) -> Self {
        Self {
            pi: vec![1.0; grid.n_steps],
        }
    }

    /// `sum pi_i^2 dt`; equals the horizon for a variance-preserving curve.
    pub fn squared_norm(&self, grid: &SimGrid) -> f64 {
        self.pi.iter().map(|p| p * p).sum::<f64>() * grid.dt
    }
}

/// How the impact-content weights are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightNormalization {
    /// Rescale every path so that `sum pi^2 dt = horizon` holds exactly.
    PerPath,
    /// One constant factor for all paths, chosen so that the expected
    /// squared norm predicted by the closed-form signal equals the horizon.
    /// Paths whose rate wanders more than average get larger weights.
    #[default]
    Analytic,
}

/// Optimal deterministic weights for a TWAP schedule, sampled at increment
/// midpoints: `sqrt(2T/tau_m) (1 - e^{-2T/tau_m})^{-1/2} e^{-t/tau_m}`.
pub fn twap_weights(params: &ModelParams, grid: &SimGrid) -> WeightCurve {
    let ratio = 2.0 * params.horizon / params.tau_m;
    let scale = (ratio / -(-ratio).exp_m1()).sqrt();
    WeightCurve {
        pi: grid
            .midpoints()
            .map(|t| scale * (-t / params.tau_m).exp())
            .collect(),
    }
}

/// `u_t = q_t - (1/tau_m) int_0^t e^{-(t-s)/tau_m} q_s ds`, proportional to the
/// expected mid drift given the trading path, averaged onto increment midpoints.
pub fn impact_content(q: &[f64], tau_m: f64, grid: &SimGrid) -> Vec<f64> {
    let kernel = decayed_integral(q, grid.dt, tau_m);
    let u: Vec<f64> = q.iter().zip(&kernel).map(|(q, j)| q - j / tau_m).collect();
    u.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

pub(crate) fn normalize_per_path(u: Vec<f64>, horizon: f64, grid: &SimGrid) -> Result<WeightCurve> {
    let norm = u.iter().map(|v| v * v).sum::<f64>() * grid.dt;
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::DegenerateWeights);
    }
    let nu = (horizon / norm).sqrt();
    Ok(WeightCurve {
        pi: u.into_iter().map(|v| nu * v).collect(),
    })
}

/// Impact-content weights for an arbitrary trading path, rescaled so that
/// `sum pi^2 dt = horizon`.
pub fn general_weights(
    path: &RatePath,
    params: &ModelParams,
    grid: &SimGrid,
) -> Result<WeightCurve> {
    general_weights_with(path, params, grid, WeightNormalization::PerPath)
}

pub fn general_weights_with(
    path: &RatePath,
    params: &ModelParams,
    grid: &SimGrid,
    normalization: WeightNormalization,
) -> Result<WeightCurve> {
    check_len("rate path", grid.n_points(), path.q.len())?;
    let u = impact_content(&path.q, params.tau_m, grid);
    match normalization {
        WeightNormalization::PerPath => normalize_per_path(u, params.horizon, grid),
        WeightNormalization::Analytic => {
            let nu = analytic_weight_scale(params)?;
            Ok(WeightCurve {
                pi: u.into_iter().map(|v| nu * v).collect(),
            })
        }
    }
}

/// `nu = T / (Q sqrt(X))` where `lambda Q sqrt(X)` is the closed-form expected
/// weighted impact. Independent of `lambda`.
pub fn analytic_weight_scale(params: &ModelParams) -> Result<f64> {
    let x = analytics::weighted_signal_factor(params);
    if params.q_total == 0.0 || !(x > 0.0) {
        return Err(Error::DegenerateWeights);
    }
    Ok(params.horizon / (params.q_total.abs() * x.sqrt()))
}

/// `sum pi_i (mid_{i+1} - mid_i)`.
pub fn weighted_impact(prices: &PricePath, weights: &WeightCurve) -> Result<f64> {
    check_len(
        "weight curve",
        prices.mid.len().saturating_sub(1),
        weights.pi.len(),
    )?;
    Ok(prices
        .mid
        .windows(2)
        .zip(&weights.pi)
        .map(|(m, p)| p * (m[1] - m[0]))
        .sum())
}

/// All four metrics for one simulated order.
pub fn order_metrics(
    path: &RatePath,
    prices: &PricePath,
    params: &ModelParams,
    grid: &SimGrid,
    normalization: WeightNormalization,
) -> Result<OrderMetrics> {
    let naive = naive_cost(path, prices, params, grid)?;
    let weights = general_weights_with(path, params, grid, normalization)?;
    Ok(OrderMetrics {
        cost_arrival: naive.total,
        cost_linear_part: Some(naive.linear),
        cost_impact_part: Some(naive.impact),
        cost_noise_part: Some(naive.noise),
        cost_to_twap: twap_slippage(path, prices, params, grid)?,
        impact_total: total_impact(prices)?,
        impact_weighted: weighted_impact(prices, &weights)?,
        executed_qty: path.executed(),
    })
}
