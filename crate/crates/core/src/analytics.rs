//! Closed-form moments of the cost and impact metrics.
//!
//! All expansions assume `tau_m, tau_q << horizon` and drop third-order
//! terms in those timescales. Dollar fields are converted with
//! `point_value`; impact fields stay in points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::var_terminal_quantity;
use crate::params::{ModelParams, SimGrid};

/// Expected costs and their dispersion, in dollars unless noted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostMomentsReport {
    pub e_linear: f64,
    pub e_impact_leading: f64,
    pub e_impact_full: f64,
    pub e_total: f64,
    pub sd_cost_twap: f64,
    pub sd_cost_full: f64,
    pub e_delta_leading: f64,
    pub e_delta_full: f64,
    pub sd_delta_leading: f64,
    pub sd_delta_full: f64,
    /// Variance of the executed quantity used in the expansions (contracts^2),
    /// first order in `tau_q`: `2 tau_q T Var[q]`.
    pub var_qt: f64,
    /// Exact stationary variance of the executed quantity (contracts^2).
    pub var_qt_exact: f64,
}

/// Expected impact signals and their dispersion, in points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactMomentsReport {
    pub e_total_impact: f64,
    pub sd_total_impact_leading: f64,
    pub sd_total_impact: f64,
    pub e_weighted_twap: f64,
    pub e_weighted_general_leading: f64,
    pub e_weighted_general: f64,
    pub sd_weighted: f64,
    /// Minutes.
    pub tau_eff: f64,
}

/// `Var[q] / E[q]^2 = sigma_q^2 tau_q / 2`.
fn relative_rate_variance(p: &ModelParams) -> f64 {
    p.sigma_q * p.sigma_q * p.tau_q / 2.0
}

/// `Var[Q_T] / Q^2` to first order: `sigma_q^2 tau_q^2 / T`.
fn relative_terminal_variance(p: &ModelParams) -> f64 {
    p.sigma_q * p.sigma_q * p.tau_q * p.tau_q / p.horizon
}

/// `(tau_m / T) (1 - tau_m / T)`, the TWAP impact-cost shape.
fn twap_cost_factor(p: &ModelParams) -> f64 {
    let r = p.tau_m / p.horizon;
    r * (1.0 - r)
}

/// Concentration-penalty shape `tau_m tau_q (T - 2(tau_m + tau_q)) / ((tau_m + tau_q) T^2)`.
fn concentration_factor(p: &ModelParams) -> f64 {
    let (t, tm, tq) = (p.horizon, p.tau_m, p.tau_q);
    tm * tq * (t - 2.0 * (tm + tq)) / ((tm + tq) * t * t)
}

pub fn tau_eff(p: &ModelParams) -> f64 {
    p.tau_m * p.tau_q / (p.tau_m + p.tau_q)
}

pub fn cost_moments(p: &ModelParams) -> CostMomentsReport {
    let (q, t, tm, tq) = (p.q_total, p.horizon, p.tau_m, p.tau_q);
    let pv = p.point_value;
    let spread_cost = p.a * p.spread;
    let r = relative_rate_variance(p);
    let var_qt = relative_terminal_variance(p) * q * q;
    let f = twap_cost_factor(p);
    let sm2 = p.sigma_m * p.sigma_m;

    let e_linear = spread_cost * q;
    let e_impact_leading = p.lambda * q * q * f;
    let e_impact_full =
        e_impact_leading + p.lambda * var_qt * f + p.lambda * q * q * r * concentration_factor(p);

    let var_twap = sm2 * q * q * t / 3.0;
    let var_full = var_twap + sm2 * var_qt * t / 2.0 + spread_cost * spread_cost * var_qt
        - spread_cost * q * p.lambda * var_qt * tm / t * t / (tm + tq);

    let e_delta_full = q * (spread_cost + p.lambda * q * r * tm * tq / ((tm + tq) * t));
    let var_delta_leading = q * q * sm2 * r * tq;
    let var_delta_full = var_delta_leading + spread_cost * spread_cost * var_qt;

    CostMomentsReport {
        e_linear: pv * e_linear,
        e_impact_leading: pv * e_impact_leading,
        e_impact_full: pv * e_impact_full,
        e_total: pv * (e_linear + e_impact_full),
        sd_cost_twap: pv * var_twap.sqrt(),
        sd_cost_full: pv * var_full.max(0.0).sqrt(),
        e_delta_leading: pv * e_linear,
        e_delta_full: pv * e_delta_full,
        sd_delta_leading: pv * var_delta_leading.sqrt(),
        sd_delta_full: pv * var_delta_full.sqrt(),
        var_qt,
        var_qt_exact: var_terminal_quantity(p),
    }
}

/// `X` such that the expected weighted impact is `lambda Q sqrt(X)`:
/// `tau_m/(2T) + sigma_q^2 tau_q (1/2 + tau_eff^2/(T tau_m) - tau_eff (tau_m + 3 tau_q)/(4T(tau_m + tau_q)))`.
pub fn weighted_signal_factor(p: &ModelParams) -> f64 {
    let (t, tm, tq) = (p.horizon, p.tau_m, p.tau_q);
    let te = tau_eff(p);
    let fluct = 0.5 + te * te / (t * tm) - te * (tm + 3.0 * tq) / (4.0 * t * (tm + tq));
    tm / (2.0 * t) + p.sigma_q * p.sigma_q * tq * fluct
}

pub fn impact_moments(p: &ModelParams) -> ImpactMomentsReport {
    let (q, t, tm, tq) = (p.q_total, p.horizon, p.tau_m, p.tau_q);
    let lq = p.lambda * q;
    let plateau = lq * tm / t;
    let noise_var = p.sigma_m * p.sigma_m * t;
    let rate_term = 2.0 * p.sigma_q * p.sigma_q * tq * tq / (tm + tq) + 1.0;
    ImpactMomentsReport {
        e_total_impact: plateau * -(-t / tm).exp_m1(),
        sd_total_impact_leading: noise_var.sqrt(),
        sd_total_impact: (noise_var + plateau * plateau * rate_term).sqrt(),
        e_weighted_twap: lq / 2f64.sqrt() * (tm / t).sqrt() * (-(-2.0 * t / tm).exp_m1()).sqrt(),
        e_weighted_general_leading: lq * (tm / (2.0 * t) + relative_rate_variance(p)).sqrt(),
        e_weighted_general: lq * weighted_signal_factor(p).sqrt(),
        sd_weighted: noise_var.sqrt(),
        tau_eff: tau_eff(p),
    }
}

/// Expected cumulative TWAP impact `lambda Q (tau_m/T)(1 - e^{-t/tau_m})` at each grid time.
pub fn expected_impact_trajectory(p: &ModelParams, grid: &SimGrid) -> Vec<f64> {
    grid.times()
        .into_iter()
        .map(|t| expected_impact_at(p, t))
        .collect()
}

pub fn expected_impact_at(p: &ModelParams, t: f64) -> f64 {
    p.lambda * p.q_total * p.tau_m / p.horizon * -(-t / p.tau_m).exp_m1()
}

/// t-statistic of a mean over `n_orders` independent orders.
pub fn tstat(mean: f64, sd: f64, n_orders: usize) -> Result<f64> {
    if !(sd > 0.0) {
        return Err(Error::InvalidInput("sd must be > 0".into()));
    }
    if n_orders == 0 {
        return Err(Error::InvalidInput("n_orders must be >= 1".into()));
    }
    Ok((n_orders as f64).sqrt() * mean / sd)
}

/// Coefficients of the per-contract slippage regression
/// `E[cost / Q] = a * phi1 + lambda * phi2 * Q` (points per contract).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignCoeffs {
    pub phi1: f64,
    pub phi2: f64,
}

/// Design coefficients for the arrival-price slippage `C_T / Q`.
pub fn regression_design_coeffs(p: &ModelParams) -> DesignCoeffs {
    DesignCoeffs {
        phi1: p.spread,
        phi2: twap_cost_factor(p) * (1.0 + relative_terminal_variance(p))
            + relative_rate_variance(p) * concentration_factor(p),
    }
}

/// Design coefficients for the slippage to TWAP `Delta C_T / Q`, whose only
/// surviving impact term is the concentration residual.
pub fn enhanced_design_coeffs(p: &ModelParams) -> DesignCoeffs {
    let (t, tm, tq) = (p.horizon, p.tau_m, p.tau_q);
    DesignCoeffs {
        phi1: p.spread,
        phi2: relative_rate_variance(p) * tm * tq / ((tm + tq) * t),
    }
}
