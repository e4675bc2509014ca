//! Recovery of the broker constants from simulated orders of varying size.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::batch::OrderSimulator;
use super::config::ExperimentConfig;
use crate::analytics::{enhanced_design_coeffs, regression_design_coeffs, DesignCoeffs};
use crate::error::Result;
use crate::params::ModelParams;
use crate::regression::{ols_fit, recover_params, ParamEstimates, RegressionFit};
use crate::rng::{stream, Leg};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyFit {
    pub fit: RegressionFit,
    pub design: DesignCoeffs,
    pub estimates: ParamEstimates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionStudy {
    pub n_orders: usize,
    pub conditioned: bool,
    pub q_grid: Vec<f64>,
    pub true_a: f64,
    pub true_lambda: f64,
    /// Arrival-price slippage per contract on order size.
    pub naive: StudyFit,
    /// Slippage to TWAP per contract on order size.
    pub enhanced: StudyFit,
}

/// One observation per order: `(Q, C_T / (Q pv), Delta C_T / (Q pv))`.
pub fn simulate_observations(cfg: &ExperimentConfig) -> Result<Vec<(f64, f64, f64)>> {
    cfg.validate()?;
    let sizes = cfg.order_sizes();
    let base = OrderSimulator::from_config(cfg)?;
    let sims: Vec<OrderSimulator> = sizes
        .iter()
        .map(|&q| {
            base.with_params(ModelParams {
                q_total: q,
                ..cfg.params
            })
        })
        .collect::<Result<_>>()?;
    let pv = cfg.params.point_value;
    (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let k = stream(cfg.master_seed, i, Leg::OrderSize).random_range(0..sizes.len());
            let q = sizes[k];
            let m = sims[k].metrics(i)?;
            Ok((q, m.cost_arrival / (q * pv), m.cost_to_twap / (q * pv)))
        })
        .collect()
}

pub fn run_regression_study(cfg: &ExperimentConfig) -> Result<RegressionStudy> {
    let obs = simulate_observations(cfg)?;
    let x: Vec<f64> = obs.iter().map(|o| o.0).collect();
    let naive_y: Vec<f64> = obs.iter().map(|o| o.1).collect();
    let enhanced_y: Vec<f64> = obs.iter().map(|o| o.2).collect();
    let fit_with = |y: &[f64], design: DesignCoeffs| -> Result<StudyFit> {
        let fit = ols_fit(&x, y)?;
        Ok(StudyFit {
            fit,
            design,
            estimates: recover_params(&fit, &design)?,
        })
    };
    Ok(RegressionStudy {
        n_orders: obs.len(),
        conditioned: cfg.conditioned,
        q_grid: cfg.order_sizes(),
        true_a: cfg.params.a,
        true_lambda: cfg.params.lambda,
        naive: fit_with(&naive_y, regression_design_coeffs(&cfg.params))?,
        enhanced: fit_with(&enhanced_y, enhanced_design_coeffs(&cfg.params))?,
    })
}
