//! Parallel Monte Carlo batches of simulated orders.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::reference::TSTAT_ORDERS;
use crate::analytics::{self, CostMomentsReport, ImpactMomentsReport};
use crate::error::Result;
use crate::estimators::{order_metrics, OrderMetrics, WeightNormalization};
use crate::model::{
    brownian_path, propagate_impact, simulate_rate_path, PricePath, RatePath, TerminalConditioner,
};
use crate::params::{ModelParams, SimGrid};
use crate::rng::{stream, Leg};
use crate::stats::SampleMoments;

/// Simulates order `i` of a batch from its own random streams.
#[derive(Debug, Clone)]
pub struct OrderSimulator {
    params: ModelParams,
    grid: SimGrid,
    conditioner: Option<TerminalConditioner>,
    master_seed: u64,
    antithetic: bool,
    normalization: WeightNormalization,
}

impl OrderSimulator {
    pub fn new(
        params: ModelParams,
        grid: SimGrid,
        master_seed: u64,
        conditioned: bool,
        antithetic: bool,
        normalization: WeightNormalization,
    ) -> Result<Self> {
        params.validate()?;
        grid.validate(params.horizon)?;
        if normalization == WeightNormalization::Analytic {
            crate::estimators::analytic_weight_scale(&params)?;
        }
        let conditioner = conditioned.then(|| TerminalConditioner::new(&params, &grid));
        Ok(Self {
            params,
            grid,
            conditioner,
            master_seed,
            antithetic,
            normalization,
        })
    }

    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        Self::new(
            cfg.params,
            cfg.grid,
            cfg.master_seed,
            cfg.conditioned,
            cfg.antithetic,
            cfg.weight_normalization,
        )
    }

    /// Same settings with different model constants.
    pub fn with_params(&self, params: ModelParams) -> Result<Self> {
        Self::new(
            params,
            self.grid,
            self.master_seed,
            self.conditioner.is_some(),
            self.antithetic,
            self.normalization,
        )
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &SimGrid {
        &self.grid
    }

    /// Unconditional rate path of order `i`.
    pub fn unconditional_rate_path(&self, i: u64) -> RatePath {
        simulate_rate_path(
            &self.params,
            &self.grid,
            &mut stream(self.master_seed, i, Leg::Rate),
        )
    }

    /// Rate path of order `i`, conditioned when the simulator is.
    pub fn rate_path(&self, i: u64) -> Result<RatePath> {
        let path = self.unconditional_rate_path(i);
        match &self.conditioner {
            Some(c) => c.apply(&path, &self.grid),
            None => Ok(path),
        }
    }

    /// Standard Brownian path driving the mid of order `i`. With antithetic
    /// pairing, orders `2k` and `2k + 1` see mirrored paths.
    pub fn brownian(&self, i: u64) -> Vec<f64> {
        if !self.antithetic {
            return brownian_path(&self.grid, &mut stream(self.master_seed, i, Leg::Mid));
        }
        let mut w = brownian_path(&self.grid, &mut stream(self.master_seed, i & !1, Leg::Mid));
        if i & 1 == 1 {
            for v in &mut w {
                *v = -*v;
            }
        }
        w
    }

    pub fn simulate(&self, i: u64) -> Result<(RatePath, PricePath)> {
        let path = self.rate_path(i)?;
        let impact = propagate_impact(&path, &self.params, &self.grid);
        let prices = PricePath::from_components(&path, impact, &self.brownian(i), &self.params)?;
        Ok((path, prices))
    }

    pub fn metrics(&self, i: u64) -> Result<OrderMetrics> {
        let (path, prices) = self.simulate(i)?;
        order_metrics(&path, &prices, &self.params, &self.grid, self.normalization)
    }

    /// Metrics for orders `0..n`, in order, regardless of thread count.
    pub fn run(&self, n: usize) -> Result<Vec<OrderMetrics>> {
        (0..n as u64)
            .into_par_iter()
            .map(|i| self.metrics(i))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub sd: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// Standard error of the standard deviation.
    pub sd_std_error: f64,
}

impl MetricSummary {
    pub fn from_values(values: &[f64]) -> Self {
        let m = SampleMoments::from_slice(values);
        Self {
            mean: m.mean,
            sd: m.sd,
            std_error: m.std_error(),
            sd_std_error: m.sd_std_error(),
        }
    }
}

/// t-statistics for detecting each effect from a fixed number of orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TstatSummary {
    pub n_orders: usize,
    /// Spread cost measured against the arrival cost dispersion.
    pub linear_naive: f64,
    /// Spread cost measured against the cost-to-TWAP dispersion.
    pub linear_enhanced: f64,
    /// Impact cost measured against the arrival cost dispersion.
    pub impact_cost_naive: f64,
    pub impact_naive: f64,
    pub impact_weighted: f64,
}

impl TstatSummary {
    fn ratio(mean: f64, sd: f64, n: usize) -> f64 {
        (n as f64).sqrt() * mean / sd
    }

    /// From measured moments.
    pub fn measured(report: &BatchSummaries, n: usize) -> Self {
        let linear = report.cost_linear_part.mean;
        Self {
            n_orders: n,
            linear_naive: Self::ratio(linear, report.cost_arrival.sd, n),
            linear_enhanced: Self::ratio(linear, report.cost_to_twap.sd, n),
            impact_cost_naive: Self::ratio(report.cost_impact_part.mean, report.cost_arrival.sd, n),
            impact_naive: Self::ratio(report.impact_total.mean, report.impact_total.sd, n),
            impact_weighted: Self::ratio(report.impact_weighted.mean, report.impact_weighted.sd, n),
        }
    }

    /// From the closed-form moments.
    pub fn analytic(cost: &CostMomentsReport, impact: &ImpactMomentsReport, n: usize) -> Self {
        Self {
            n_orders: n,
            linear_naive: Self::ratio(cost.e_linear, cost.sd_cost_full, n),
            linear_enhanced: Self::ratio(cost.e_linear, cost.sd_delta_full, n),
            impact_cost_naive: Self::ratio(cost.e_impact_full, cost.sd_cost_full, n),
            impact_naive: Self::ratio(impact.e_total_impact, impact.sd_total_impact, n),
            impact_weighted: Self::ratio(impact.e_weighted_general, impact.sd_weighted, n),
        }
    }
}

/// Per-metric summaries of one batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchSummaries {
    pub cost_arrival: MetricSummary,
    pub cost_linear_part: MetricSummary,
    pub cost_impact_part: MetricSummary,
    pub cost_noise_part: MetricSummary,
    pub cost_to_twap: MetricSummary,
    pub impact_total: MetricSummary,
    pub impact_weighted: MetricSummary,
    pub executed_qty: MetricSummary,
}

impl BatchSummaries {
    pub fn from_metrics(metrics: &[OrderMetrics]) -> Self {
        let col = |f: fn(&OrderMetrics) -> f64| {
            let v: Vec<f64> = metrics.iter().map(f).collect();
            MetricSummary::from_values(&v)
        };
        Self {
            cost_arrival: col(|m| m.cost_arrival),
            cost_linear_part: col(|m| m.cost_linear_part.unwrap_or(f64::NAN)),
            cost_impact_part: col(|m| m.cost_impact_part.unwrap_or(f64::NAN)),
            cost_noise_part: col(|m| m.cost_noise_part.unwrap_or(f64::NAN)),
            cost_to_twap: col(|m| m.cost_to_twap),
            impact_total: col(|m| m.impact_total),
            impact_weighted: col(|m| m.impact_weighted),
            executed_qty: col(|m| m.executed_qty),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub n_paths: usize,
    pub master_seed: u64,
    pub conditioned: bool,
    pub antithetic: bool,
    pub weight_normalization: WeightNormalization,
    pub params: ModelParams,
    pub grid: SimGrid,
    pub summary: BatchSummaries,
    pub tstats: TstatSummary,
    pub analytic_tstats: TstatSummary,
    pub analytic_cost: CostMomentsReport,
    pub analytic_impact: ImpactMomentsReport,
    pub warnings: Vec<String>,
}

impl BatchReport {
    pub fn new(cfg: &ExperimentConfig, metrics: &[OrderMetrics]) -> Self {
        let summary = BatchSummaries::from_metrics(metrics);
        let analytic_cost = analytics::cost_moments(&cfg.params);
        let analytic_impact = analytics::impact_moments(&cfg.params);
        Self {
            n_paths: metrics.len(),
            master_seed: cfg.master_seed,
            conditioned: cfg.conditioned,
            antithetic: cfg.antithetic,
            weight_normalization: cfg.weight_normalization,
            params: cfg.params,
            grid: cfg.grid,
            summary,
            tstats: TstatSummary::measured(&summary, TSTAT_ORDERS),
            analytic_tstats: TstatSummary::analytic(&analytic_cost, &analytic_impact, TSTAT_ORDERS),
            analytic_cost,
            analytic_impact,
            warnings: cfg.params.warnings(),
        }
    }
}

/// Simulated metrics of every order plus their summary.
#[derive(Debug, Clone)]
pub struct BatchRun {
    pub metrics: Vec<OrderMetrics>,
    pub report: BatchReport,
}

pub fn run_batch(cfg: &ExperimentConfig) -> Result<BatchRun> {
    cfg.validate()?;
    let metrics = OrderSimulator::from_config(cfg)?.run(cfg.n_paths)?;
    let report = BatchReport::new(cfg, &metrics);
    Ok(BatchRun { metrics, report })
}

/// Per-order metrics as CSV, one row per order.
pub fn write_metrics_csv<W: std::io::Write>(writer: W, metrics: &[OrderMetrics]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "path",
        "cost_arrival",
        "cost_linear_part",
        "cost_impact_part",
        "cost_noise_part",
        "cost_to_twap",
        "impact_total",
        "impact_weighted",
        "executed_qty",
    ])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for (i, m) in metrics.iter().enumerate() {
        w.write_record([
            i.to_string(),
            m.cost_arrival.to_string(),
            opt(m.cost_linear_part),
            opt(m.cost_impact_part),
            opt(m.cost_noise_part),
            m.cost_to_twap.to_string(),
            m.impact_total.to_string(),
            m.impact_weighted.to_string(),
            m.executed_qty.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
