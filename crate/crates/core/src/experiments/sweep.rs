//! Signal-to-noise of each estimator as both timescales are scaled together.

use serde::{Deserialize, Serialize};

use super::batch::{run_batch, BatchSummaries, TstatSummary};
use super::config::ExperimentConfig;
use crate::error::Result;

/// Per-order `mean / sd` of each metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSnr {
    pub cost_arrival: f64,
    pub cost_to_twap: f64,
    pub impact_total: f64,
    pub impact_weighted: f64,
}

impl MetricSnr {
    fn from_summary(s: &BatchSummaries) -> Self {
        Self {
            cost_arrival: s.cost_arrival.mean / s.cost_arrival.sd,
            cost_to_twap: s.cost_to_twap.mean / s.cost_to_twap.sd,
            impact_total: s.impact_total.mean / s.impact_total.sd,
            impact_weighted: s.impact_weighted.mean / s.impact_weighted.sd,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub factor: f64,
    pub tau_m: f64,
    pub tau_q: f64,
    pub snr: MetricSnr,
    /// t-statistics at the reference order count.
    pub measured: TstatSummary,
    pub analytic: TstatSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n_paths: usize,
    pub conditioned: bool,
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

impl SweepReport {
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let kinds = [
            "linear_naive",
            "linear_enhanced",
            "impact_cost_naive",
            "impact_naive",
            "impact_weighted",
        ];
        let mut header = vec!["factor".to_string(), "tau_m".into(), "tau_q".into()];
        for m in [
            "cost_arrival",
            "cost_to_twap",
            "impact_total",
            "impact_weighted",
        ] {
            header.push(format!("snr_{m}"));
        }
        for k in kinds {
            header.push(format!("t_{k}"));
            header.push(format!("t_{k}_analytic"));
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let pairs = [
                (r.measured.linear_naive, r.analytic.linear_naive),
                (r.measured.linear_enhanced, r.analytic.linear_enhanced),
                (r.measured.impact_cost_naive, r.analytic.impact_cost_naive),
                (r.measured.impact_naive, r.analytic.impact_naive),
                (r.measured.impact_weighted, r.analytic.impact_weighted),
            ];
            let mut rec = vec![
                r.factor.to_string(),
                r.tau_m.to_string(),
                r.tau_q.to_string(),
            ];
            for v in [
                r.snr.cost_arrival,
                r.snr.cost_to_twap,
                r.snr.impact_total,
                r.snr.impact_weighted,
            ] {
                rec.push(v.to_string());
            }
            for (m, a) in pairs {
                rec.push(m.to_string());
                rec.push(a.to_string());
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One batch of `cfg.n_paths` orders per sweep factor.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for factor in cfg.sweep_factors() {
        let params = cfg.params.with_scaled_timescales(factor);
        let scaled = ExperimentConfig {
            params,
            ..cfg.clone()
        };
        let report = run_batch(&scaled)?.report;
        warnings.extend(
            report
                .warnings
                .iter()
                .map(|w| format!("factor {factor}: {w}")),
        );
        rows.push(SweepRow {
            factor,
            tau_m: params.tau_m,
            tau_q: params.tau_q,
            snr: MetricSnr::from_summary(&report.summary),
            measured: report.tstats,
            analytic: report.analytic_tstats,
        });
    }
    Ok(SweepReport {
        n_paths: cfg.n_paths,
        conditioned: cfg.conditioned,
        rows,
        warnings,
    })
}
