//! Fill-report ingestion against direct simulation.

use impactlab::experiments::OrderSimulator;
use impactlab::ingest::{
    metrics_from_records, read_fill_records, write_fill_records, FillRecord, IngestParams,
};
use impactlab::model::{PricePath, RatePath};
use impactlab::{ExperimentConfig, SimGrid, WeightNormalization};

/// One record per grid interval, reporting the traded quantity and its VWAP
/// the way a broker would, plus a closing record at the horizon.
fn broker_report(path: &RatePath, prices: &PricePath, grid: &SimGrid) -> Vec<FillRecord> {
    let n = grid.n_steps;
    let mut out: Vec<FillRecord> = (0..n)
        .map(|k| {
            let (q0, q1) = (path.q[k], path.q[k + 1]);
            let qty = 0.5 * grid.dt * (q0 + q1);
            let vwap = 0.5 * grid.dt * (prices.fill[k] * q0 + prices.fill[k + 1] * q1) / qty;
            FillRecord {
                time: grid.time(k),
                signed_qty: qty,
                fill_price: vwap,
                mid_price: prices.mid[k],
            }
        })
        .collect();
    out.push(FillRecord {
        time: grid.time(n),
        signed_qty: 0.0,
        fill_price: prices.fill[n],
        mid_price: prices.mid[n],
    });
    out
}

#[test]
fn broker_report_reproduces_simulated_metrics() {
    let cfg = ExperimentConfig {
        weight_normalization: WeightNormalization::PerPath,
        ..Default::default()
    };
    let sim = OrderSimulator::from_config(&cfg).unwrap();
    let p = cfg.params;
    let ingest = IngestParams {
        q_total: p.q_total,
        horizon: p.horizon,
        tau_m: p.tau_m,
        point_value: p.point_value,
    };
    for i in 0..20 {
        let (path, prices) = sim.simulate(i).unwrap();
        let direct = sim.metrics(i).unwrap();
        let records = broker_report(&path, &prices, &cfg.grid);

        let mut csv = Vec::new();
        write_fill_records(&mut csv, &records).unwrap();
        let parsed = read_fill_records(csv.as_slice()).unwrap();
        assert_eq!(parsed, records);

        let m = metrics_from_records(&parsed, &ingest, &cfg.grid).unwrap();
        let cost_scale = p.point_value * p.q_total * 50.0;
        assert!((m.executed_qty - direct.executed_qty).abs() < 1e-8 * p.q_total);
        assert!(
            (m.cost_arrival - direct.cost_arrival).abs() < 1e-6 * cost_scale,
            "order {i}"
        );
        assert!(
            (m.cost_to_twap - direct.cost_to_twap).abs() < 1e-6 * cost_scale,
            "order {i}"
        );
        assert!((m.impact_total - direct.impact_total).abs() < 1e-9);
        assert!(
            (m.impact_weighted - direct.impact_weighted).abs()
                <= 0.005 * direct.impact_weighted.abs(),
            "order {i}: {} vs {}",
            m.impact_weighted,
            direct.impact_weighted
        );
    }
}

#[test]
fn coarse_reports_are_accepted() {
    // ten equal child orders, mid drifting up a point per slice
    let records: Vec<FillRecord> = (0..10)
        .map(|k| FillRecord {
            time: 39.0 * k as f64,
            signed_qty: 200.0,
            fill_price: 5000.5 + k as f64,
            mid_price: 5000.0 + k as f64,
        })
        .collect();
    let ingest = IngestParams {
        q_total: 2000.0,
        horizon: 390.0,
        tau_m: 39.0,
        point_value: 50.0,
    };
    let m = metrics_from_records(&records, &ingest, &SimGrid::default()).unwrap();
    // 50 * 200 * sum(0.5 + k) = 50 * 200 * 50
    assert!((m.cost_arrival - 500_000.0).abs() < 1e-6);
    // mid area: linear ramps 0..9 over 351 min, then 9 held for 39 min
    let area = 39.0 * (0..9).map(|k| k as f64 + 0.5).sum::<f64>() + 9.0 * 39.0;
    let expected = 500_000.0 - 50.0 * 2000.0 / 390.0 * area;
    assert!(
        (m.cost_to_twap - expected).abs() < 1e-6,
        "{} vs {expected}",
        m.cost_to_twap
    );
    assert_eq!(m.impact_total, 9.0);
    assert!(m.impact_weighted > 0.0);
}
