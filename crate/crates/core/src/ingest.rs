//! Transaction-cost ingestion of broker fill reports.
//!
//! One CSV file holds one order:
//!
//! ```text
//! time_min,signed_qty,fill_price,mid_price
//! 0.0,1000,5000.5,5000.0
//! 195.0,1000,5000.5,5000.0
//! ```
//!
//! Record `k` reports `signed_qty` contracts executed at a constant rate over
//! `[time_k, time_{k+1})` (the last record runs to the horizon) at
//! `fill_price`, and the mid observed at `time_k`. The first record must sit
//! at the order start so the arrival mid is known.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{normalize_per_path, weighted_impact, OrderMetrics};
use crate::model::PricePath;
use crate::params::SimGrid;
use crate::stats::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FillRecord {
    #[serde(rename = "time_min")]
    pub time: f64,
    pub signed_qty: f64,
    pub fill_price: f64,
    pub mid_price: f64,
}

/// The constants needed to evaluate an observed order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IngestParams {
    pub q_total: f64,
    pub horizon: f64,
    pub tau_m: f64,
    pub point_value: f64,
}

pub fn read_fill_records<R: Read>(reader: R) -> Result<Vec<FillRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let expected = ["time_min", "signed_qty", "fill_price", "mid_price"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::InvalidRecords(format!(
            "expected header {}, found {}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

pub fn write_fill_records<W: Write>(writer: W, records: &[FillRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn validate_records(fills: &[FillRecord], horizon: f64) -> Result<()> {
    if fills.is_empty() {
        return Err(Error::NoRecords);
    }
    if fills.len() < 2 {
        return Err(Error::InvalidRecords(
            "at least two records are required".into(),
        ));
    }
    let tol = 1e-9 * horizon;
    if fills[0].time.abs() > tol {
        return Err(Error::InvalidRecords(format!(
            "first record must be at the order start, found time {}",
            fills[0].time
        )));
    }
    for r in fills {
        let values = [r.time, r.signed_qty, r.fill_price, r.mid_price];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidRecords("non-finite value".into()));
        }
        if r.time < -tol || r.time > horizon + tol {
            return Err(Error::InvalidRecords(format!(
                "time {} outside [0, {horizon}]",
                r.time
            )));
        }
    }
    if fills.windows(2).any(|w| w[1].time <= w[0].time) {
        return Err(Error::InvalidRecords(
            "times must be strictly increasing".into(),
        ));
    }
    let last = fills[fills.len() - 1];
    if horizon - last.time <= tol && last.signed_qty != 0.0 {
        return Err(Error::InvalidRecords(
            "a record at the horizon cannot carry quantity".into(),
        ));
    }
    Ok(())
}

/// Quantity traded in each grid interval, assuming each record trades at a
/// constant rate until the next record (the last one until the horizon).
fn interval_quantities(fills: &[FillRecord], horizon: f64, grid: &SimGrid) -> Vec<f64> {
    let mut out = vec![0.0; grid.n_steps];
    for (k, rec) in fills.iter().enumerate() {
        let end = fills.get(k + 1).map_or(horizon, |r| r.time);
        let span = end - rec.time;
        if span <= 0.0 || rec.signed_qty == 0.0 {
            continue;
        }
        let rate = rec.signed_qty / span;
        let first = ((rec.time / grid.dt).floor() as usize).min(grid.n_steps - 1);
        for (i, cell) in out.iter_mut().enumerate().skip(first) {
            let (lo, hi) = (grid.time(i), grid.time(i + 1));
            if lo >= end {
                break;
            }
            let overlap = hi.min(end) - lo.max(rec.time);
            if overlap > 0.0 {
                *cell += rate * overlap;
            }
        }
    }
    out
}

/// Record mids on the grid: linear between records, held after the last.
fn grid_mids(fills: &[FillRecord], grid: &SimGrid) -> Vec<f64> {
    let tol = 1e-9 * grid.dt;
    let mut k = 0;
    (0..grid.n_points())
        .map(|i| {
            let t = grid.time(i);
            while k + 1 < fills.len() && fills[k + 1].time <= t + tol {
                k += 1;
            }
            let rec = fills[k];
            match fills.get(k + 1) {
                Some(next) => {
                    let w = ((t - rec.time) / (next.time - rec.time)).clamp(0.0, 1.0);
                    rec.mid_price + w * (next.mid_price - rec.mid_price)
                }
                None => rec.mid_price,
            }
        })
        .collect()
}

/// Impact content at interval midpoints for a rate that is constant on each
/// grid interval: `r_i - (J_i + J_{i+1}) / (2 tau_m)` with `J` the exactly
/// integrated decayed quantity.
fn interval_impact_content(quantities: &[f64], tau_m: f64, dt: f64) -> Vec<f64> {
    let e = (-dt / tau_m).exp();
    let gain = -tau_m * (-dt / tau_m).exp_m1();
    let mut j = 0.0;
    quantities
        .iter()
        .map(|qty| {
            let rate = qty / dt;
            let next = e * j + rate * gain;
            let u = rate - 0.5 * (j + next) / tau_m;
            j = next;
            u
        })
        .collect()
}

/// `int_0^T (mid - m0) dt` for the record mids: linear between records,
/// held after the last one.
fn mid_area(fills: &[FillRecord], m0: f64, horizon: f64) -> f64 {
    let mut area = 0.0;
    for w in fills.windows(2) {
        area += 0.5 * (w[0].mid_price + w[1].mid_price - 2.0 * m0) * (w[1].time - w[0].time);
    }
    let last = fills[fills.len() - 1];
    area + (last.mid_price - m0) * (horizon - last.time)
}

/// Evaluates the arrival cost, cost to TWAP, total impact and weighted impact
/// of one observed order.
///
/// Costs are exact sums over the records. The weighted impact is evaluated
/// on `grid`: per-interval traded quantities give the impact content, mids
/// are interpolated, and weights are normalized per order since the rate
/// dynamics are unknown.
pub fn metrics_from_records(
    fills: &[FillRecord],
    params: &IngestParams,
    grid: &SimGrid,
) -> Result<OrderMetrics> {
    if !(params.horizon > 0.0 && params.tau_m > 0.0 && params.point_value > 0.0) {
        return Err(Error::InvalidParams(
            "horizon, tau_m and point_value must be > 0".into(),
        ));
    }
    grid.validate(params.horizon)?;
    validate_records(fills, params.horizon)?;
    let m0 = fills[0].mid_price;
    let pv = params.point_value;

    let cost_arrival =
        pv * compensated_sum(fills.iter().map(|r| r.signed_qty * (r.fill_price - m0)));
    let benchmark = pv * params.q_total / params.horizon * mid_area(fills, m0, params.horizon);

    let quantities = interval_quantities(fills, params.horizon, grid);
    let u = interval_impact_content(&quantities, params.tau_m, grid.dt);
    let weights = normalize_per_path(u, params.horizon, grid)?;
    let mid = grid_mids(fills, grid);
    let prices = PricePath {
        impact: vec![0.0; mid.len()],
        fill: mid.clone(),
        mid,
    };
    Ok(OrderMetrics {
        cost_arrival,
        cost_linear_part: None,
        cost_impact_part: None,
        cost_noise_part: None,
        cost_to_twap: cost_arrival - benchmark,
        impact_total: fills[fills.len() - 1].mid_price - m0,
        impact_weighted: weighted_impact(&prices, &weights)?,
        executed_qty: compensated_sum(fills.iter().map(|r| r.signed_qty)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ingest() -> IngestParams {
        IngestParams {
            q_total: 2000.0,
            horizon: 390.0,
            tau_m: 39.0,
            point_value: 50.0,
        }
    }

    #[test]
    fn two_record_constant_rate() {
        // 1000 contracts over each half of the order, mid pinned at 5000,
        // every fill half a point through the mid.
        let fills = [
            FillRecord {
                time: 0.0,
                signed_qty: 1000.0,
                fill_price: 5000.5,
                mid_price: 5000.0,
            },
            FillRecord {
                time: 195.0,
                signed_qty: 1000.0,
                fill_price: 5000.5,
                mid_price: 5000.0,
            },
        ];
        let m = metrics_from_records(&fills, &ingest(), &SimGrid::default()).unwrap();
        // 50 $/pt * 0.5 pt * 2000 contracts
        assert!((m.cost_arrival - 50_000.0).abs() < 1e-6);
        assert!((m.cost_to_twap - 50_000.0).abs() < 1e-6);
        assert_eq!(m.impact_total, 0.0);
        assert_eq!(m.impact_weighted, 0.0);
        assert!((m.executed_qty - 2000.0).abs() < 1e-9);
        assert!(m.cost_linear_part.is_none());
    }

    #[test]
    fn moving_mid_two_records() {
        // mid rises linearly 5000 -> 5002 over the first half, then holds.
        // rate is constant Q/T; fills = mid + 0.5 at record times.
        let fills = [
            FillRecord {
                time: 0.0,
                signed_qty: 1000.0,
                fill_price: 5000.5,
                mid_price: 5000.0,
            },
            FillRecord {
                time: 195.0,
                signed_qty: 1000.0,
                fill_price: 5002.5,
                mid_price: 5002.0,
            },
        ];
        let m = metrics_from_records(&fills, &ingest(), &SimGrid::default()).unwrap();
        let rate = 2000.0 / 390.0;
        // arrival: 50 * (0.5 * 1000 + 2.5 * 1000)
        assert!((m.cost_arrival - 150_000.0).abs() < 1e-6);
        // TWAP leg: 50 * rate * (area of mid - m0) = 50 * rate * (195 + 2 * 195)
        let twap_leg = 50.0 * rate * (0.5 * 195.0 * 2.0 + 2.0 * 195.0);
        assert!((m.cost_to_twap - (150_000.0 - twap_leg)).abs() < 1e-6);
        assert!((m.impact_total - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_records() {
        let g = SimGrid::default();
        assert!(matches!(
            metrics_from_records(&[], &ingest(), &g),
            Err(Error::NoRecords)
        ));
        let r = |t: f64| FillRecord {
            time: t,
            signed_qty: 10.0,
            fill_price: 1.0,
            mid_price: 1.0,
        };
        assert!(matches!(
            metrics_from_records(&[r(0.0)], &ingest(), &g),
            Err(Error::InvalidRecords(_))
        ));
        assert!(metrics_from_records(&[r(0.0), r(0.0)], &ingest(), &g).is_err());
        assert!(metrics_from_records(&[r(0.0), r(5.0), r(3.0)], &ingest(), &g).is_err());
        assert!(metrics_from_records(&[r(0.0), r(400.0)], &ingest(), &g).is_err());
        assert!(metrics_from_records(&[r(1.0), r(5.0)], &ingest(), &g).is_err());
        assert!(metrics_from_records(&[r(0.0), r(390.0)], &ingest(), &g).is_err());
    }

    #[test]
    fn csv_round_trip_and_header_check() {
        let recs = vec![
            FillRecord {
                time: 0.0,
                signed_qty: 3.0,
                fill_price: 10.5,
                mid_price: 10.0,
            },
            FillRecord {
                time: 1.5,
                signed_qty: -1.0,
                fill_price: 9.5,
                mid_price: 10.0,
            },
        ];
        let mut buf = Vec::new();
        write_fill_records(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("time_min,signed_qty,fill_price,mid_price\n"));
        assert_eq!(read_fill_records(buf.as_slice()).unwrap(), recs);

        let bad = "t,q,p,m\n0,1,2,3\n";
        assert!(matches!(
            read_fill_records(bad.as_bytes()),
            Err(Error::InvalidRecords(_))
        ));
        let junk = "time_min,signed_qty,fill_price,mid_price\n0,abc,2,3\n";
        assert!(read_fill_records(junk.as_bytes()).is_err());
    }
}
