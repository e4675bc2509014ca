//! Model constants and the simulation grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which direction the spread-capture charge follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SpreadSide {
    /// Every fill pays `a * s` in the direction of the parent order, so the
    /// linear cost is `a * s * Q_T`.
    #[default]
    Order,
    /// Fills pay `a * s * sign(q_t)`; momentary selling inside a buy order
    /// earns the spread back on the signed quantity.
    Rate,
}

/// Market, broker and impact constants for one order.
///
/// Units: prices in points, quantities in contracts, times in minutes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    pub m0: f64,
    pub q_total: f64,
    pub horizon: f64,
    pub tau_m: f64,
    pub tau_q: f64,
    pub a: f64,
    pub lambda: f64,
    pub sigma_m: f64,
    pub sigma_q: f64,
    pub spread: f64,
    pub point_value: f64,
    pub spread_side: SpreadSide,
}

impl Default for ModelParams {
    /// E-mini S&P calibration. `sigma_m` is set so that the mid moves by 1% of
    /// `m0` over the order, i.e. `sigma_m * sqrt(horizon) = 50` points.
    fn default() -> Self {
        let horizon = 390.0;
        let m0 = 5000.0;
        Self {
            m0,
            q_total: 2000.0,
            horizon,
            tau_m: 39.0,
            tau_q: 5.0,
            a: 0.5,
            lambda: 0.0075,
            sigma_m: 0.01 * m0 / f64::sqrt(horizon),
            sigma_q: 0.5,
            spread: 1.0,
            point_value: 50.0,
            spread_side: SpreadSide::Order,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let checks: [(bool, &str); 8] = [
            (self.horizon > 0.0, "horizon must be > 0"),
            (self.tau_m > 0.0, "tau_m must be > 0"),
            (self.tau_q > 0.0, "tau_q must be > 0"),
            (self.spread >= 0.0, "spread must be >= 0"),
            (self.sigma_m >= 0.0, "sigma_m must be >= 0"),
            (self.sigma_q >= 0.0, "sigma_q must be >= 0"),
            (self.lambda >= 0.0, "lambda must be >= 0"),
            (self.point_value > 0.0, "point_value must be > 0"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::InvalidParams(msg.to_string()));
            }
        }
        let all = [
            self.m0,
            self.q_total,
            self.horizon,
            self.tau_m,
            self.tau_q,
            self.a,
            self.lambda,
            self.sigma_m,
            self.sigma_q,
            self.spread,
            self.point_value,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("all values must be finite".into()));
        }
        Ok(())
    }

    /// Non-fatal diagnostics. The concentration-penalty correction of the
    /// expected impact cost changes sign once `horizon <= 2 (tau_m + tau_q)`.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.horizon <= 2.0 * (self.tau_m + self.tau_q) {
            out.push(format!(
                "horizon {} <= 2*(tau_m + tau_q) = {}; concentration penalty changes sign and the short-timescale expansions lose accuracy",
                self.horizon,
                2.0 * (self.tau_m + self.tau_q)
            ));
        }
        out
    }

    /// TWAP rate `Q / T`.
    pub fn twap_rate(&self) -> f64 {
        self.q_total / self.horizon
    }

    /// Direction of the parent order (+1 buy, -1 sell, 0 for an empty order).
    pub fn order_sign(&self) -> f64 {
        sign(self.q_total)
    }

    /// Same parameters with both timescales multiplied by `factor`.
    pub fn with_scaled_timescales(&self, factor: f64) -> Self {
        Self {
            tau_m: self.tau_m * factor,
            tau_q: self.tau_q * factor,
            ..*self
        }
    }
}

/// `sign` with `sign(0) = 0`.
pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Uniform time grid `t_i = i * dt`, `i = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimGrid {
    pub dt: f64,
    pub n_steps: usize,
}

impl Default for SimGrid {
    fn default() -> Self {
        Self {
            dt: 0.1,
            n_steps: 3900,
        }
    }
}

impl SimGrid {
    /// Grid with `n_steps` equal steps covering `horizon`.
    pub fn new(horizon: f64, n_steps: usize) -> Result<Self> {
        if n_steps < 2 {
            return Err(Error::InvalidGrid("n_steps must be >= 2".into()));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidGrid("horizon must be positive".into()));
        }
        Ok(Self {
            dt: horizon / n_steps as f64,
            n_steps,
        })
    }

    /// Grid with step close to `dt`, adjusted so the steps tile `horizon` exactly.
    pub fn with_step(horizon: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidGrid("dt must be positive".into()));
        }
        let n = (horizon / dt).round().max(2.0) as usize;
        Self::new(horizon, n)
    }

    pub fn validate(&self, horizon: f64) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidGrid("dt must be > 0".into()));
        }
        if self.n_steps < 2 {
            return Err(Error::InvalidGrid("n_steps must be >= 2".into()));
        }
        let covered = self.dt * self.n_steps as f64;
        if (covered - horizon).abs() > 1e-9 * horizon.abs().max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "n_steps * dt = {covered} does not match horizon {horizon}"
            )));
        }
        Ok(())
    }

    pub fn n_points(&self) -> usize {
        self.n_steps + 1
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_points()).map(|i| self.time(i)).collect()
    }

    /// Midpoints of the `n_steps` increments.
    pub fn midpoints(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_steps).map(move |i| (i as f64 + 0.5) * self.dt)
    }

    /// Trapezoid rule over grid values.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_points());
        let n = values.len();
        if n < 2 {
            return 0.0;
        }
        let inner: f64 = values[1..n - 1].iter().sum();
        self.dt * (inner + 0.5 * (values[0] + values[n - 1]))
    }

    /// Trapezoid rule over the pointwise product of two grid series.
    pub fn trapezoid_product(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        let n = x.len();
        if n < 2 {
            return 0.0;
        }
        let inner: f64 = x[1..n - 1]
            .iter()
            .zip(&y[1..n - 1])
            .map(|(a, b)| a * b)
            .sum();
        self.dt * (inner + 0.5 * (x[0] * y[0] + x[n - 1] * y[n - 1]))
    }
}
