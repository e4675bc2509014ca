//! Trading-rate paths, transient impact and price paths.
//!
//! The trading rate is a stationary Ornstein-Uhlenbeck process around the
//! TWAP rate `Q/T`, sampled with its exact Gaussian transition. Impact is the
//! exponentially decaying integral of past trading, and the mid price adds an
//! independent Brownian motion on top of it.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::params::{sign, ModelParams, SimGrid, SpreadSide};

/// Mean and variance of the stationary trading rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateMoments {
    pub mean: f64,
    pub variance: f64,
}

pub fn stationary_rate_moments(params: &ModelParams) -> RateMoments {
    let twap = params.twap_rate();
    RateMoments {
        mean: twap,
        variance: twap * twap * params.sigma_q * params.sigma_q * params.tau_q / 2.0,
    }
}

/// Exact variance of `Q_T = int_0^T q_t dt` under the stationary rate law.
pub fn var_terminal_quantity(params: &ModelParams) -> f64 {
    let v = stationary_rate_moments(params).variance;
    let (t, tq) = (params.horizon, params.tau_q);
    v * 2.0 * tq * (t - tq * (1.0 - (-t / tq).exp()))
}

/// `Cov(q_t, Q_T)` for `0 <= t <= horizon`.
pub fn cov_q_qt(t: f64, params: &ModelParams) -> Result<f64> {
    if !(0.0..=params.horizon).contains(&t) {
        return Err(Error::OutOfRange(format!(
            "t = {t} outside [0, {}]",
            params.horizon
        )));
    }
    let v = stationary_rate_moments(params).variance;
    let tq = params.tau_q;
    Ok(v * tq * (2.0 - (-t / tq).exp() - (-(params.horizon - t) / tq).exp()))
}

/// One-step exact OU transition over `dt`:
/// `q' = mean + (q - mean) * decay + sqrt(noise_variance) * z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuTransition {
    pub mean: f64,
    pub decay: f64,
    pub noise_variance: f64,
}

impl OuTransition {
    pub fn new(params: &ModelParams, dt: f64) -> Self {
        let m = stationary_rate_moments(params);
        let decay = (-dt / params.tau_q).exp();
        Self {
            mean: m.mean,
            decay,
            noise_variance: m.variance * (1.0 - decay * decay),
        }
    }

    pub fn step(&self, q: f64, z: f64) -> f64 {
        self.mean + (q - self.mean) * self.decay + self.noise_variance.sqrt() * z
    }
}

/// Trading rate and cumulative quantity on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePath {
    pub q: Vec<f64>,
    pub q_cum: Vec<f64>,
    pub conditioned: bool,
}

impl RatePath {
    /// Builds the path from rates, integrating them by trapezoid.
    pub fn from_rates(q: Vec<f64>, grid: &SimGrid) -> Result<Self> {
        check_len("rate path", grid.n_points(), q.len())?;
        let q_cum = cumulative_trapezoid(&q, grid.dt);
        Ok(Self {
            q,
            q_cum,
            conditioned: false,
        })
    }

    /// Constant TWAP rate.
    pub fn twap(params: &ModelParams, grid: &SimGrid) -> Self {
        let q = vec![params.twap_rate(); grid.n_points()];
        let q_cum = cumulative_trapezoid(&q, grid.dt);
        Self {
            q,
            q_cum,
            conditioned: false,
        }
    }

    pub fn executed(&self) -> f64 {
        *self.q_cum.last().unwrap_or(&0.0)
    }
}

fn cumulative_trapezoid(q: &[f64], dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(q.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in q.windows(2) {
        acc += 0.5 * (w[0] + w[1]) * dt;
        out.push(acc);
    }
    out
}

pub fn simulate_rate_path<R: Rng + ?Sized>(
    params: &ModelParams,
    grid: &SimGrid,
    rng: &mut R,
) -> RatePath {
    let step = OuTransition::new(params, grid.dt);
    let stationary = stationary_rate_moments(params);
    let mut q = Vec::with_capacity(grid.n_points());
    let z0: f64 = rng.sample(StandardNormal);
    let mut current = stationary.mean + stationary.variance.sqrt() * z0;
    q.push(current);
    for _ in 0..grid.n_steps {
        let z: f64 = rng.sample(StandardNormal);
        current = step.step(current, z);
        q.push(current);
    }
    let q_cum = cumulative_trapezoid(&q, grid.dt);
    RatePath {
        q,
        q_cum,
        conditioned: false,
    }
}

/// Gaussian conditioning of a grid rate path on its trapezoid total.
///
/// The grid rates are jointly Gaussian with covariance `V rho^|i-j|`, and the
/// trapezoid total `S = sum_j w_j q_j` is linear in them, so
/// `q | S = Q` is `q + gain * (Q - S)` with `gain_i = Cov(q_i, S) / Var(S)`.
/// The covariances come from two exponential recursions, so building the
/// conditioner is O(n).
#[derive(Debug, Clone)]
pub struct TerminalConditioner {
    gain: Vec<f64>,
    var_total: f64,
    target: f64,
}

impl TerminalConditioner {
    pub fn new(params: &ModelParams, grid: &SimGrid) -> Self {
        let n = grid.n_points();
        let v = stationary_rate_moments(params).variance;
        let rho = (-grid.dt / params.tau_q).exp();
        let w: Vec<f64> = (0..n)
            .map(|i| {
                if i == 0 || i == n - 1 {
                    0.5 * grid.dt
                } else {
                    grid.dt
                }
            })
            .collect();

        let mut forward = vec![0.0; n];
        let mut acc = 0.0;
        for i in 0..n {
            acc = acc * rho + w[i];
            forward[i] = acc;
        }
        let mut cov = vec![0.0; n];
        acc = 0.0;
        for i in (0..n).rev() {
            acc = acc * rho + w[i];
            cov[i] = v * (forward[i] + acc - w[i]);
        }
        let var_total: f64 = w.iter().zip(&cov).map(|(a, b)| a * b).sum();
        let gain = if var_total > 0.0 {
            cov.iter().map(|c| c / var_total).collect()
        } else {
            vec![0.0; n]
        };
        Self {
            gain,
            var_total,
            target: params.q_total,
        }
    }

    /// Variance of the trapezoid total on this grid.
    pub fn var_total(&self) -> f64 {
        self.var_total
    }

    pub fn gain(&self) -> &[f64] {
        &self.gain
    }

    pub fn apply(&self, path: &RatePath, grid: &SimGrid) -> Result<RatePath> {
        check_len("rate path", self.gain.len(), path.q.len())?;
        if path.conditioned {
            return Ok(path.clone());
        }
        let residual = self.target - path.executed();
        if self.var_total <= 0.0 {
            if residual.abs() <= 1e-6 * self.target.abs().max(1.0) {
                return Ok(RatePath {
                    conditioned: true,
                    ..path.clone()
                });
            }
            return Err(Error::DegenerateConditioning);
        }
        let q: Vec<f64> = path
            .q
            .iter()
            .zip(&self.gain)
            .map(|(q, k)| q + k * residual)
            .collect();
        let q_cum = cumulative_trapezoid(&q, grid.dt);
        Ok(RatePath {
            q,
            q_cum,
            conditioned: true,
        })
    }
}

/// Conditions an unconditional path on executing exactly `q_total` by `horizon`.
pub fn condition_on_terminal(
    path: &RatePath,
    params: &ModelParams,
    grid: &SimGrid,
) -> Result<RatePath> {
    TerminalConditioner::new(params, grid).apply(path, grid)
}

/// `J_i ~ int_0^{t_i} exp(-(t_i - s)/tau) x_s ds`, by the exponentially
/// decayed trapezoid `J_{i+1} = e J_i + (x_i e + x_{i+1}) dt / 2`.
pub fn decayed_integral(x: &[f64], dt: f64, tau: f64) -> Vec<f64> {
    let e = (-dt / tau).exp();
    let mut out = Vec::with_capacity(x.len());
    if x.is_empty() {
        return out;
    }
    let mut j = 0.0;
    out.push(j);
    for w in x.windows(2) {
        j = e * j + (w[0] * e + w[1]) * 0.5 * dt;
        out.push(j);
    }
    out
}

/// Transient impact `lambda * J_t` in points.
pub fn propagate_impact(path: &RatePath, params: &ModelParams, grid: &SimGrid) -> Vec<f64> {
    let mut j = decayed_integral(&path.q, grid.dt, params.tau_m);
    for v in &mut j {
        *v *= params.lambda;
    }
    j
}

/// Standard Brownian motion on the grid, `W_0 = 0`.
pub fn brownian_path<R: Rng + ?Sized>(grid: &SimGrid, rng: &mut R) -> Vec<f64> {
    let sd = grid.dt.sqrt();
    let mut w = Vec::with_capacity(grid.n_points());
    let mut acc = 0.0;
    w.push(acc);
    for _ in 0..grid.n_steps {
        let z: f64 = rng.sample(StandardNormal);
        acc += sd * z;
        w.push(acc);
    }
    w
}

/// Impact, mid and fill prices for one order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricePath {
    pub impact: Vec<f64>,
    pub mid: Vec<f64>,
    pub fill: Vec<f64>,
}

impl PricePath {
    /// Builds prices from a rate path, its impact, and a standard Brownian
    /// path `brownian` (scaled by `sigma_m` here).
    pub fn from_components(
        path: &RatePath,
        impact: Vec<f64>,
        brownian: &[f64],
        params: &ModelParams,
    ) -> Result<Self> {
        let n = path.q.len();
        check_len("impact", n, impact.len())?;
        check_len("brownian path", n, brownian.len())?;
        let mid: Vec<f64> = impact
            .iter()
            .zip(brownian)
            .map(|(i, w)| params.m0 + i + params.sigma_m * w)
            .collect();
        let half_cost = params.a * params.spread;
        let fill = mid
            .iter()
            .zip(&path.q)
            .map(|(m, q)| {
                let side = match params.spread_side {
                    SpreadSide::Order => params.order_sign(),
                    SpreadSide::Rate => sign(*q),
                };
                m + half_cost * side
            })
            .collect();
        Ok(Self { impact, mid, fill })
    }

    /// Market-noise component `mid - m0 - impact`.
    pub fn noise(&self, m0: f64) -> Vec<f64> {
        self.mid
            .iter()
            .zip(&self.impact)
            .map(|(m, i)| m - m0 - i)
            .collect()
    }
}

pub fn simulate_mid_and_fills<R: Rng + ?Sized>(
    path: &RatePath,
    impact: Vec<f64>,
    params: &ModelParams,
    grid: &SimGrid,
    rng: &mut R,
) -> Result<PricePath> {
    check_len("rate path", grid.n_points(), path.q.len())?;
    let w = brownian_path(grid, rng);
    PricePath::from_components(path, impact, &w, params)
}
