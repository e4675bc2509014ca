//! Deterministic sample statistics.

use serde::{Deserialize, Serialize};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Sample mean and standard deviation of one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMoments {
    pub n: usize,
    pub mean: f64,
    /// Unbiased (n - 1) standard deviation; zero when `n < 2`.
    pub sd: f64,
    /// Sample kurtosis `m4 / m2^2` (3 for Gaussian data); NaN when undefined.
    pub kurtosis: f64,
}

impl SampleMoments {
    /// Two-pass moments, summed in slice order.
    pub fn from_slice(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                n,
                mean: f64::NAN,
                sd: f64::NAN,
                kurtosis: f64::NAN,
            };
        }
        let mean = compensated_sum(values.iter().copied()) / n as f64;
        if n < 2 {
            return Self {
                n,
                mean,
                sd: 0.0,
                kurtosis: f64::NAN,
            };
        }
        let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
        let s4 = compensated_sum(values.iter().map(|v| (v - mean).powi(4)));
        let m2 = ss / n as f64;
        let kurtosis = if m2 > 0.0 {
            s4 / n as f64 / (m2 * m2)
        } else {
            f64::NAN
        };
        Self {
            n,
            mean,
            sd: (ss / (n - 1) as f64).sqrt(),
            kurtosis,
        }
    }

    pub fn std_error(&self) -> f64 {
        self.sd / (self.n as f64).sqrt()
    }

    /// Large-sample standard error of the standard deviation,
    /// `sd * sqrt((kurtosis - 1) / (4 n))`. Reduces to `sd / sqrt(2 n)` for
    /// Gaussian data; heavy tails widen it.
    pub fn sd_std_error(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        if !self.kurtosis.is_finite() {
            return 0.0;
        }
        self.sd * ((self.kurtosis - 1.0).max(0.0) / (4.0 * self.n as f64)).sqrt()
    }
}

/// Pearson correlation of two equally long samples.
pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let mx = SampleMoments::from_slice(x).mean;
    let my = SampleMoments::from_slice(y).mean;
    let sxy = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)));
    let sxx = compensated_sum(x.iter().map(|a| (a - mx) * (a - mx)));
    let syy = compensated_sum(y.iter().map(|b| (b - my) * (b - my)));
    sxy / (sxx * syy).sqrt()
}
