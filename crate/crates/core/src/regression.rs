//! Ordinary least squares of per-contract slippage on order size.

use serde::{Deserialize, Serialize};

use crate::analytics::DesignCoeffs;
use crate::error::{check_len, Error, Result};
use crate::stats::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub intercept: f64,
    pub slope: f64,
    pub intercept_se: f64,
    pub slope_se: f64,
    /// `None` when the corresponding standard error is zero.
    pub intercept_t: Option<f64>,
    pub slope_t: Option<f64>,
    pub n_obs: usize,
    pub r_squared: f64,
}

/// OLS with intercept and homoskedastic standard errors (`n - 2` dof).
pub fn ols_fit(x: &[f64], y: &[f64]) -> Result<RegressionFit> {
    check_len("response", x.len(), y.len())?;
    let n = x.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 observations, got {n}"
        )));
    }
    let nf = n as f64;
    let x_mean = compensated_sum(x.iter().copied()) / nf;
    let y_mean = compensated_sum(y.iter().copied()) / nf;
    let sxx = compensated_sum(x.iter().map(|v| (v - x_mean) * (v - x_mean)));
    let scale = compensated_sum(x.iter().map(|v| v * v));
    if !(sxx > 1e-14 * scale) {
        return Err(Error::CollinearDesign);
    }
    let sxy = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - x_mean) * (b - y_mean)));
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;

    let sse = compensated_sum(x.iter().zip(y).map(|(a, b)| {
        let e = b - intercept - slope * a;
        e * e
    }));
    let sst = compensated_sum(y.iter().map(|b| (b - y_mean) * (b - y_mean)));
    let s2 = sse / (nf - 2.0);
    let slope_se = (s2 / sxx).sqrt();
    let intercept_se = (s2 * (1.0 / nf + x_mean * x_mean / sxx)).sqrt();
    let ratio = |c: f64, se: f64| (se > 0.0).then(|| c / se);
    Ok(RegressionFit {
        intercept,
        slope,
        intercept_se,
        slope_se,
        intercept_t: ratio(intercept, intercept_se),
        slope_t: ratio(slope, slope_se),
        n_obs: n,
        r_squared: if sst > 0.0 { 1.0 - sse / sst } else { 1.0 },
    })
}

/// Broker parameters implied by a slippage regression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamEstimates {
    pub a_hat: f64,
    pub a_se: f64,
    pub lambda_hat: f64,
    pub lambda_se: f64,
}

/// Maps intercept and slope back to `a` and `lambda` through the design
/// coefficients. The response must be in points per contract.
pub fn recover_params(fit: &RegressionFit, coeffs: &DesignCoeffs) -> Result<ParamEstimates> {
    if !(coeffs.phi1 > 0.0 && coeffs.phi2 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "design coefficients must be positive, got phi1 = {}, phi2 = {}",
            coeffs.phi1, coeffs.phi2
        )));
    }
    Ok(ParamEstimates {
        a_hat: fit.intercept / coeffs.phi1,
        a_se: fit.intercept_se / coeffs.phi1,
        lambda_hat: fit.slope / coeffs.phi2,
        lambda_se: fit.slope_se / coeffs.phi2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::regression_design_coeffs;
    use crate::params::ModelParams;
    use proptest::prelude::*;

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 2.0, 5.0, 7.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 + 3.0 * v).collect();
        let fit = ols_fit(&x, &y).unwrap();
        assert!((fit.intercept - 2.0).abs() < 1e-12);
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!(fit.slope_se < 1e-6);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_small_fit() {
        // x = 0..4, y = (1, 3, 2, 5): slope 1.1, intercept 1.1, SSE 2.7
        let fit = ols_fit(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 2.0, 5.0]).unwrap();
        assert!((fit.slope - 1.1).abs() < 1e-12);
        assert!((fit.intercept - 1.1).abs() < 1e-12);
        let s2 = 2.7 / 2.0;
        assert!((fit.slope_se - (s2 / 5.0f64).sqrt()).abs() < 1e-12);
        assert!((fit.intercept_se - (s2 * (0.25 + 2.25 / 5.0f64)).sqrt()).abs() < 1e-12);
        assert_eq!(fit.n_obs, 4);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            ols_fit(&[2.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]),
            Err(Error::CollinearDesign)
        ));
        assert!(ols_fit(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(matches!(
            ols_fit(&[1.0, 2.0, 3.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn noiseless_recovery() {
        let p = ModelParams::default();
        let d = regression_design_coeffs(&p);
        let qs = [1000.0, 1500.0, 2000.0, 3000.0, 4000.0];
        let y: Vec<f64> = qs
            .iter()
            .map(|q| p.a * d.phi1 + p.lambda * d.phi2 * q)
            .collect();
        let est = recover_params(&ols_fit(&qs, &y).unwrap(), &d).unwrap();
        assert!((est.a_hat - 0.5).abs() < 1e-9);
        assert!((est.lambda_hat - 0.0075).abs() < 1e-12);

        let bad = DesignCoeffs {
            phi1: 1.0,
            phi2: 0.0,
        };
        assert!(recover_params(&ols_fit(&qs, &y).unwrap(), &bad).is_err());
    }

    proptest! {
        #[test]
        fn normal_equations_and_shift(
            pts in prop::collection::vec((-100.0f64..100.0, -50.0f64..50.0), 3..40),
            shift in -1e3f64..1e3,
        ) {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
            let mean = x.iter().sum::<f64>() / x.len() as f64;
            prop_assume!(x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() > 1e-3);
            let fit = ols_fit(&x, &y).unwrap();
            let resid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - fit.intercept - fit.slope * a).collect();
            let scale = y.iter().map(|v| v.abs()).sum::<f64>().max(1.0) * x.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
            prop_assert!(resid.iter().sum::<f64>().abs() < 1e-9 * scale);
            prop_assert!(resid.iter().zip(&x).map(|(e, a)| e * a).sum::<f64>().abs() < 1e-9 * scale);

            let shifted: Vec<f64> = y.iter().map(|v| v + shift).collect();
            let g = ols_fit(&x, &shifted).unwrap();
            prop_assert!((g.intercept - fit.intercept - shift).abs() < 1e-8 * (1.0 + shift.abs()));
            prop_assert!((g.slope - fit.slope).abs() < 1e-9 * (1.0 + fit.slope.abs()));
        }
    }
}
