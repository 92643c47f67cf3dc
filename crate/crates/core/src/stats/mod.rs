//! Summary statistics, the one-sample t-test for the mean and the
//! chi-square test for the variance, all two-sided.

pub mod special;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use special::{chisq_cdf, chisq_quantile, t_quantile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub stdev: f64,
    pub se_mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub df: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub null_value: f64,
    pub alpha: f64,
}

/// Chi-square variance test. `test.ci_*` bound the variance; the null value
/// is the hypothesized standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceTest {
    #[serde(flatten)]
    pub test: TestResult,
    pub stdev_ci_lower: f64,
    pub stdev_ci_upper: f64,
}

pub fn summarize(values: &[f64]) -> Result<StatSummary> {
    if values.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 values, got {}",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite value {v}")));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    let stdev = (ss / (n - 1) as f64).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    Ok(StatSummary {
        n,
        mean,
        stdev,
        se_mean: stdev / (n as f64).sqrt(),
        median,
        min: sorted[0],
        max: sorted[n - 1],
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must be in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// One-sample t-test of `H0: mu = mu0` with a `1 - alpha` CI for the mean.
pub fn t_test_mean(values: &[f64], mu0: f64, alpha: f64) -> Result<TestResult> {
    t_test_from_summary(&summarize(values)?, mu0, alpha)
}

/// The same test computed from `(n, mean, stdev)` alone.
pub fn t_test_from_summary(s: &StatSummary, mu0: f64, alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    if s.n < 2 {
        return Err(Error::InsufficientData("t-test needs at least 2 values".into()));
    }
    let se = s.stdev / (s.n as f64).sqrt();
    if se == 0.0 {
        return Err(Error::InsufficientVariance("sample has zero spread; t is undefined".into()));
    }
    let df = (s.n - 1) as f64;
    let t = (s.mean - mu0) / se;
    let p = special::t_two_sided_p(t, df)?;
    let q = t_quantile(1.0 - alpha / 2.0, df)?;
    Ok(TestResult {
        statistic: t,
        df,
        p_value: p.clamp(0.0, 1.0),
        ci_lower: s.mean - q * se,
        ci_upper: s.mean + q * se,
        null_value: mu0,
        alpha,
    })
}

/// Chi-square test of `H0: sigma = sigma0` with CIs for variance and stdev.
pub fn variance_test(values: &[f64], sigma0: f64, alpha: f64) -> Result<VarianceTest> {
    variance_test_from_summary(&summarize(values)?, sigma0, alpha)
}

pub fn variance_test_from_summary(s: &StatSummary, sigma0: f64, alpha: f64) -> Result<VarianceTest> {
    check_alpha(alpha)?;
    if !(sigma0 > 0.0) || !sigma0.is_finite() {
        return Err(Error::invalid(format!("null standard deviation must be > 0, got {sigma0}")));
    }
    if s.n < 2 {
        return Err(Error::InsufficientData("variance test needs at least 2 values".into()));
    }
    if s.stdev == 0.0 {
        return Err(Error::InsufficientVariance(
            "sample has zero spread; the variance test is degenerate".into(),
        ));
    }
    let df = (s.n - 1) as f64;
    let scaled = df * s.stdev * s.stdev;
    let chi2 = scaled / (sigma0 * sigma0);
    let lower_tail = chisq_cdf(chi2, df)?;
    let upper_tail = special::chisq_sf(chi2, df)?;
    let p = (2.0 * lower_tail.min(upper_tail)).clamp(0.0, 1.0);
    let var_lo = scaled / chisq_quantile(1.0 - alpha / 2.0, df)?;
    let var_hi = scaled / chisq_quantile(alpha / 2.0, df)?;
    Ok(VarianceTest {
        test: TestResult {
            statistic: chi2,
            df,
            p_value: p,
            ci_lower: var_lo,
            ci_upper: var_hi,
            null_value: sigma0,
            alpha,
        },
        stdev_ci_lower: var_lo.sqrt(),
        stdev_ci_upper: var_hi.sqrt(),
    })
}
