//! Gamma and beta special functions behind the t and chi-square tests.

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
const TINY: f64 = 1e-300;

/// `ln Gamma(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    let t = x + 7.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma `P(a, x)` and its complement `Q(a, x)`.
pub fn gamma_pq(a: f64, x: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::invalid(format!("incomplete gamma needs a > 0, x >= 0 (a={a}, x={x})")));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let prefactor = (-x + a * x.ln() - ln_gamma(a)).exp();
    if x < a + 1.0 {
        // series: P = prefactor * sum x^n / (a (a+1) ... (a+n))
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                break;
            }
        }
        let p = (sum * prefactor).min(1.0);
        Ok((p, 1.0 - p))
    } else {
        // continued fraction for Q (modified Lentz)
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < EPS {
                break;
            }
        }
        let q = (prefactor * h).min(1.0);
        Ok((1.0 - q, q))
    }
}

/// Continued fraction for the incomplete beta (Numerical Recipes `betacf`).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`, with `y = 1 - x` supplied
/// separately so that either tail keeps full precision.
fn beta_inc_xy(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * y.ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, y) / b
    }
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn beta_inc(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!(
            "incomplete beta needs a, b > 0 and 0 <= x <= 1 (a={a}, b={b}, x={x})"
        )));
    }
    Ok(beta_inc_xy(a, b, x, 1.0 - x))
}

/// Inverse of `I_x(a, b)` in `x` by bisection.
pub fn beta_inc_inv(a: f64, b: f64, p: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("inverse incomplete beta: bad arguments (a={a}, b={b}, p={p})")));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_inc_xy(a, b, mid, 1.0 - mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_df(df: f64) -> Result<()> {
    if !(df > 0.0) || !df.is_finite() {
        return Err(Error::invalid(format!("degrees of freedom must be positive, got {df}")));
    }
    Ok(())
}

/// Two-sided tail `P(|T| >= |t|)` of Student's t.
pub fn t_two_sided_p(t: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    let t2 = t * t;
    Ok(beta_inc_xy(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2)))
}

/// CDF of Student's t with `df` degrees of freedom.
pub fn t_cdf(t: f64, df: f64) -> Result<f64> {
    let tail = 0.5 * t_two_sided_p(t, df)?;
    Ok(if t >= 0.0 { 1.0 - tail } else { tail })
}

fn t_pdf(t: f64, df: f64) -> f64 {
    let ln_norm = ln_gamma(0.5 * (df + 1.0))
        - ln_gamma(0.5 * df)
        - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_norm - 0.5 * (df + 1.0) * (1.0 + t * t / df).ln()).exp()
}

/// Quantile of Student's t: start from the inverse incomplete beta, then
/// polish with Newton steps on the CDF.
pub fn t_quantile(p: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("quantile probability must be in (0, 1), got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let two_tail = 2.0 * p.min(1.0 - p);
    let y = beta_inc_inv(0.5 * df, 0.5, two_tail)?;
    let mut t = (df * (1.0 - y) / y).sqrt();
    if p < 0.5 {
        t = -t;
    }
    for _ in 0..4 {
        let f = t_cdf(t, df)? - p;
        let step = f / t_pdf(t, df);
        if !step.is_finite() {
            break;
        }
        t -= step;
        if step.abs() < 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    Ok(t)
}

/// CDF of the chi-square distribution.
pub fn chisq_cdf(x: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if !(x >= 0.0) {
        return Err(Error::invalid(format!("chi-square argument must be >= 0, got {x}")));
    }
    Ok(gamma_pq(0.5 * df, 0.5 * x)?.0)
}

/// Upper tail `1 - F(x)` without cancellation.
pub fn chisq_sf(x: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if !(x >= 0.0) {
        return Err(Error::invalid(format!("chi-square argument must be >= 0, got {x}")));
    }
    Ok(gamma_pq(0.5 * df, 0.5 * x)?.1)
}

/// Quantile of the chi-square distribution by bracketing bisection.
pub fn chisq_quantile(p: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("quantile probability must be in (0, 1), got {p}")));
    }
    let mut hi = df.max(1.0);
    while chisq_cdf(hi, df)? < p {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chisq_cdf(mid, df)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

    /// Composite Simpson rule, independent of the gamma-function path.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }

    #[test]
    fn chisq_cdf_8_8_against_quadrature() {
        // pdf of chi-square with 8 dof: x^3 e^{-x/2} / 96
        let oracle = simpson(|x| x.powi(3) * (-x / 2.0).exp() / 96.0, 0.0, 8.0, 20_000);
        let got = chisq_cdf(8.0, 8.0).unwrap();
        assert!((got - oracle).abs() < 1e-10);
        assert!((got - 0.5665).abs() < 1e-3);
    }

    #[test]
    fn t_quantile_table_value() {
        assert!((t_quantile(0.975, 8.0).unwrap() - 2.3060).abs() < 5e-4);
        assert_eq!(t_quantile(0.5, 3.0).unwrap(), 0.0);
        assert!((t_quantile(0.025, 8.0).unwrap() + t_quantile(0.975, 8.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn t_cdf_against_quadrature() {
        for &df in &[1.0, 4.0, 8.0, 30.0] {
            for &t in &[0.1, 1.0, 2.5] {
                let oracle = 0.5 + simpson(|u| t_pdf_reference(u, df), 0.0, t, 20_000);
                assert!((t_cdf(t, df).unwrap() - oracle).abs() < 1e-10, "df={df} t={t}");
            }
        }
    }

    fn t_pdf_reference(t: f64, df: f64) -> f64 {
        // Gamma ratio via statrs to stay off our ln_gamma
        let c = (statrs::function::gamma::ln_gamma((df + 1.0) / 2.0)
            - statrs::function::gamma::ln_gamma(df / 2.0))
        .exp()
            / (df * std::f64::consts::PI).sqrt();
        c * (1.0 + t * t / df).powf(-(df + 1.0) / 2.0)
    }

    #[test]
    fn agrees_with_statrs_up_to_df_1000() {
        for &df in &[1.0, 2.0, 4.0, 8.0, 25.0, 100.0, 1000.0] {
            let t = StudentsT::new(0.0, 1.0, df).unwrap();
            let c = ChiSquared::new(df).unwrap();
            for &p in &[0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999] {
                let q = t_quantile(p, df).unwrap();
                assert!((q - t.inverse_cdf(p)).abs() < 1e-8 * q.abs().max(1.0), "t df={df} p={p}");
            }
            for &x in &[0.0, 0.5 * df, df, 1.5 * df, 3.0 * df] {
                assert!((chisq_cdf(x, df).unwrap() - c.cdf(x)).abs() < 1e-8, "chi2 df={df} x={x}");
                let sum = chisq_cdf(x, df).unwrap() + chisq_sf(x, df).unwrap();
                assert!((sum - 1.0).abs() < 1e-10);
            }
            for &p in &[0.025, 0.5, 0.975] {
                let q = chisq_quantile(p, df).unwrap();
                assert!((chisq_cdf(q, df).unwrap() - p).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(t_quantile(0.0, 3.0).is_err());
        assert!(t_quantile(1.0, 3.0).is_err());
        assert!(t_quantile(0.5, 0.0).is_err());
        assert!(chisq_cdf(-1.0, 3.0).is_err());
        assert!(beta_inc(1.0, 1.0, 1.5).is_err());
    }
}
