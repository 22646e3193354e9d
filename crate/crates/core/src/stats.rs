//! Correlation, polynomial regression and normality testing used to relate
//! complexity metrics to measured effort.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
    pub ci_low: f64,
    pub ci_high: f64,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult {
    pub degree: usize,
    /// `beta[k]` multiplies `x^k`.
    pub beta: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
    pub dof: usize,
}

impl RegressionResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.beta.iter().rev().fold(0.0, |acc, b| acc * x + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Note attached to every K-S report: the reference normal is fitted to the
/// sample, so the asymptotic p-value is conservative.
pub const KS_CAVEAT: &str = "normal parameters estimated from the sample; asymptotic \
Kolmogorov p-value is conservative (Lilliefors effect)";

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn is_constant(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

/// Sample standard deviation with the `n - 1` denominator.
pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::usage(format!(
            "series lengths differ ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::usage("correlation needs at least 3 observations"));
    }
    if is_constant(x) || is_constant(y) {
        return Err(Error::domain("zero variance in correlation input"));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::domain("zero variance in correlation input"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Two-sided standard-normal quantile for a confidence `level`.
pub fn normal_two_sided_quantile(level: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + level / 2.0)
}

/// Fisher z-transform confidence interval for a correlation coefficient.
pub fn fisher_ci(r: f64, n: usize, level: f64) -> Result<(f64, f64)> {
    if !(r.abs() < 1.0) {
        return Err(Error::domain(format!(
            "confidence interval is degenerate for r = {r}"
        )));
    }
    if n < 4 {
        return Err(Error::usage("Fisher interval needs n >= 4"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::usage(format!("confidence level {level} not in (0, 1)")));
    }
    // Work on |r| and mirror, so the interval for -r is exactly the negated one.
    let z = r.abs().atanh();
    let half = normal_two_sided_quantile(level) / ((n - 3) as f64).sqrt();
    let (lo, hi) = ((z - half).tanh(), (z + half).tanh());
    Ok(if r < 0.0 { (-hi, -lo) } else { (lo, hi) })
}

pub fn correlate(x: &[f64], y: &[f64], level: f64) -> Result<CorrelationResult> {
    let r = pearson(x, y)?;
    let n = x.len();
    let (ci_low, ci_high) = if r.abs() < 1.0 {
        fisher_ci(r, n, level)?
    } else {
        (r, r)
    };
    Ok(CorrelationResult {
        r,
        n,
        ci_low,
        ci_high,
        level,
    })
}

/// Student-t CDF through the regularized incomplete beta function.
pub fn t_cdf(t: f64, dof: u32) -> f64 {
    assert!(dof >= 1, "t distribution needs dof >= 1");
    if t.is_nan() {
        return f64::NAN;
    }
    let nu = dof as f64;
    let x = nu / (nu + t * t);
    let tail = 0.5 * beta_reg(nu / 2.0, 0.5, x);
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Two-sided p-value of a t statistic.
pub fn t_two_sided_p(t: f64, dof: u32) -> f64 {
    let nu = dof as f64;
    beta_reg(nu / 2.0, 0.5, nu / (nu + t * t)).clamp(0.0, 1.0)
}

/// Least-squares polynomial fit of degree 1 or 2 with per-coefficient t-tests.
pub fn ols_poly(x: &[f64], y: &[f64], degree: usize) -> Result<RegressionResult> {
    if !(1..=2).contains(&degree) {
        return Err(Error::usage(format!("degree must be 1 or 2, got {degree}")));
    }
    if x.len() != y.len() {
        return Err(Error::usage("x and y lengths differ"));
    }
    let n = x.len();
    let p = degree + 1;
    if n <= p {
        return Err(Error::usage(format!(
            "degree {degree} fit needs more than {p} observations, got {n}"
        )));
    }
    let design = DMatrix::from_fn(n, p, |i, k| x[i].powi(k as i32));
    let yv = DVector::from_column_slice(y);
    let svd = design.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    if smax == 0.0 || smin <= smax * f64::EPSILON * n.max(p) as f64 {
        return Err(Error::domain("design matrix is rank deficient"));
    }
    let u = svd.u.as_ref().expect("u requested");
    let v = svd.v_t.as_ref().expect("v_t requested").transpose();
    let uty = u.transpose() * &yv;
    let scaled = DVector::from_fn(p, |k, _| uty[k] / sv[k]);
    let beta = &v * scaled;

    let fitted = &design * &beta;
    let residuals: Vec<f64> = (0..n).map(|i| y[i] - fitted[i]).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let my = mean(y);
    let tss: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if tss == 0.0 {
        return Err(Error::domain("response has zero variance"));
    }
    let r_squared = (1.0 - rss / tss).clamp(0.0, 1.0);

    let dof = n - p;
    let sigma2 = rss / dof as f64;
    // (X'X)^-1 = V S^-2 V'
    let inv_gram = DMatrix::from_fn(p, p, |i, j| {
        (0..p).map(|k| v[(i, k)] * v[(j, k)] / (sv[k] * sv[k])).sum::<f64>()
    });
    let std_errors: Vec<f64> = (0..p).map(|k| (sigma2 * inv_gram[(k, k)]).sqrt()).collect();
    let t_values: Vec<f64> = (0..p)
        .map(|k| match (beta[k], std_errors[k]) {
            (b, se) if se > 0.0 => b / se,
            (b, _) if b == 0.0 => 0.0,
            (b, _) => b.signum() * f64::INFINITY,
        })
        .collect();
    let p_values = t_values
        .iter()
        .map(|&t| t_two_sided_p(t, dof as u32))
        .collect();

    Ok(RegressionResult {
        degree,
        beta: beta.iter().copied().collect(),
        std_errors,
        t_values,
        p_values,
        r_squared,
        residuals,
        dof,
    })
}

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Theta-function form; the alternating series converges poorly here.
        let l2 = lambda * lambda;
        let s: f64 = (1..=20)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (-m * m * std::f64::consts::PI.powi(2) / (8.0 * l2)).exp()
            })
            .sum();
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / lambda * s;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let l2 = lambda * lambda;
    let s: f64 = (1..=100)
        .map(|k| {
            let k = k as f64;
            let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
            2.0 * sign * (-2.0 * k * k * l2).exp()
        })
        .sum();
    s.clamp(0.0, 1.0)
}

/// One-sample Kolmogorov-Smirnov test against a normal fitted to the sample.
pub fn ks_normal(sample: &[f64]) -> Result<KsResult> {
    let n = sample.len();
    if n < 5 {
        return Err(Error::usage(format!("K-S test needs n >= 5, got {n}")));
    }
    if is_constant(sample) {
        return Err(Error::domain("K-S test on a constant sample"));
    }
    let m = mean(sample);
    let sd = sample_sd(sample);
    let dist = Normal::new(m, sd).map_err(|e| Error::domain(e.to_string()))?;
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = dist.cdf(x);
            ((i + 1) as f64 / nf - f).max(f - i as f64 / nf)
        })
        .fold(0.0, f64::max);
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf(nf.sqrt() * d),
        n,
    })
}
