//! Sample summaries and distribution tests used by the Monte Carlo drivers.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::Matrix;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Linear-interpolation quantile (type 7) of an already sorted sample.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = q.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

pub fn median(xs: &[f64]) -> f64 {
    quantile_sorted(&sorted(xs), 0.5)
}

/// Unbiased covariance of the rows of `samples` (each row one observation).
pub fn covariance(samples: &[Vec<f64>]) -> Result<Matrix> {
    let n = samples.len();
    if n < 2 {
        return invalid("covariance needs at least two observations");
    }
    let p = samples[0].len();
    if samples.iter().any(|s| s.len() != p) {
        return invalid("ragged sample");
    }
    let mu: Vec<f64> = (0..p)
        .map(|j| samples.iter().map(|s| s[j]).sum::<f64>() / n as f64)
        .collect();
    let mut cov = Matrix::zeros(p, p);
    for s in samples {
        for i in 0..p {
            for j in 0..p {
                cov[(i, j)] += (s[i] - mu[i]) * (s[j] - mu[j]);
            }
        }
    }
    Ok(cov.scale(1.0 / (n as f64 - 1.0)))
}

/// Kolmogorov survival function `P(K > t)`.
fn kolmogorov_sf(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * t * t).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    /// Asymptotic p-value.
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov test. Ties across samples are handled by
/// advancing both sides past equal values before comparing the ECDFs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return invalid("KS test needs nonempty samples");
    }
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let en = (na * nb / (na + nb)).sqrt();
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf((en + 0.12 + 0.11 / en) * d),
    })
}

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// `erfc` with relative error below 1.2e-7 (Chebyshev fit).
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let poly = -z * z - 1.265_512_23
        + t * (1.000_023_68
            + t * (0.374_091_96
                + t * (0.096_784_18
                    + t * (-0.186_288_06
                        + t * (0.278_868_07
                            + t * (-1.135_203_98 + t * (1.488_515_87 + t * (-0.822_152_23 + t * 0.170_872_77))))))));
    let r = t * poly.exp();
    if x >= 0.0 {
        r
    } else {
        2.0 - r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormalityTest {
    /// KS distance to the normal with fitted mean and variance.
    pub lilliefors_statistic: f64,
    /// Large-sample critical value at the 1% level.
    pub lilliefors_critical_01: f64,
    pub jarque_bera: f64,
    /// Asymptotic chi-square(2) p-value of the Jarque–Bera statistic.
    pub jarque_bera_p_value: f64,
    pub rejects_at_01: bool,
}

/// Lilliefors test (decision at level 0.01) with Jarque–Bera reported
/// alongside. A sample with zero variance is rejected outright.
pub fn normality_test(xs: &[f64]) -> Result<NormalityTest> {
    let n = xs.len();
    if n <= 100 {
        return invalid("normality test uses large-sample critical values; need more than 100 points");
    }
    let nf = n as f64;
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / nf;
    let critical = 1.031 / nf.sqrt();
    if var == 0.0 {
        return Ok(NormalityTest {
            lilliefors_statistic: 1.0,
            lilliefors_critical_01: critical,
            jarque_bera: f64::INFINITY,
            jarque_bera_p_value: 0.0,
            rejects_at_01: true,
        });
    }
    let sd = var.sqrt();
    let s = sorted(xs);
    let mut d = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let f = normal_cdf((x - m) / sd);
        d = d.max((i as f64 + 1.0) / nf - f).max(f - i as f64 / nf);
    }
    let skew = xs.iter().map(|x| ((x - m) / sd).powi(3)).sum::<f64>() / nf;
    let kurt = xs.iter().map(|x| ((x - m) / sd).powi(4)).sum::<f64>() / nf;
    let jb = nf / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0);
    Ok(NormalityTest {
        lilliefors_statistic: d,
        lilliefors_critical_01: critical,
        jarque_bera: jb,
        jarque_bera_p_value: (-jb / 2.0).exp(),
        rejects_at_01: d > critical,
    })
}
