//! Maximum H0-likelihood-ratio confidence intervals for the nuisance
//! parameters, built from two-sided level sets of convex pivot functions.
//!
//! Each pivot h(u) has minimum value 1 at a known point m; the interval
//! endpoints are the roots of h(u) = A_beta, with the threshold A_beta
//! calibrated so the pivot's law puts mass beta outside the roots. Solving
//! runs an outer bisection on ln A and inner bisections for the roots, all
//! to 1e-12 relative tolerance.

use crate::dist::DistFamily;
use crate::error::{Error, Result};
use crate::ks::{NullFamily, Sample};
use crate::special::gamma_p;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

/// Roots (u0, u1) of h(u) = A_beta straddling the pivot minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootPair {
    pub u0: f64,
    pub u1: f64,
}

/// Which pivotal quantity calibrated the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotKind {
    /// t = theta * sum(X) ~ Gamma(n, 1); h(t) = (t/n)^{-n} e^{t-n}.
    GammaRate { n: usize },
    /// u ~ chi-square(df); h(u) = (u/scale)^{-scale/2} e^{(u-scale)/2}.
    ChiSquare { df: usize, scale: usize },
    /// u = n (xbar - theta)^2 ~ chi-square(1); h(u) = e^{u/2} (one-sided in u).
    SquaredMean,
}

/// A maximum H0-likelihood-ratio confidence interval.
#[derive(Debug, Clone, PartialEq)]
pub struct LrInterval {
    pub lo: f64,
    pub hi: f64,
    pub beta: f64,
    pub a_beta: f64,
    /// Pivot-space roots; `None` for the squared-mean pivot whose level set
    /// is one-sided in u.
    pub roots: Option<RootPair>,
    pub pivot: PivotKind,
}

impl LrInterval {
    pub fn contains(&self, theta: f64) -> bool {
        self.lo <= theta && theta <= self.hi
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(beta))
    }
}

// Generic two-sided level-set calibration.
//
// `ln_h` is the log pivot function, convex with minimum 0 at `m`; `cdf` is
// the pivot's null CDF. Returns (ln_a, u0, u1) with
// cdf(u0) + 1 - cdf(u1) = beta.
fn calibrate(
    ln_h: impl Fn(f64) -> f64 + Copy,
    m: f64,
    cdf: impl Fn(f64) -> f64 + Copy,
    beta: f64,
) -> Result<(f64, f64, f64)> {
    // roots of ln_h(u) = t for t > 0; u0 bisected in log space, u1 linearly
    let roots = |t: f64| -> (f64, f64) {
        let mut lo = (f64::MIN_POSITIVE).ln();
        let mut hi = m.ln();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ln_h(mid.exp()) > t {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 {
                break;
            }
        }
        let u0 = (0.5 * (lo + hi)).exp();
        let mut a = m;
        let mut b = 2.0 * m.max(1.0);
        while ln_h(b) < t {
            a = b;
            b *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if ln_h(mid) < t {
                a = mid;
            } else {
                b = mid;
            }
            if b - a < 1e-13 * b {
                break;
            }
        }
        (u0, 0.5 * (a + b))
    };
    let beta_of = |t: f64| -> f64 {
        let (u0, u1) = roots(t);
        cdf(u0) + 1.0 - cdf(u1)
    };

    let mut lo = 0.0;
    let mut hi = 1.0;
    while beta_of(hi) > beta {
        lo = hi;
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::NoConvergence {
                context: "pivot threshold bracket growth",
                residual: beta_of(hi) - beta,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if beta_of(mid) > beta {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * (1.0 + hi) {
            break;
        }
    }
    let ln_a = 0.5 * (lo + hi);
    let (u0, u1) = roots(ln_a);
    let resid = (cdf(u0) + 1.0 - cdf(u1)) - beta;
    if resid.abs() > 1e-9 {
        return Err(Error::NoConvergence { context: "pivot threshold calibration", residual: resid });
    }
    Ok((ln_a, u0, u1))
}

// (pivot kind, df, scale, beta bits) -> (ln A, u0, u1)
type ThresholdKey = (u8, u64, u64, u64);
type ThresholdCache = RwLock<HashMap<ThresholdKey, (f64, f64, f64)>>;

fn cache() -> &'static ThresholdCache {
    static CACHE: OnceLock<ThresholdCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(
    key: ThresholdKey,
    compute: impl Fn() -> Result<(f64, f64, f64)>,
) -> Result<(f64, f64, f64)> {
    if let Some(v) = cache().read().unwrap().get(&key) {
        return Ok(*v);
    }
    let v = compute()?;
    cache().write().unwrap().insert(key, v);
    Ok(v)
}

/// Roots of the exponential-rate pivot system for n = 1:
/// 1 - e^{-u0} + e^{-u1} = beta with h(u0) = h(u1) for h(u) = u^{-1} e^{u-1}
/// (equivalently u0 e^{-u0} = u1 e^{-u1}), 0 < u0 < 1 < u1.
pub fn solve_exp_system(beta: f64) -> Result<RootPair> {
    let (_, u0, u1) = gamma_rate_threshold(1, beta)?;
    Ok(RootPair { u0, u1 })
}

/// Threshold and roots for the Gamma(n,1) rate pivot h(t) = (t/n)^{-n} e^{t-n}.
pub fn gamma_rate_threshold(n: usize, beta: f64) -> Result<(f64, f64, f64)> {
    check_beta(beta)?;
    let key = (0u8, n as u64, 0u64, beta.to_bits());
    cached(key, || {
        let nf = n as f64;
        let ln_h = move |t: f64| -nf * (t / nf).ln() + t - nf;
        let cdf = move |t: f64| gamma_p(nf, t);
        let (ln_a, u0, u1) = calibrate(ln_h, nf, cdf, beta)?;
        Ok((ln_a.exp(), u0, u1))
    })
}

/// Threshold A_beta and roots for the chi-square pivot
/// h(u) = (u/scale)^{-scale/2} e^{(u - scale)/2} with u ~ chi-square(df).
///
/// Returns (A_beta, roots) with F_df(u0) + 1 - F_df(u1) = beta.
pub fn chi_square_pivot_threshold(
    df_pivot: usize,
    scale_n: usize,
    beta: f64,
) -> Result<(f64, RootPair)> {
    check_beta(beta)?;
    if df_pivot == 0 || scale_n == 0 {
        return Err(Error::InvalidParameter { name: "df_pivot/scale_n", value: 0.0 });
    }
    let key = (1u8, df_pivot as u64, scale_n as u64, beta.to_bits());
    let (ln_a, u0, u1) = cached(key, || {
        let s = scale_n as f64;
        let a = df_pivot as f64 / 2.0;
        let ln_h = move |u: f64| -(s / 2.0) * (u / s).ln() + (u - s) / 2.0;
        let cdf = move |u: f64| gamma_p(a, u / 2.0);
        calibrate(ln_h, s, cdf, beta)
    })?;
    Ok((ln_a.exp(), RootPair { u0, u1 }))
}

/// The maximum H0-likelihood-ratio confidence interval for the nuisance
/// parameter of `family` at confidence 1 - beta.
pub fn lr_interval(sample: &Sample, family: NullFamily, beta: f64) -> Result<LrInterval> {
    check_beta(beta)?;
    family.check_sample(sample)?;
    let n = sample.n();
    match family {
        NullFamily::ExpRate => {
            let (a_beta, u0, u1) = gamma_rate_threshold(n, beta)?;
            let s = sample.sum();
            Ok(LrInterval {
                lo: u0 / s,
                hi: u1 / s,
                beta,
                a_beta,
                roots: Some(RootPair { u0, u1 }),
                pivot: PivotKind::GammaRate { n },
            })
        }
        NullFamily::NormalMeanUnitVar => {
            // n (xbar - theta)^2 ~ chi-square(1): 2 ln A = chi2_1 quantile(1-beta)
            let w = DistFamily::ChiSquare { df: 1.0 }.quantile(1.0 - beta)?;
            let half = (w / n as f64).sqrt();
            let mean = sample.mean();
            Ok(LrInterval {
                lo: mean - half,
                hi: mean + half,
                beta,
                a_beta: (w / 2.0).exp(),
                roots: None,
                pivot: PivotKind::SquaredMean,
            })
        }
        NullFamily::NormalScaleZeroMean => {
            let (a_beta, roots) = chi_square_pivot_threshold(n, n, beta)?;
            let ss = sample.sum_sq();
            if ss == 0.0 {
                return Err(Error::Data("all observations are zero".into()));
            }
            Ok(LrInterval {
                lo: (ss / roots.u1).sqrt(),
                hi: (ss / roots.u0).sqrt(),
                beta,
                a_beta,
                roots: Some(roots),
                pivot: PivotKind::ChiSquare { df: n, scale: n },
            })
        }
    }
}

/// Pooled two-sample interval for the common sigma: with
/// S = sum (Z_i - Zbar)^2 over the pooled vector, the interval is
/// (sqrt(S/u1), sqrt(S/u0)) with roots from the chi-square(N-1) pivot at
/// scale N.
pub fn pooled_sigma_interval(x: &Sample, y: &Sample, beta: f64) -> Result<LrInterval> {
    check_beta(beta)?;
    let n = x.n() + y.n();
    if n < 3 {
        return Err(Error::SampleSize { got: n, min: 3, max: usize::MAX });
    }
    let s = pooled_centered_ss(x, y);
    if s <= 0.0 {
        return Err(Error::Data("pooled sample has zero variance".into()));
    }
    let (a_beta, roots) = chi_square_pivot_threshold(n - 1, n, beta)?;
    Ok(LrInterval {
        lo: (s / roots.u1).sqrt(),
        hi: (s / roots.u0).sqrt(),
        beta,
        a_beta,
        roots: Some(roots),
        pivot: PivotKind::ChiSquare { df: n - 1, scale: n },
    })
}

/// Simple chi-square upper confidence bound for sigma^2:
/// (0, S / chi2_{N-1, beta}].
pub fn chisq_simple_sigma_interval(x: &Sample, y: &Sample, beta: f64) -> Result<(f64, f64)> {
    check_beta(beta)?;
    let n = x.n() + y.n();
    if n < 3 {
        return Err(Error::SampleSize { got: n, min: 3, max: usize::MAX });
    }
    let s = pooled_centered_ss(x, y);
    if s <= 0.0 {
        return Err(Error::Data("pooled sample has zero variance".into()));
    }
    let gamma_beta = DistFamily::ChiSquare { df: (n - 1) as f64 }.quantile(beta)?;
    Ok((0.0, s / gamma_beta))
}

pub(crate) fn pooled_centered_ss(x: &Sample, y: &Sample) -> f64 {
    let n = (x.n() + y.n()) as f64;
    let total: f64 = x.sum() + y.sum();
    let mean = total / n;
    x.values()
        .iter()
        .chain(y.values())
        .map(|&z| (z - mean) * (z - mean))
        .sum()
}
