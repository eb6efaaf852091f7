//! Distribution kernels: CDFs, densities, quantiles, and seeded samplers for
//! every family the experiments draw from.
//!
//! CDF accuracy targets: absolute error <= 1e-12 for the normal family and
//! <= 1e-10 for the gamma/chi-square families; quantiles invert their CDF to
//! 1e-9 or better.

use crate::error::{Error, Result};
use crate::special::{beta_inc, erfc, gamma_p, ln_gamma};
use rand::Rng;
use rand_distr::Distribution;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;
pub const SQRT_2PI: f64 = 2.5066282746310005024;

/// Standard normal CDF.
#[inline]
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal density.
#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard normal quantile: Acklam's rational approximation polished with
/// two Halley steps against the high-precision CDF.
pub fn std_normal_quantile(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let mut x = acklam(p);
    for _ in 0..2 {
        let e = std_normal_cdf(x) - p;
        let u = e * SQRT_2PI * (0.5 * x * x).exp();
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Chi-square CDF with (possibly fractional) degrees of freedom.
#[inline]
pub fn chi_square_cdf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        gamma_p(df / 2.0, x / 2.0)
    }
}

/// Student-t CDF via the regularized incomplete beta function.
pub fn student_t_cdf(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 0.5;
    }
    let x = df / (df + t * t);
    let half_tail = 0.5 * beta_inc(df / 2.0, 0.5, x);
    if t > 0.0 {
        1.0 - half_tail
    } else {
        half_tail
    }
}

/// A parametric distribution family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistFamily {
    Normal { mean: f64, sd: f64 },
    Exponential { rate: f64 },
    Gamma { shape: f64, scale: f64 },
    LogNormal { mu: f64, sigma: f64 },
    ChiSquare { df: f64 },
    Weibull { shape: f64, scale: f64 },
    Cauchy { location: f64, scale: f64 },
    Logistic { location: f64, scale: f64 },
    StudentT { df: f64 },
}

impl DistFamily {
    /// Check parameter domains (positivity of scales, rates, dfs).
    pub fn validate(&self) -> Result<()> {
        use DistFamily::*;
        let bad = |name: &'static str, value: f64| Error::InvalidParameter { name, value };
        let pos = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(bad(name, v))
            }
        };
        match *self {
            Normal { mean, sd } => {
                if !mean.is_finite() {
                    return Err(bad("mean", mean));
                }
                pos("sd", sd)
            }
            Exponential { rate } => pos("rate", rate),
            Gamma { shape, scale } => pos("shape", shape).and(pos("scale", scale)),
            LogNormal { mu, sigma } => {
                if !mu.is_finite() {
                    return Err(bad("mu", mu));
                }
                pos("sigma", sigma)
            }
            ChiSquare { df } => pos("df", df),
            Weibull { shape, scale } => pos("shape", shape).and(pos("scale", scale)),
            Cauchy { location, scale } | Logistic { location, scale } => {
                if !location.is_finite() {
                    return Err(bad("location", location));
                }
                pos("scale", scale)
            }
            StudentT { df } => pos("df", df),
        }
    }

    /// F(x). Accepts x = +-inf and returns the corresponding limit.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        Ok(self.cdf_unchecked(x))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        use DistFamily::*;
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        match *self {
            Normal { mean, sd } => std_normal_cdf((x - mean) / sd),
            Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Gamma { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    gamma_p(shape, x / scale)
                }
            }
            LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    std_normal_cdf((x.ln() - mu) / sigma)
                }
            }
            ChiSquare { df } => chi_square_cdf(x, df),
            Weibull { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x / scale).powf(shape)).exp_m1()
                }
            }
            Cauchy { location, scale } => {
                0.5 + ((x - location) / scale).atan() / std::f64::consts::PI
            }
            Logistic { location, scale } => {
                let z = (x - location) / scale;
                1.0 / (1.0 + (-z).exp())
            }
            StudentT { df } => student_t_cdf(x, df),
        }
    }

    /// Density f(x).
    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        use DistFamily::*;
        Ok(match *self {
            Normal { mean, sd } => std_normal_pdf((x - mean) / sd) / sd,
            Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Gamma { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    let z = x / scale;
                    ((shape - 1.0) * z.ln() - z - ln_gamma(shape)).exp() / scale
                }
            }
            LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    std_normal_pdf((x.ln() - mu) / sigma) / (x * sigma)
                }
            }
            ChiSquare { df } => {
                if x <= 0.0 {
                    0.0
                } else {
                    let a = df / 2.0;
                    ((a - 1.0) * (x / 2.0).ln() - x / 2.0 - ln_gamma(a)).exp() / 2.0
                }
            }
            Weibull { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    let z = x / scale;
                    shape / scale * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
                }
            }
            Cauchy { location, scale } => {
                let z = (x - location) / scale;
                1.0 / (std::f64::consts::PI * scale * (1.0 + z * z))
            }
            Logistic { location, scale } => {
                let e = (-((x - location) / scale).abs()).exp();
                e / (scale * (1.0 + e) * (1.0 + e))
            }
            StudentT { df } => {
                let norm = (ln_gamma((df + 1.0) / 2.0)
                    - ln_gamma(df / 2.0)
                    - 0.5 * (df * std::f64::consts::PI).ln())
                .exp();
                norm * (1.0 + x * x / df).powf(-(df + 1.0) / 2.0)
            }
        })
    }

    /// F^{-1}(p) for p in (0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.validate()?;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        use DistFamily::*;
        Ok(match *self {
            Normal { mean, sd } => mean + sd * std_normal_quantile(p),
            Exponential { rate } => -(-p).ln_1p() / rate,
            LogNormal { mu, sigma } => (mu + sigma * std_normal_quantile(p)).exp(),
            Weibull { shape, scale } => scale * (-(-p).ln_1p()).powf(1.0 / shape),
            Cauchy { location, scale } => {
                location + scale * (std::f64::consts::PI * (p - 0.5)).tan()
            }
            Logistic { location, scale } => location + scale * (p / (1.0 - p)).ln(),
            Gamma { shape, scale } => scale * gamma_quantile_std(shape, p),
            ChiSquare { df } => 2.0 * gamma_quantile_std(df / 2.0, p),
            StudentT { df } => student_t_quantile(p, df),
        })
    }

    /// Draw `n` i.i.d. values. Deterministic given the RNG state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<Vec<f64>> {
        self.validate()?;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.sample_one(rng));
        }
        Ok(out)
    }

    /// Draw a single value. Parameters are assumed valid.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        use DistFamily::*;
        let std_normal = |rng: &mut R| -> f64 { rand_distr::StandardNormal.sample(rng) };
        match *self {
            Normal { mean, sd } => mean + sd * std_normal(rng),
            Exponential { rate } => rand_distr::Exp::new(rate).unwrap().sample(rng),
            Gamma { shape, scale } => rand_distr::Gamma::new(shape, scale).unwrap().sample(rng),
            LogNormal { mu, sigma } => (mu + sigma * std_normal(rng)).exp(),
            ChiSquare { df } => rand_distr::ChiSquared::new(df).unwrap().sample(rng),
            Weibull { shape, scale } => {
                let u: f64 = rng.gen();
                scale * (-(-u).ln_1p()).powf(1.0 / shape)
            }
            Cauchy { location, scale } => {
                rand_distr::Cauchy::new(location, scale).unwrap().sample(rng)
            }
            Logistic { location, scale } => {
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                location + scale * (u / (1.0 - u)).ln()
            }
            StudentT { df } => rand_distr::StudentT::new(df).unwrap().sample(rng),
        }
    }
}

// Quantile of Gamma(shape = a, scale = 1): Wilson-Hilferty start, then
// safeguarded Newton on the regularized incomplete gamma.
fn gamma_quantile_std(a: f64, p: f64) -> f64 {
    let x0 = if a > 0.5 {
        // Wilson-Hilferty
        let z = std_normal_quantile(p);
        let c = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * a.sqrt());
        (a * c * c * c).max(1e-8 * a)
    } else {
        // small-shape start from the series leading term
        (p * (ln_gamma(a + 1.0)).exp()).powf(1.0 / a).max(1e-300)
    };
    let log_pdf = |x: f64| (a - 1.0) * x.ln() - x - ln_gamma(a);
    invert_monotone(p, x0, 0.0, f64::INFINITY, |x| gamma_p(a, x), |x| log_pdf(x).exp())
}

fn student_t_quantile(p: f64, df: f64) -> f64 {
    if (p - 0.5).abs() < 1e-16 {
        return 0.0;
    }
    // Start from the normal quantile and let the safeguarded solver take over.
    let x0 = std_normal_quantile(p);
    let norm = (ln_gamma((df + 1.0) / 2.0)
        - ln_gamma(df / 2.0)
        - 0.5 * (df * std::f64::consts::PI).ln())
    .exp();
    invert_monotone(
        p,
        x0,
        f64::NEG_INFINITY,
        f64::INFINITY,
        |t| student_t_cdf(t, df),
        |t| norm * (1.0 + t * t / df).powf(-(df + 1.0) / 2.0),
    )
}

// Safeguarded Newton: keeps a shrinking bracket and bisects whenever a Newton
// step escapes it. `lo`/`hi` may be infinite; the bracket is grown first.
fn invert_monotone(
    p: f64,
    x0: f64,
    lo: f64,
    hi: f64,
    cdf: impl Fn(f64) -> f64,
    pdf: impl Fn(f64) -> f64,
) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    // establish a finite bracket around x0 by doubling outward
    if lo.is_infinite() {
        let mut step = x0.abs().max(1.0);
        let mut a = x0 - step;
        while cdf(a) > p {
            step *= 2.0;
            a -= step;
        }
        lo = a;
    }
    if hi.is_infinite() {
        let mut step = x0.abs().max(1.0);
        let mut b = x0 + step;
        while cdf(b) < p {
            step *= 2.0;
            b += step;
        }
        hi = b;
    }
    let mut x = x0.clamp(lo + (hi - lo) * 1e-12, hi - (hi - lo) * 1e-12);
    if !x.is_finite() {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let e = cdf(x) - p;
        if e > 0.0 {
            hi = hi.min(x);
        } else {
            lo = lo.max(x);
        }
        if e.abs() <= 1e-13 * p.min(1.0 - p).max(1e-100) + 1e-15 {
            return x;
        }
        let d = pdf(x);
        let next = if d > 0.0 { x - e / d } else { f64::NAN };
        x = if next.is_finite() && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo) <= 1e-14 * (1.0 + x.abs()) {
            return x;
        }
    }
    x
}
