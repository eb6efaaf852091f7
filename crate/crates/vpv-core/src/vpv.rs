//! Valid p-value constructions: the full-supremum p_S and the
//! confidence-set p_C for the goodness-of-fit families, plus the normal
//! two-sample test with a nuisance variance.
//!
//! Raw values may exceed 1 (the n = 1 cases do so by construction); the
//! clamped fields are what the level-alpha decision rule consumes.

use crate::confidence::{chisq_simple_sigma_interval, lr_interval, pooled_sigma_interval, LrInterval};
use crate::dist::std_normal_cdf;
use crate::error::{Error, Result};
use crate::ks::{infimum_ks, kolmogorov_null_cdf, Domain, KsMinimum, NullFamily, Sample};

/// Outcome of the goodness-of-fit VpV computation.
#[derive(Debug, Clone, PartialEq)]
pub struct VpvResult {
    /// 1 - F_{KS_n,0}(inf over the full parameter space).
    pub p_s_raw: f64,
    /// 1 - F_{KS_n,0}(inf over the confidence set) + beta. May exceed 1.
    pub p_c_raw: f64,
    pub p_s: f64,
    pub p_c: f64,
    pub ks_min_full: KsMinimum,
    pub ks_min_restricted: KsMinimum,
    pub interval: LrInterval,
    pub beta: f64,
}

/// Which confidence interval the two-sample test restricts sigma to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntervalKind {
    /// Maximum H0-likelihood-ratio interval from the chi-square pivot.
    #[default]
    LikelihoodRatio,
    /// One-sided chi-square interval (0, S / chi2_{N-1, beta}] for sigma^2.
    ChiSquareSimple,
}

/// Outcome of the two-sample VpV computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSampleResult {
    pub t_at_sigma_lo: f64,
    pub t_at_sigma_hi: f64,
    pub xbar: f64,
    pub ybar: f64,
    pub p_s: f64,
    pub p_c_raw: f64,
    pub p_c: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
}

/// Level-alpha decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Reject,
    Retain,
}

/// Reject iff the (clamped) valid p-value is <= alpha.
pub fn decide(vpv: f64, alpha: f64) -> Result<Decision> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ProbabilityOutOfRange(alpha));
    }
    Ok(if vpv.min(1.0) <= alpha {
        Decision::Reject
    } else {
        Decision::Retain
    })
}

/// Compute p_S and p_C for a goodness-of-fit family.
pub fn gof_vpv(sample: &Sample, family: NullFamily, beta: f64) -> Result<VpvResult> {
    let interval = lr_interval(sample, family, beta)?;
    let full = infimum_ks(sample, family, Domain::Full)?;
    let restricted = infimum_ks(
        sample,
        family,
        Domain::Interval { lo: interval.lo, hi: interval.hi },
    )?;
    let n = sample.n();
    let p_s_raw = 1.0 - kolmogorov_null_cdf(n, full.d_star);
    let p_c_raw = 1.0 - kolmogorov_null_cdf(n, restricted.d_star) + beta;
    Ok(VpvResult {
        p_s_raw,
        p_c_raw,
        p_s: p_s_raw.min(1.0),
        p_c: p_c_raw.min(1.0),
        ks_min_full: full,
        ks_min_restricted: restricted,
        interval,
        beta,
    })
}

/// T(sigma) = (xbar - ybar) / { sigma (n+m)^{1/2} (nm)^{-1/2} }.
pub fn two_sample_t_stat(x: &Sample, y: &Sample, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter { name: "sigma", value: sigma });
    }
    Ok(t_stat_at(x.mean() - y.mean(), x.n(), y.n(), sigma))
}

#[inline]
fn t_stat_at(diff: f64, n: usize, m: usize, sigma: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    let scale = ((n + m) / (n * m)).sqrt();
    if sigma == 0.0 {
        // limit as sigma -> 0+
        return if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
    }
    diff / (sigma * scale)
}

/// Two-sample VpV: p_S is 1 or 1/2 by the sign of xbar - ybar; p_C evaluates
/// the normal tail of T at the relevant endpoint of the sigma interval.
pub fn two_sample_vpv(
    x: &Sample,
    y: &Sample,
    beta: f64,
    kind: IntervalKind,
) -> Result<TwoSampleResult> {
    let (n, m) = (x.n(), y.n());
    if n + m < 3 {
        return Err(Error::SampleSize { got: n + m, min: 3, max: usize::MAX });
    }
    let (sigma_lo, sigma_hi) = match kind {
        IntervalKind::LikelihoodRatio => {
            let ci = pooled_sigma_interval(x, y, beta)?;
            (ci.lo, ci.hi)
        }
        IntervalKind::ChiSquareSimple => {
            let (_, s2_hi) = chisq_simple_sigma_interval(x, y, beta)?;
            (0.0, s2_hi.sqrt())
        }
    };
    let xbar = x.mean();
    let ybar = y.mean();
    let diff = xbar - ybar;
    let t_lo = t_stat_at(diff, n, m, sigma_lo);
    let t_hi = t_stat_at(diff, n, m, sigma_hi);
    // ties xbar == ybar take the xbar <= ybar branch
    let (p_s, t_used) = if diff <= 0.0 { (1.0, t_lo) } else { (0.5, t_hi) };
    let phi = if t_used == f64::NEG_INFINITY {
        0.0
    } else if t_used == f64::INFINITY {
        1.0
    } else {
        std_normal_cdf(t_used)
    };
    let p_c_raw = 1.0 - phi + beta;
    Ok(TwoSampleResult {
        t_at_sigma_lo: t_lo,
        t_at_sigma_hi: t_hi,
        xbar,
        ybar,
        p_s,
        p_c_raw,
        p_c: p_c_raw.min(1.0),
        sigma_lo,
        sigma_hi,
    })
}
