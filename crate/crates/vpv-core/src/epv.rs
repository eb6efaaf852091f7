//! Monte Carlo engine for expected p-values, partial EPVs, power studies,
//! Youden-index threshold analysis, and the likelihood-ratio density
//! identity diagnostics.

use crate::baseline::swt_composite;
use crate::dist::{std_normal_cdf, std_normal_quantile, DistFamily};
use crate::error::{Error, Result};
use crate::ks::{NullFamily, Sample};
use crate::mc::{collect_replications, run_replications, Accumulator, RandomStream};
use crate::vpv::{gof_vpv, two_sample_vpv, Decision, IntervalKind};
use rand_chacha::ChaCha8Rng;

/// Monte Carlo estimate of an expected p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpvEstimate {
    pub value: f64,
    pub std_err: f64,
    pub reps: u64,
    pub kind: EpvKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpvKind {
    EpvS,
    EpvC,
    Plain,
    Partial,
}

fn estimate(acc: &Accumulator, kind: EpvKind) -> EpvEstimate {
    EpvEstimate { value: acc.mean(), std_err: acc.std_err(), reps: acc.count, kind }
}

fn check_reps(reps: u64) -> Result<()> {
    if reps < 1000 {
        return Err(Error::InvalidParameter { name: "reps", value: reps as f64 });
    }
    Ok(())
}

/// Alternative data-generating designs for the goodness-of-fit studies.
///
/// Each design transforms draws from a base family into the observations
/// X_i; the letters match the experiment configuration tags.
#[derive(Debug, Clone, PartialEq)]
pub enum AlternativeDesign {
    /// X = xi - 0.03, xi ~ Gamma(shape 1, rate 2).
    A,
    /// X = xi - e^3, xi ~ LogNormal(5, 1).
    B,
    /// X = xi - 0.45, xi ~ chi-square(3).
    C,
    /// X = xi - 0.3, xi ~ Weibull(shape 1, scale 5).
    D,
    /// X = xi/eta - e^3/2, xi ~ LogNormal(5, 1), eta ~ N(2, 1); no mean exists.
    F,
    /// X ~ Cauchy(0, 1/2).
    Cauchy,
    /// X = base draw - shift.
    Custom { base: DistFamily, shift: f64 },
}

impl AlternativeDesign {
    pub fn generate(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        use AlternativeDesign::*;
        match self {
            A => {
                let g = DistFamily::Gamma { shape: 1.0, scale: 0.5 };
                (0..n).map(|_| g.sample_one(rng) - 0.03).collect()
            }
            B => {
                let g = DistFamily::LogNormal { mu: 5.0, sigma: 1.0 };
                let c = 3f64.exp();
                (0..n).map(|_| g.sample_one(rng) - c).collect()
            }
            C => {
                let g = DistFamily::ChiSquare { df: 3.0 };
                (0..n).map(|_| g.sample_one(rng) - 0.45).collect()
            }
            D => {
                let g = DistFamily::Weibull { shape: 1.0, scale: 5.0 };
                (0..n).map(|_| g.sample_one(rng) - 0.3).collect()
            }
            F => {
                let num = DistFamily::LogNormal { mu: 5.0, sigma: 1.0 };
                let den = DistFamily::Normal { mean: 2.0, sd: 1.0 };
                let c = 3f64.exp() / 2.0;
                (0..n)
                    .map(|_| num.sample_one(rng) / den.sample_one(rng) - c)
                    .collect()
            }
            Cauchy => {
                let g = DistFamily::Cauchy { location: 0.0, scale: 0.5 };
                (0..n).map(|_| g.sample_one(rng)).collect()
            }
            Custom { base, shift } => (0..n).map(|_| base.sample_one(rng) - shift).collect(),
        }
    }

    pub fn label(&self) -> String {
        use AlternativeDesign::*;
        match self {
            A => "A".into(),
            B => "B".into(),
            C => "C".into(),
            D => "D".into(),
            F => "F".into(),
            Cauchy => "cauchy".into(),
            Custom { base, shift } => format!("custom({base:?}-{shift})"),
        }
    }
}

/// Plain EPV by the pairing form: Pr(T0 >= TA) estimated from independent
/// draws of the statistic under H0 and H1.
pub fn epv_plain<F0, F1>(
    t0_sampler: F0,
    t1_sampler: F1,
    reps: u64,
    stream: RandomStream,
) -> Result<EpvEstimate>
where
    F0: Fn(&mut ChaCha8Rng) -> f64 + Sync,
    F1: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    check_reps(reps)?;
    let acc = run_replications(stream, reps, 1, |rng, out| {
        let t0 = t0_sampler(rng);
        let t1 = t1_sampler(rng);
        out.push(if t0 >= t1 { 1.0 } else { 0.0 });
    });
    Ok(estimate(&acc[0], EpvKind::Plain))
}

/// Plain EPV by the integrated-power form: E[1 - F0(TA)] over H1 draws.
pub fn epv_integrated<C, F1>(
    null_cdf: C,
    t1_sampler: F1,
    reps: u64,
    stream: RandomStream,
) -> Result<EpvEstimate>
where
    C: Fn(f64) -> f64 + Sync,
    F1: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    check_reps(reps)?;
    let acc = run_replications(stream, reps, 1, |rng, out| {
        out.push(1.0 - null_cdf(t1_sampler(rng)));
    });
    Ok(estimate(&acc[0], EpvKind::Plain))
}

/// EPV_S and EPV_C for a goodness-of-fit family under an alternative
/// design: the means of the raw p_S and p_C over replications (the +beta
/// of EPV_C rides along inside p_C).
pub fn epv_gof(
    family: NullFamily,
    design: &AlternativeDesign,
    n: usize,
    beta: f64,
    reps: u64,
    stream: RandomStream,
) -> Result<(EpvEstimate, EpvEstimate)> {
    check_reps(reps)?;
    let acc = run_replications(stream, reps, 2, |rng, out| {
        let s = Sample::new(design.generate(rng, n)).expect("design sample");
        let r = gof_vpv(&s, family, beta).expect("gof vpv");
        out.push(r.p_s_raw);
        out.push(r.p_c_raw);
    });
    Ok((estimate(&acc[0], EpvKind::EpvS), estimate(&acc[1], EpvKind::EpvC)))
}

/// Joint power/EPV study for one (family, design, n) cell: rejection rates
/// of the p_S-, p_C- and SWt-based tests at `alpha`, plus both EPVs, all
/// from a single Monte Carlo pass.
pub struct GofStudyResult {
    pub power_s: Accumulator,
    pub power_c: Accumulator,
    pub power_swt: Accumulator,
    pub epv_s: Accumulator,
    pub epv_c: Accumulator,
}

#[allow(clippy::too_many_arguments)]
pub fn gof_study(
    family: NullFamily,
    design: &AlternativeDesign,
    n: usize,
    beta: f64,
    alpha: f64,
    reps: u64,
    stream: RandomStream,
) -> Result<GofStudyResult> {
    check_reps(reps)?;
    let acc = run_replications(stream, reps, 5, |rng, out| {
        let s = Sample::new(design.generate(rng, n)).expect("design sample");
        let r = gof_vpv(&s, family, beta).expect("gof vpv");
        let swt = swt_composite(&s, alpha).expect("swt");
        out.push(if r.p_s <= alpha { 1.0 } else { 0.0 });
        out.push(if r.p_c <= alpha { 1.0 } else { 0.0 });
        out.push(if swt == Decision::Reject { 1.0 } else { 0.0 });
        out.push(r.p_s_raw);
        out.push(r.p_c_raw);
    });
    let mut it = acc.into_iter();
    Ok(GofStudyResult {
        power_s: it.next().unwrap(),
        power_c: it.next().unwrap(),
        power_swt: it.next().unwrap(),
        epv_s: it.next().unwrap(),
        epv_c: it.next().unwrap(),
    })
}

/// Rejection rates in the two-sample problem: the p_C tests (both interval
/// variants) and the one-sided Student/Welch baselines, one MC pass.
pub struct TwoSampleStudyResult {
    pub pc_lr: Accumulator,
    pub pc_chisq: Accumulator,
    pub student: Accumulator,
    pub welch: Accumulator,
}

#[allow(clippy::too_many_arguments)]
pub fn two_sample_study<GX, GY>(
    gen_x: GX,
    gen_y: GY,
    n: usize,
    m: usize,
    beta: f64,
    alpha: f64,
    reps: u64,
    stream: RandomStream,
) -> Result<TwoSampleStudyResult>
where
    GX: Fn(&mut ChaCha8Rng, usize) -> Vec<f64> + Sync,
    GY: Fn(&mut ChaCha8Rng, usize) -> Vec<f64> + Sync,
{
    use crate::baseline::{t_test, Alternative, TVariant};
    check_reps(reps)?;
    let acc = run_replications(stream, reps, 4, |rng, out| {
        let x = Sample::new(gen_x(rng, n)).expect("x sample");
        let y = Sample::new(gen_y(rng, m)).expect("y sample");
        let lr = two_sample_vpv(&x, &y, beta, IntervalKind::LikelihoodRatio).expect("vpv lr");
        let ch = two_sample_vpv(&x, &y, beta, IntervalKind::ChiSquareSimple).expect("vpv chisq");
        let t = t_test(&x, Some(&y), 0.0, TVariant::Pooled, Alternative::Greater).expect("t");
        let w = t_test(&x, Some(&y), 0.0, TVariant::Welch, Alternative::Greater).expect("welch");
        out.push(if lr.p_c <= alpha { 1.0 } else { 0.0 });
        out.push(if ch.p_c <= alpha { 1.0 } else { 0.0 });
        out.push(if t.p_value <= alpha { 1.0 } else { 0.0 });
        out.push(if w.p_value <= alpha { 1.0 } else { 0.0 });
    });
    let mut it = acc.into_iter();
    Ok(TwoSampleStudyResult {
        pc_lr: it.next().unwrap(),
        pc_chisq: it.next().unwrap(),
        student: it.next().unwrap(),
        welch: it.next().unwrap(),
    })
}

/// Partial EPV over significance levels [alpha_lo, alpha_hi]:
/// 1 - E[max(0, alpha_hi - max(p, alpha_lo))].
pub fn pepv<P>(
    p_sampler: P,
    alpha_lo: f64,
    alpha_hi: f64,
    reps: u64,
    stream: RandomStream,
) -> Result<EpvEstimate>
where
    P: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    check_reps(reps)?;
    if !(0.0..=1.0).contains(&alpha_lo) || !(alpha_hi <= 1.0) || !(alpha_lo < alpha_hi) {
        return Err(Error::EmptyDomain(format!(
            "invalid pEPV range [{alpha_lo}, {alpha_hi}]"
        )));
    }
    let acc = run_replications(stream, reps, 1, |rng, out| {
        let p = p_sampler(rng);
        out.push((alpha_hi - p.max(alpha_lo)).max(0.0));
    });
    let mut e = estimate(&acc[0], EpvKind::Partial);
    e.value = 1.0 - e.value;
    Ok(e)
}

/// Search grid for the Youden threshold.
#[derive(Debug, Clone, Copy)]
pub struct SearchGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub log_spaced: bool,
}

impl SearchGrid {
    pub fn linear(lo: f64, hi: f64, points: usize) -> Self {
        SearchGrid { lo, hi, points, log_spaced: false }
    }

    /// 400-point log grid, the default for likelihood-ratio statistics.
    pub fn log(lo: f64, hi: f64, points: usize) -> Self {
        SearchGrid { lo, hi, points, log_spaced: true }
    }

    fn at(&self, i: usize) -> f64 {
        let t = i as f64 / (self.points - 1) as f64;
        if self.log_spaced {
            self.lo * (self.hi / self.lo).powf(t)
        } else {
            self.lo + (self.hi - self.lo) * t
        }
    }
}

/// Maximizer of the Youden objective Pr(T0 < c) + Pr(T1 >= c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YoudenResult {
    pub c_star: f64,
    pub objective_at_c: f64,
    /// True when the objective is flat at 1 (no discrimination).
    pub degenerate: bool,
}

/// Youden threshold from Monte Carlo draws of the statistic under H0 and
/// H1; the grid argmax is refined over the pooled sample points bracketing
/// it.
pub fn youden_threshold_empirical(t0: &[f64], t1: &[f64], grid: &SearchGrid) -> YoudenResult {
    let mut s0 = t0.to_vec();
    let mut s1 = t1.to_vec();
    s0.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s1.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let obj = |c: f64| -> f64 {
        let below0 = s0.partition_point(|&x| x < c) as f64 / s0.len() as f64;
        let below1 = s1.partition_point(|&x| x < c) as f64 / s1.len() as f64;
        below0 + 1.0 - below1
    };
    let (mut best_c, mut best_j) = (grid.at(0), obj(grid.at(0)));
    let mut best_i = 0;
    for i in 1..grid.points {
        let c = grid.at(i);
        let j = obj(c);
        if j > best_j {
            best_j = j;
            best_c = c;
            best_i = i;
        }
    }
    // exact refinement: the empirical objective only changes at data points
    let lo = grid.at(best_i.saturating_sub(1));
    let hi = grid.at((best_i + 1).min(grid.points - 1));
    for src in [&s0, &s1] {
        let a = src.partition_point(|&x| x < lo);
        let b = src.partition_point(|&x| x < hi);
        for &c in &src[a..b] {
            let j = obj(c);
            if j > best_j {
                best_j = j;
                best_c = c;
            }
        }
    }
    let noise = 3.0 * (0.25 / s0.len() as f64 + 0.25 / s1.len() as f64).sqrt();
    YoudenResult { c_star: best_c, objective_at_c: best_j, degenerate: best_j - 1.0 <= noise }
}

/// Youden threshold for analytically known CDFs; grid argmax plus
/// golden-section refinement.
pub fn youden_threshold_analytic<C0, C1>(cdf0: C0, cdf1: C1, grid: &SearchGrid) -> YoudenResult
where
    C0: Fn(f64) -> f64,
    C1: Fn(f64) -> f64,
{
    let obj = |c: f64| cdf0(c) + 1.0 - cdf1(c);
    let mut best_i = 0;
    let mut best_j = f64::NEG_INFINITY;
    for i in 0..grid.points {
        let j = obj(grid.at(i));
        if j > best_j {
            best_j = j;
            best_i = i;
        }
    }
    let mut a = grid.at(best_i.saturating_sub(1));
    let mut b = grid.at((best_i + 1).min(grid.points - 1));
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (obj(x1), obj(x2));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-10 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = obj(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = obj(x2);
        }
    }
    let (c_star, objective) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    let (c_star, objective) = if best_j > objective {
        (grid.at(best_i), best_j)
    } else {
        (c_star, objective)
    };
    YoudenResult {
        c_star,
        objective_at_c: objective,
        degenerate: objective - 1.0 <= 1e-9,
    }
}

/// The conjugate normal-mean likelihood-ratio model:
/// LR_n = exp(delta sum(X)/sigma^2 - n delta^2/(2 sigma^2)).
///
/// Everything depends on tau = delta sqrt(n)/sigma: under H0 the statistic
/// is exp(tau Z - tau^2/2) with Z standard normal; under H1 the same with
/// Z ~ N(tau, 1).
#[derive(Debug, Clone, Copy)]
pub struct NormalMeanLr {
    pub delta: f64,
    pub sigma: f64,
    pub n: usize,
}

impl NormalMeanLr {
    pub fn tau(&self) -> f64 {
        self.delta * (self.n as f64).sqrt() / self.sigma
    }

    pub fn sample_lr(&self, rng: &mut ChaCha8Rng, under_h1: bool) -> f64 {
        let tau = self.tau();
        let z = DistFamily::Normal { mean: if under_h1 { tau } else { 0.0 }, sd: 1.0 }
            .sample_one(rng);
        (tau * z - tau * tau / 2.0).exp()
    }

    /// F0 of the LR statistic.
    pub fn null_cdf(&self, lr: f64) -> f64 {
        if lr <= 0.0 {
            return 0.0;
        }
        let tau = self.tau();
        std_normal_cdf(lr.ln() / tau + tau / 2.0)
    }

    /// Level-alpha critical value of the LR statistic.
    pub fn critical_value(&self, alpha: f64) -> f64 {
        let tau = self.tau();
        (tau * (std_normal_quantile(1.0 - alpha) - tau / 2.0)).exp()
    }
}

/// A finite mixture prior over the alternative mean, defining the Bayes
/// factor statistic B_n = sum_j w_j exp(theta_j S/sigma^2 - n theta_j^2/(2 sigma^2)).
#[derive(Debug, Clone)]
pub struct NormalMeanBf {
    pub thetas: Vec<f64>,
    pub weights: Vec<f64>,
    pub sigma: f64,
    pub n: usize,
}

impl NormalMeanBf {
    pub fn bf_from_sum(&self, s: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let n = self.n as f64;
        self.thetas
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * (t * s / s2 - n * t * t / (2.0 * s2)).exp())
            .sum()
    }

    pub fn sample_bf(&self, rng: &mut ChaCha8Rng, under_h1: bool) -> f64 {
        let mean = if under_h1 {
            // theta drawn from the prior
            let u: f64 = rand::Rng::gen(rng);
            let mut acc = 0.0;
            let mut chosen = *self.thetas.last().unwrap();
            for (&t, &w) in self.thetas.iter().zip(&self.weights) {
                acc += w;
                if u <= acc {
                    chosen = t;
                    break;
                }
            }
            chosen
        } else {
            0.0
        };
        let n = self.n as f64;
        let s = DistFamily::Normal { mean: n * mean, sd: self.sigma * n.sqrt() }.sample_one(rng);
        self.bf_from_sum(s)
    }
}

/// Histogram comparison of the H1 and H0 densities of a statistic against
/// the identity f1(u) = u f0(u).
#[derive(Debug, Clone, Copy)]
pub struct DensityRatioReport {
    pub bins: usize,
    /// max over bins of |(f1/f0)/u - 1|.
    pub max_rel_deviation: f64,
    /// Monte Carlo E[statistic | H0] (should be 1).
    pub mean_h0: f64,
    pub mean_h0_std_err: f64,
}

fn density_ratio_report(mut h0: Vec<f64>, mut h1: Vec<f64>, bins: usize) -> DensityRatioReport {
    let mut acc = Accumulator::default();
    for &v in &h0 {
        acc.push(v);
    }
    h0.sort_by(|a, b| a.partial_cmp(b).unwrap());
    h1.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut pooled: Vec<f64> = h0.iter().chain(h1.iter()).copied().collect();
    pooled.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // central 98% of the pooled mass, split into equal-mass bins
    let np = pooled.len();
    let lo_i = np / 100;
    let hi_i = np - np / 100 - 1;
    let edges: Vec<f64> = (0..=bins)
        .map(|k| pooled[lo_i + k * (hi_i - lo_i) / bins])
        .collect();
    let mut max_dev: f64 = 0.0;
    for k in 0..bins {
        let (a, b) = (edges[k], edges[k + 1]);
        if !(b > a) {
            continue;
        }
        let i0 = h0.partition_point(|&x| x < a);
        let j0 = h0.partition_point(|&x| x < b);
        let i1 = h1.partition_point(|&x| x < a);
        let j1 = h1.partition_point(|&x| x < b);
        if j0 == i0 || j1 == i1 {
            continue;
        }
        let mass0 = (j0 - i0) as f64 / h0.len() as f64;
        let mass1 = (j1 - i1) as f64 / h1.len() as f64;
        // representative u: the H0-weighted mean of the bin, which makes
        // mass1/mass0 = u exactly up to MC noise
        let u = h0[i0..j0].iter().sum::<f64>() / (j0 - i0) as f64;
        let dev = (mass1 / mass0 / u - 1.0).abs();
        max_dev = max_dev.max(dev);
    }
    DensityRatioReport {
        bins,
        max_rel_deviation: max_dev,
        mean_h0: acc.mean(),
        mean_h0_std_err: acc.std_err(),
    }
}

/// Check the identity f_{LR,1}(u) = u f_{LR,0}(u) by comparing binned
/// Monte Carlo densities of LR_n under H1 and H0.
pub fn lr_identity_check(
    model: &NormalMeanLr,
    reps: u64,
    bins: usize,
    stream: RandomStream,
) -> Result<DensityRatioReport> {
    check_reps(reps)?;
    let rows = collect_replications(stream, reps, 2, |rng, out| {
        out.push(model.sample_lr(rng, false));
        out.push(model.sample_lr(rng, true));
    });
    let h0: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let h1: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    Ok(density_ratio_report(h0, h1, bins))
}

/// Same identity for the Bayes factor against the prior-mixture
/// alternative.
pub fn bf_identity_check(
    model: &NormalMeanBf,
    reps: u64,
    bins: usize,
    stream: RandomStream,
) -> Result<DensityRatioReport> {
    check_reps(reps)?;
    let rows = collect_replications(stream, reps, 2, |rng, out| {
        out.push(model.sample_bf(rng, false));
        out.push(model.sample_bf(rng, true));
    });
    let h0: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let h1: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    Ok(density_ratio_report(h0, h1, bins))
}

/// Closed-form threshold analysis for the normal-mean LR with
/// delta = tau sigma / sqrt(n).
#[derive(Debug, Clone, Copy)]
pub struct NormalLrReport {
    /// Pr(LR > 1 | H0) = 1 - Phi(tau/2).
    pub type1_at_unit_threshold: f64,
    /// Pr(LR > 1 | H1) = Phi(tau/2).
    pub power_at_unit_threshold: f64,
    pub c_prime: Option<f64>,
    pub power_at_c_prime: Option<f64>,
}

pub fn normal_lr_analysis(tau: f64, target_alpha: Option<f64>) -> Result<NormalLrReport> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter { name: "tau", value: tau });
    }
    let type1 = 1.0 - std_normal_cdf(tau / 2.0);
    let power = std_normal_cdf(tau / 2.0);
    let (c_prime, power_at) = match target_alpha {
        None => (None, None),
        Some(a) => {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::ProbabilityOutOfRange(a));
            }
            let z = std_normal_quantile(1.0 - a);
            (
                Some((tau * (z - tau / 2.0)).exp()),
                Some(std_normal_cdf(tau - z)),
            )
        }
    };
    Ok(NormalLrReport {
        type1_at_unit_threshold: type1,
        power_at_unit_threshold: power,
        c_prime,
        power_at_c_prime: power_at,
    })
}

/// One row of a power-minus-alpha sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub power: f64,
    pub diff: f64,
    pub std_err: f64,
}

/// Threshold the same per-replication p-values at every alpha (one MC
/// pass reused across the list).
pub fn power_minus_alpha_sweep<P>(
    p_sampler: P,
    alphas: &[f64],
    reps: u64,
    stream: RandomStream,
) -> Result<Vec<SweepRow>>
where
    P: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    check_reps(reps)?;
    for &a in alphas {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::ProbabilityOutOfRange(a));
        }
    }
    let rows = collect_replications(stream, reps, 1, |rng, out| {
        out.push(p_sampler(rng));
    });
    Ok(alphas
        .iter()
        .map(|&a| {
            let hits = rows.iter().filter(|r| r[0] <= a).count() as f64;
            let power = hits / reps as f64;
            SweepRow {
                alpha: a,
                power,
                diff: power - a,
                std_err: (power * (1.0 - power) / reps as f64).sqrt(),
            }
        })
        .collect())
}

/// Diagnostic for the lower power bound implied by the unbiasedness-style
/// pEPV inequality: when pEPV(0, alpha) <= 1 - alpha^2/2, the power must be
/// at least 0.5 alpha (1 + C_alpha) for the LR statistic.
#[derive(Debug, Clone, Copy)]
pub struct Prop6Report {
    pub alpha: f64,
    pub pepv_0_alpha: f64,
    pub pepv_std_err: f64,
    /// 1 - alpha^2/2.
    pub pepv_bound: f64,
    pub precondition_holds: bool,
    pub power: f64,
    pub power_std_err: f64,
    pub critical_value: f64,
    /// 0.5 alpha + 0.5 alpha C_alpha.
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

pub fn prop6_bound_check(
    model: &NormalMeanLr,
    alpha: f64,
    reps: u64,
    stream: RandomStream,
) -> Result<Prop6Report> {
    check_reps(reps)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ProbabilityOutOfRange(alpha));
    }
    let acc = run_replications(stream, reps, 2, |rng, out| {
        let lr = model.sample_lr(rng, true);
        let p = 1.0 - model.null_cdf(lr);
        out.push((alpha - p.max(0.0)).max(0.0));
        out.push(if p < alpha { 1.0 } else { 0.0 });
    });
    let pepv_val = 1.0 - acc[0].mean();
    let power = acc[1].mean();
    let power_se = acc[1].std_err();
    let c_alpha = model.critical_value(alpha);
    let rhs = 0.5 * alpha * (1.0 + c_alpha);
    let pepv_bound = 1.0 - alpha * alpha / 2.0;
    let precondition_holds = pepv_val <= pepv_bound;
    Ok(Prop6Report {
        alpha,
        pepv_0_alpha: pepv_val,
        pepv_std_err: acc[0].std_err(),
        pepv_bound,
        precondition_holds,
        power,
        power_std_err: power_se,
        critical_value: c_alpha,
        rhs,
        margin: power - rhs,
        holds: !precondition_holds || power >= rhs - 3.0 * power_se,
    })
}
