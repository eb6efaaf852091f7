//! Valid p-values (VpV) for composite null hypotheses.
//!
//! A p-value is *valid* when `Pr(p <= alpha | H0) <= alpha` for every alpha,
//! even though H0 carries an unknown nuisance parameter. This crate builds
//! the two classical constructions —
//!
//! * `p_S`: the plug-in p-value maximized over the whole parameter space, and
//! * `p_C`: the plug-in p-value maximized over a 1-beta confidence set for
//!   the nuisance parameter, plus beta —
//!
//! for Kolmogorov-Smirnov goodness-of-fit tests (exponential rate, normal
//! mean with unit variance, normal scale with zero mean) and for the normal
//! two-sample problem with a common unknown variance. Around them sit the
//! supporting pieces: exact finite-n Kolmogorov null distributions, maximum
//! likelihood-ratio confidence intervals, classical baseline tests
//! (Shapiro-Wilk, t, Welch, Wilcoxon), and a deterministic parallel Monte
//! Carlo engine for power studies, expected p-values (EPV), partial EPVs,
//! and Youden-index threshold analysis.

// reference constants are written out to full precision on purpose
#![allow(clippy::excessive_precision)]
// negated comparisons like !(x > 0.0) also reject NaN, which is the point
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baseline;
pub mod confidence;
pub mod dist;
pub mod epv;
pub mod error;
pub mod ks;
pub mod mc;
pub mod special;
pub mod vpv;

pub use dist::DistFamily;
pub use error::{Error, Result};
pub use ks::{kolmogorov_null_cdf, KsMinimum, NullFamily, Sample};
pub use mc::RandomStream;
