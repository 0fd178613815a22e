//! Metropolis sampling of the joint eigenvalue density, used as an
//! independent statistical cross-check of the deterministic gap
//! computations.
//!
//! The target density on ℝ^N is proportional to
//! ∏_l (1+λ_l²)^{−(N+a)} · ∏_{j<k} |λ_k − λ_j|², sampled by single-site
//! Metropolis moves with Cauchy-shaped proposals (heavy tails match the
//! target, so the walker crosses between tail regions easily).  The
//! proposal width is tuned toward 0.35 acceptance during burn-in and
//! frozen afterwards; all randomness comes from a counter-based generator
//! seeded explicitly, so runs are reproducible bit for bit.

use crate::ensemble::{EnsembleParams, IntervalSpec};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct MCConfig {
    pub params: EnsembleParams,
    /// Total sweeps (each sweep proposes one move per eigenvalue).
    pub sweeps: usize,
    /// Sweeps discarded while the proposal width is being tuned.
    pub burn_in: usize,
    /// Initial proposal width; adapted during burn-in.
    pub proposal_width: f64,
    pub seed: u64,
    /// Keep every `thinning`-th post-burn-in sweep.
    pub thinning: usize,
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.sweeps <= self.burn_in {
            return Err(Error::Domain(format!(
                "need sweeps > burn_in, got {} <= {}",
                self.sweeps, self.burn_in
            )));
        }
        if !(self.proposal_width > 0.0) || !self.proposal_width.is_finite() {
            return Err(Error::Domain(format!(
                "proposal width must be positive, got {}",
                self.proposal_width
            )));
        }
        if self.thinning == 0 {
            return Err(Error::Domain("thinning must be at least 1".into()));
        }
        Ok(())
    }
}

/// A completed sampling run: thinned configurations plus the tuning
/// outcome.
#[derive(Debug, Clone)]
pub struct SampleRun {
    /// Thinned post-burn-in eigenvalue configurations, each of length N.
    pub samples: Vec<Vec<f64>>,
    /// Acceptance fraction over the post-burn-in phase.
    pub acceptance: f64,
    /// Proposal width in effect after tuning.
    pub proposal_width: f64,
}

/// An empirical gap probability with a batch-means error bar.
#[derive(Debug, Clone, Copy)]
pub struct GapEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Binomial-equivalent sample count value·(1−value)/stderr²; equals
    /// the raw thinned count when the frequency is degenerate (0 or 1).
    pub n_effective: usize,
}

// Change in log-density when λ_i moves to `new`; −∞ on coincidence or
// overflow, which the acceptance step then rejects.
fn delta_log_density(params: &EnsembleParams, state: &[f64], i: usize, new: f64) -> f64 {
    let expo = params.n as f64 + params.a;
    let old = state[i];
    let mut d = -expo * ((1.0 + new * new).ln() - (1.0 + old * old).ln());
    for (j, &l) in state.iter().enumerate() {
        if j != i {
            d += 2.0 * ((new - l).abs().ln() - (old - l).abs().ln());
        }
    }
    if d.is_nan() {
        f64::NEG_INFINITY
    } else {
        d
    }
}

/// Runs the Metropolis chain and returns the thinned sample stream.
pub fn sample(config: &MCConfig) -> Result<SampleRun> {
    config.validate()?;
    let n = config.params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    // start from Cauchy quantiles so the walker begins spread out
    let mut state: Vec<f64> = (1..=n)
        .map(|i| (std::f64::consts::PI * (i as f64 / (n as f64 + 1.0) - 0.5)).tan())
        .collect();
    let mut width = config.proposal_width;
    let mut kept = Vec::with_capacity((config.sweeps - config.burn_in) / config.thinning + 1);
    let (mut accepted, mut proposed) = (0_u64, 0_u64);
    let (mut tune_acc, mut tune_prop) = (0_u64, 0_u64);
    const TUNE_EVERY: usize = 100;
    for sweep in 0..config.sweeps {
        let tuning = sweep < config.burn_in;
        for i in 0..n {
            let step = width * (std::f64::consts::PI * (rng.gen::<f64>() - 0.5)).tan();
            let proposal = state[i] + step;
            let d = delta_log_density(&config.params, &state, i, proposal);
            let accept = d >= 0.0 || rng.gen::<f64>().ln() < d;
            if accept {
                state[i] = proposal;
            }
            if tuning {
                tune_prop += 1;
                tune_acc += accept as u64;
            } else {
                proposed += 1;
                accepted += accept as u64;
            }
        }
        if tuning && (sweep + 1) % TUNE_EVERY == 0 && tune_prop > 0 {
            let rate = tune_acc as f64 / tune_prop as f64;
            width = (width * (2.0 * (rate - 0.35)).exp()).clamp(1e-3, 1e3);
            tune_acc = 0;
            tune_prop = 0;
        }
        if !tuning && (sweep - config.burn_in) % config.thinning == 0 {
            kept.push(state.clone());
        }
    }
    Ok(SampleRun {
        samples: kept,
        acceptance: if proposed > 0 {
            accepted as f64 / proposed as f64
        } else {
            0.0
        },
        proposal_width: width,
    })
}

// Mean and batch-means standard error of a sequence of correlated 0/1
// (or real) observations: √M batches of equal length, sample variance of
// the batch means.
fn batch_mean_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len();
    let mean = xs.iter().sum::<f64>() / m as f64;
    let nb = (m as f64).sqrt().floor() as usize;
    if nb < 2 {
        return (mean, f64::INFINITY);
    }
    let len = m / nb;
    let mut var = 0.0;
    for b in 0..nb {
        let bm = xs[b * len..(b + 1) * len].iter().sum::<f64>() / len as f64;
        var += (bm - mean) * (bm - mean);
    }
    var /= (nb - 1) as f64;
    (mean, (var / nb as f64).sqrt())
}

fn excludes(segments: &[(f64, f64)], config: &[f64]) -> bool {
    config
        .iter()
        .all(|&l| segments.iter().all(|&(lo, hi)| !(lo < l && l < hi)))
}

/// Fraction of configurations with no eigenvalue in the interval, with a
/// batch-means error bar.
pub fn estimate_gap(samples: &[Vec<f64>], interval: &IntervalSpec) -> Result<GapEstimate> {
    if samples.is_empty() {
        return Err(Error::Domain("no samples".into()));
    }
    let segments = interval.segments()?;
    let flags: Vec<f64> = samples
        .iter()
        .map(|c| excludes(&segments, c) as u64 as f64)
        .collect();
    let (value, stderr) = batch_mean_stderr(&flags);
    let n_effective = if value > 0.0 && value < 1.0 && stderr > 0.0 && stderr.is_finite() {
        (value * (1.0 - value) / (stderr * stderr)).round() as usize
    } else {
        samples.len()
    };
    Ok(GapEstimate { value, stderr, n_effective })
}

/// An empirical eigenvalue density histogram; `density` integrates to the
/// mean number of eigenvalues falling inside the window, so the natural
/// comparison is the diagonal of the correlation kernel.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    /// Bin edges, length bins+1.
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    /// Batch-means standard error of each density value.
    pub stderr: Vec<f64>,
}

/// Histograms the sampled eigenvalues over `bins` equal cells of
/// (lo, hi), normalised per configuration and per unit length.
pub fn density_profile(
    samples: &[Vec<f64>],
    lo: f64,
    hi: f64,
    bins: usize,
) -> Result<DensityProfile> {
    if samples.is_empty() {
        return Err(Error::Domain("no samples".into()));
    }
    if !(lo < hi) || bins == 0 {
        return Err(Error::Domain(format!(
            "need lo < hi and bins > 0, got ({lo}, {hi}) with {bins} bins"
        )));
    }
    let m = samples.len();
    let dx = (hi - lo) / bins as f64;
    // per-configuration counts in each bin, batched for the error bars
    let nb = ((m as f64).sqrt().floor() as usize).max(1);
    let len = (m / nb).max(1);
    let nb = m / len;
    let mut batch_counts = vec![vec![0.0_f64; bins]; nb];
    let mut total = vec![0.0_f64; bins];
    for (si, config) in samples.iter().enumerate() {
        for &l in config {
            if l >= lo && l < hi {
                let b = (((l - lo) / dx) as usize).min(bins - 1);
                total[b] += 1.0;
                let batch = si / len;
                if batch < nb {
                    batch_counts[batch][b] += 1.0;
                }
            }
        }
    }
    let edges: Vec<f64> = (0..=bins).map(|k| lo + dx * k as f64).collect();
    let density: Vec<f64> = total.iter().map(|&c| c / (m as f64 * dx)).collect();
    let mut stderr = vec![f64::INFINITY; bins];
    if nb >= 2 {
        for b in 0..bins {
            let used_mean = batch_counts.iter().map(|bc| bc[b]).sum::<f64>() / (nb * len) as f64;
            let mut var = 0.0;
            for bc in &batch_counts {
                let bm = bc[b] / len as f64;
                var += (bm - used_mean) * (bm - used_mean);
            }
            var /= (nb - 1) as f64;
            stderr[b] = (var / nb as f64).sqrt() / dx;
        }
    }
    Ok(DensityProfile { edges, density, stderr })
}
