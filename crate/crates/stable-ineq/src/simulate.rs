//! Monte Carlo engine: symmetric stable increments, the Euler scheme for
//! dY = σ(Y⁻)dX, occupation diagnostics and the small-time kernel check.
//!
//! Increments use the Chambers-Mallows-Stuck transformation, scaled by
//! dt^{1/α} so that X_dt has characteristic function exp(-dt·|ξ|^α)
//! (matching the Δ^{α/2} generator normalization).
//!
//! Ensembles draw from counter-based per-path streams: path i uses the
//! ChaCha stream (seed, i), so results are reproducible under any
//! parallel schedule. Aggregation reduces per-path statistics in index
//! order with pairwise summation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Weight;
use crate::quad::{self, pairwise_sum};
use crate::special::{constants, StableIndex};

/// Overflow guard: a path leaving ±1e12 is aborted and flagged.
pub const OVERFLOW_GUARD: f64 = 1e12;

/// One draw of X_dt for the symmetric α-stable process.
pub fn stable_increment<R: Rng + ?Sized>(alpha: StableIndex, dt: f64, rng: &mut R) -> f64 {
    let a = alpha.get();
    // U uniform on (-π/2, π/2), W standard exponential
    let u: f64 = (rng.gen::<f64>() - 0.5) * std::f64::consts::PI;
    let w: f64 = -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln();
    let x = (a * u).sin() / u.cos().powf(1.0 / a)
        * (((1.0 - a) * u).cos() / w).powf((1.0 - a) / a);
    dt.powf(1.0 / a) * x
}

/// Configuration of one path of dY = σ(Y⁻)dX.
#[derive(Clone, Debug)]
pub struct PathConfig {
    pub alpha: StableIndex,
    pub weight: Weight,
    pub y0: f64,
    pub dt: f64,
    pub steps: usize,
    pub seed: u64,
}

impl PathConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= 0.1) {
            return Err(Error::InvalidParam(format!(
                "dt must lie in (0, 0.1], got {}",
                self.dt
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidParam("steps must be positive".into()));
        }
        Ok(())
    }
}

/// A simulated trajectory (including the initial state).
#[derive(Clone, Debug)]
pub struct Path {
    pub samples: Vec<f64>,
    pub overflowed: bool,
}

fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

/// Euler iterates Y_{k+1} = Y_k + σ(Y_k)·ΔX_k.
pub fn simulate_path(cfg: &PathConfig) -> Result<Path> {
    cfg.validate()?;
    let mut rng = path_rng(cfg.seed, 0);
    let mut samples = Vec::with_capacity(cfg.steps + 1);
    let mut y = cfg.y0;
    samples.push(y);
    let mut overflowed = false;
    for _ in 0..cfg.steps {
        y += cfg.weight.sigma(y) * stable_increment(cfg.alpha, cfg.dt, &mut rng);
        if y.abs() > OVERFLOW_GUARD || !y.is_finite() {
            overflowed = true;
            break;
        }
        samples.push(y);
    }
    Ok(Path { samples, overflowed })
}

/// Empirical tail estimates with confidence half-widths and the
/// occupation histogram.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub probes: Vec<f64>,
    /// fraction of post-burn-in time spent in (-x, x)^c per probe
    pub tail_estimate: Vec<f64>,
    /// 3σ half-widths from across-path variation
    pub half_width: Vec<f64>,
    /// bin edges (len = occupation.len() + 1)
    pub bin_edges: Vec<f64>,
    /// mean (across paths) fraction of post-burn-in time per bin
    pub bin_occupation: Vec<f64>,
    /// 1σ standard error (across paths) of each bin fraction
    pub bin_se: Vec<f64>,
    pub paths: usize,
    pub overflowed_paths: usize,
    /// post-burn-in time horizon per path
    pub horizon: f64,
}

struct PathStats {
    tail_frac: Vec<f64>,
    bins: Vec<f64>,
    overflowed: bool,
}

/// Step-controlled Euler for one path: the local step is
/// δt = dt·min(1, ((1+|y|)/σ(y))^α), which caps the per-step relative
/// jump scale at dt^{1/α}·|X| and keeps the chain stable where σ grows
/// superlinearly (plain fixed-step Euler compounds heavy-tailed
/// increments there and explodes). Occupation statistics weight each
/// step by its δt; for sublinear σ this is exactly the fixed-step scheme.
fn occupation_of_path(
    cfg: &PathConfig,
    index: u64,
    probes: &[f64],
    edges: &[f64],
    burn_in_time: f64,
) -> PathStats {
    let a = cfg.alpha.get();
    let horizon = cfg.steps as f64 * cfg.dt;
    let mut rng = path_rng(cfg.seed, index);
    let mut y = cfg.y0;
    let mut t = 0.0f64;
    let mut occupied = vec![0.0f64; probes.len()];
    let mut bins = vec![0.0f64; edges.len().saturating_sub(1)];
    let mut kept = 0.0f64;
    let mut overflowed = false;
    while t < horizon {
        let sigma = cfg.weight.sigma(y);
        let h = (((1.0 + y.abs()) / sigma).powf(a)).min(1.0);
        let ddt = cfg.dt * h;
        // left-endpoint occupation: the chain holds state y on [t, t+δt)
        if t >= burn_in_time {
            kept += ddt;
            for (i, &p) in probes.iter().enumerate() {
                if y.abs() > p {
                    occupied[i] += ddt;
                }
            }
            if !edges.is_empty() && y >= edges[0] && y < *edges.last().unwrap() {
                let j = match edges.binary_search_by(|e| e.partial_cmp(&y).unwrap()) {
                    Ok(j) => j.min(bins.len() - 1),
                    Err(j) => j - 1,
                };
                bins[j] += ddt;
            }
        }
        y += sigma * stable_increment(cfg.alpha, ddt, &mut rng);
        t += ddt;
        if y.abs() > OVERFLOW_GUARD || !y.is_finite() {
            overflowed = true;
            break;
        }
    }
    let denom = kept.max(f64::MIN_POSITIVE);
    PathStats {
        tail_frac: occupied.iter().map(|&c| c / denom).collect(),
        bins: bins.iter().map(|&c| c / denom).collect(),
        overflowed,
    }
}

/// Run an ensemble and aggregate occupation statistics without
/// materializing trajectories. Overflowed paths are excluded from the
/// estimates and counted.
pub fn ensemble_occupation(
    cfg: &PathConfig,
    n_paths: usize,
    probes: &[f64],
    bin_edges: &[f64],
    burn_in_fraction: f64,
) -> Result<EnsembleStats> {
    cfg.validate()?;
    if !(0.0..1.0).contains(&burn_in_fraction) {
        return Err(Error::InvalidParam("burn-in fraction must be in [0,1)".into()));
    }
    let horizon = cfg.steps as f64 * cfg.dt;
    let burn_in_time = horizon * burn_in_fraction;
    let stats: Vec<PathStats> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| occupation_of_path(cfg, i + 1, probes, bin_edges, burn_in_time))
        .collect();
    let good: Vec<&PathStats> = stats.iter().filter(|s| !s.overflowed).collect();
    if good.is_empty() {
        return Err(Error::Divergent("all paths overflowed".into()));
    }
    let overflowed_paths = stats.len() - good.len();
    let m = good.len() as f64;
    let mut tail_estimate = Vec::with_capacity(probes.len());
    let mut half_width = Vec::with_capacity(probes.len());
    for i in 0..probes.len() {
        let fr: Vec<f64> = good.iter().map(|s| s.tail_frac[i]).collect();
        let mean = pairwise_sum(&fr) / m;
        let var = pairwise_sum(&fr.iter().map(|&f| (f - mean) * (f - mean)).collect::<Vec<_>>())
            / (m - 1.0).max(1.0);
        tail_estimate.push(mean);
        half_width.push(3.0 * (var / m).sqrt());
    }
    let nbins = bin_edges.len().saturating_sub(1);
    let mut bin_occupation = vec![0.0f64; nbins];
    let mut bin_se = vec![0.0f64; nbins];
    for k in 0..nbins {
        let fr: Vec<f64> = good.iter().map(|s| s.bins[k]).collect();
        let mean = pairwise_sum(&fr) / m;
        let var = pairwise_sum(&fr.iter().map(|&f| (f - mean) * (f - mean)).collect::<Vec<_>>())
            / (m - 1.0).max(1.0);
        bin_occupation[k] = mean;
        bin_se[k] = (var / m).sqrt();
    }
    Ok(EnsembleStats {
        probes: probes.to_vec(),
        tail_estimate,
        half_width,
        bin_edges: bin_edges.to_vec(),
        bin_occupation,
        bin_se,
        paths: n_paths,
        overflowed_paths,
        horizon: horizon - burn_in_time,
    })
}

/// Tail estimates from already-simulated paths (small ensembles).
pub fn ergodic_tail_estimate(
    paths: &[Path],
    probes: &[f64],
    burn_in_fraction: f64,
) -> Result<EnsembleStats> {
    let good: Vec<&Path> = paths.iter().filter(|p| !p.overflowed).collect();
    if good.is_empty() {
        return Err(Error::Divergent("all paths overflowed".into()));
    }
    let m = good.len() as f64;
    let mut tail_estimate = Vec::with_capacity(probes.len());
    let mut half_width = Vec::with_capacity(probes.len());
    for &p in probes {
        let fr: Vec<f64> = good
            .iter()
            .map(|path| {
                let burn = (path.samples.len() as f64 * burn_in_fraction) as usize;
                let post = &path.samples[burn..];
                post.iter().filter(|y| y.abs() > p).count() as f64 / post.len().max(1) as f64
            })
            .collect();
        let mean = pairwise_sum(&fr) / m;
        let var = pairwise_sum(&fr.iter().map(|&f| (f - mean) * (f - mean)).collect::<Vec<_>>())
            / (m - 1.0).max(1.0);
        tail_estimate.push(mean);
        half_width.push(3.0 * (var / m).sqrt());
    }
    Ok(EnsembleStats {
        probes: probes.to_vec(),
        tail_estimate,
        half_width,
        bin_edges: Vec::new(),
        bin_occupation: Vec::new(),
        bin_se: Vec::new(),
        paths: paths.len(),
        overflowed_paths: paths.len() - good.len(),
        horizon: 0.0,
    })
}

/// One time point of the small-time kernel check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelRow {
    pub t: f64,
    pub steps: usize,
    pub hits: u64,
    pub p_hat: f64,
    /// P̂_t(0,B)/(t·ν(0,B)); tends to 1 as t ↓ 0
    pub ratio: f64,
    /// 3σ binomial half-width of the ratio
    pub half_width: f64,
    pub low_statistics: bool,
}

/// Monte Carlo check of lim_{t→0} P_t(0,B)/t = ν(0,B) = a(0)·C_α∫_B|y|^{-1-α}dy.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelCheckReport {
    pub nu: f64,
    pub rows: Vec<KernelRow>,
}

pub fn small_time_kernel_check(
    a_fun: &(dyn Fn(f64) -> f64 + Sync),
    alpha: StableIndex,
    b_interval: (f64, f64),
    t_list: &[f64],
    n_paths: usize,
    dt: f64,
    seed: u64,
) -> Result<KernelCheckReport> {
    let (lo, hi) = b_interval;
    if !(lo < hi) || (lo <= 0.0 && hi >= 0.0) {
        return Err(Error::InvalidParam(format!(
            "B must be an interval away from 0, got ({lo}, {hi})"
        )));
    }
    let a = alpha.get();
    let nu = a_fun(0.0)
        * constants(alpha).levy_kernel
        * quad::tanh_sinh(|y: f64| y.abs().powf(-1.0 - a), lo, hi, 1e-12).value;

    let mut rows = Vec::new();
    for (ti, &t) in t_list.iter().enumerate() {
        let steps = ((t / dt).round() as usize).max(1);
        let step_dt = t / steps as f64;
        let hits: u64 = (0..n_paths as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = path_rng(seed, (ti as u64) << 32 | (i + 1));
                let mut y = 0.0f64;
                for _ in 0..steps {
                    let sigma = a_fun(y).powf(1.0 / a);
                    y += sigma * stable_increment(alpha, step_dt, &mut rng);
                }
                u64::from(y > lo && y < hi)
            })
            .sum();
        let p_hat = hits as f64 / n_paths as f64;
        let ratio = p_hat / (t * nu);
        let half_width =
            3.0 * (p_hat * (1.0 - p_hat) / n_paths as f64).sqrt() / (t * nu);
        rows.push(KernelRow {
            t,
            steps,
            hits,
            p_hat,
            ratio,
            half_width,
            low_statistics: hits < 50,
        });
    }
    Ok(KernelCheckReport { nu, rows })
}
