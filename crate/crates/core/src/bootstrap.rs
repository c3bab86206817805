//! Pairs bootstrap with percentile intervals for a fixed shrinkage matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Result, RidgeError};
use crate::ridge::{CanonicalForm, ShrinkageSpec};

pub const THREADS_ENV: &str = "RIDGEFORGE_THREADS";
pub const MIN_REPLICATES: usize = 100;
pub const DEFAULT_REPLICATES: usize = 10_000;
/// Largest tolerated fraction of discarded replicates.
pub const MAX_DISCARD_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// Rayon pool; `None` uses `RIDGEFORGE_THREADS` or the rayon default.
    Parallel(Option<usize>),
}

#[derive(Debug, Clone, Serialize)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub level: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            replicates: DEFAULT_REPLICATES,
            level: 0.95,
            seed: 0,
            execution: Execution::Parallel(None),
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates < MIN_REPLICATES {
            return Err(RidgeError::invalid(format!(
                "need at least {MIN_REPLICATES} replicates, got {}",
                self.replicates
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(RidgeError::invalid(format!("level must lie in (0, 1), got {}", self.level)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub name: String,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// Interval excludes zero; absent for statistics where that is moot.
    pub significant: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapSummary {
    pub coefficients: Vec<Interval>,
    pub gof: Interval,
    pub replicates_used: usize,
    pub discarded: usize,
    pub level: f64,
    pub seed: u64,
}

impl BootstrapSummary {
    /// 1-based indices of coefficients whose interval excludes zero.
    pub fn significant_set(&self) -> Vec<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, iv)| iv.significant == Some(true))
            .map(|(j, _)| j + 1)
            .collect()
    }
}

/// Linear interpolation between order statistics at 0-based position
/// `q·(m − 1)`.
pub fn quantile(sorted: &[f64], q: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(RidgeError::invalid("quantile of an empty sample"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(RidgeError::invalid(format!("quantile level {q} outside [0, 1]")));
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Replicate `index` draws its rows from its own ChaCha stream, so results do
/// not depend on scheduling.
pub fn replicate_rows(seed: u64, index: usize, n: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// `None` when the resampled Gram matrix is rank deficient in a coordinate
/// left unpenalised.
fn replicate(d: &Dataset, spec: &ShrinkageSpec, seed: u64, index: usize) -> Result<Option<Vec<f64>>> {
    let sample = d.resampled(&replicate_rows(seed, index, d.n()));
    let c = CanonicalForm::relaxed(&sample)?;
    let k = spec.k();
    if c.deficient().iter().any(|&j| k[j] <= 0.0) {
        return Ok(None);
    }
    let mut stats: Vec<f64> = c.beta_for(k).iter().copied().collect();
    stats.push(c.gof_for(k));
    Ok(Some(stats))
}

pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

pub fn bootstrap(d: &Dataset, spec: &ShrinkageSpec, cfg: &BootstrapConfig) -> Result<BootstrapSummary> {
    cfg.validate()?;
    spec.check_dim(d.p())?;
    let m = cfg.replicates;
    let run = |i: usize| replicate(d, spec, cfg.seed, i);
    let outcomes: Vec<Result<Option<Vec<f64>>>> = match cfg.execution {
        Execution::Sequential => (0..m).map(run).collect(),
        Execution::Parallel(threads) => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(t) = threads.or_else(threads_from_env) {
                builder = builder.num_threads(t);
            }
            let pool = builder
                .build()
                .map_err(|e| RidgeError::invalid(format!("thread pool: {e}")))?;
            pool.install(|| (0..m).into_par_iter().map(run).collect())
        }
    };

    let mut kept = Vec::with_capacity(m);
    for o in outcomes {
        if let Some(stats) = o? {
            kept.push(stats);
        }
    }
    let discarded = m - kept.len();
    let limit = (MAX_DISCARD_FRACTION * m as f64).floor() as usize;
    if discarded > limit {
        return Err(RidgeError::TooManyDiscards {
            discarded,
            requested: m,
            limit,
        });
    }

    let c = CanonicalForm::relaxed(d)?;
    let mut full: Vec<f64> = c.beta_for(spec.k()).iter().copied().collect();
    full.push(c.gof_for(spec.k()));

    let lo_q = (1.0 - cfg.level) / 2.0;
    let hi_q = (1.0 + cfg.level) / 2.0;
    let p = d.p();
    let mut intervals = Vec::with_capacity(p + 1);
    for s in 0..=p {
        let mut column: Vec<f64> = kept.iter().map(|r| r[s]).collect();
        column.sort_by(f64::total_cmp);
        let lower = quantile(&column, lo_q)?;
        let upper = quantile(&column, hi_q)?;
        let (name, significant) = if s < p {
            (d.column_names()[s].clone(), Some(lower > 0.0 || upper < 0.0))
        } else {
            ("GoF".to_string(), None)
        };
        intervals.push(Interval {
            name,
            estimate: full[s],
            lower,
            upper,
            significant,
        });
    }
    let gof = intervals.pop().expect("gof interval");
    Ok(BootstrapSummary {
        coefficients: intervals,
        gof,
        replicates_used: kept.len(),
        discarded,
        level: cfg.level,
        seed: cfg.seed,
    })
}
