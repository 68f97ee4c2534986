//! Point generation experiments: cost against the restart threshold, and
//! how many points end up strictly inside the convex hull.
//!
//! Run `r` of cell `c` uses seed `base_seed + c * stride + r`, so every
//! row can be regenerated on its own.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pointgen::{generate_points, PointGenError, PointGenParams, PointGenStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSchedule {
    pub base_seed: u64,
    pub stride: u64,
}

impl Default for SeedSchedule {
    fn default() -> Self {
        Self { base_seed: 0, stride: 1_000_000 }
    }
}

impl SeedSchedule {
    pub fn seed(&self, cell: usize, repetition: u64) -> u64 {
        self.base_seed
            .wrapping_add((cell as u64).wrapping_mul(self.stride))
            .wrapping_add(repetition)
    }
}

/// Thresholds 50, 100, ..., 500 followed by 1000, 1500, ..., `max`.
pub fn default_thresholds(max: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=10).map(|k| 50 * k).collect();
    out.extend((2..).map(|k| 500 * k).take_while(|&t| t <= max));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub n: usize,
    pub delta: i64,
    pub threshold: u64,
    pub seed: u64,
    pub total_attempts: u64,
    pub restarts: u32,
    /// `false` rows are censored: the run gave up, or could never finish.
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSummary {
    pub n: usize,
    pub delta: i64,
    pub threshold: u64,
    pub runs: usize,
    pub successes: usize,
    /// Over all runs; censored runs contribute the attempts they spent.
    pub mean_attempts: f64,
    pub median_attempts: f64,
    pub mean_restarts: f64,
    pub median_restarts: f64,
}

/// One row per run for every `(n, threshold)` cell.
pub fn threshold_sweep(
    n_values: &[usize],
    delta: i64,
    thresholds: &[u64],
    seeds_per_cell: u64,
    max_restarts: u32,
    schedule: SeedSchedule,
) -> Vec<ThresholdRow> {
    let cells: Vec<(usize, u64)> =
        n_values.iter().flat_map(|&n| thresholds.iter().map(move |&t| (n, t))).collect();
    cells
        .par_iter()
        .enumerate()
        .flat_map_iter(|(cell, &(n, threshold))| {
            (0..seeds_per_cell).map(move |rep| {
                let seed = schedule.seed(cell, rep);
                let params = PointGenParams {
                    threshold,
                    max_restarts,
                    ..PointGenParams::new(n, delta, seed)
                };
                let (total_attempts, restarts, success) = match generate_points(&params) {
                    Ok((_, stats)) => (stats.total_attempts, stats.restarts, true),
                    Err(PointGenError::Exhausted { restarts, total_attempts }) => {
                        (total_attempts, restarts, false)
                    }
                    Err(PointGenError::InvalidParams(_)) => (0, 0, false),
                };
                ThresholdRow { n, delta, threshold, seed, total_attempts, restarts, success }
            })
        })
        .collect::<Vec<_>>()
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Sample standard deviation; zero for fewer than two values.
fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Aggregates sweep rows per `(n, delta, threshold)`, in first-seen order.
pub fn summarize_thresholds(rows: &[ThresholdRow]) -> Vec<ThresholdSummary> {
    let mut keys: Vec<(usize, i64, u64)> = Vec::new();
    for r in rows {
        let key = (r.n, r.delta, r.threshold);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(n, delta, threshold)| {
            let cell: Vec<&ThresholdRow> = rows
                .iter()
                .filter(|r| (r.n, r.delta, r.threshold) == (n, delta, threshold))
                .collect();
            let attempts: Vec<f64> = cell.iter().map(|r| r.total_attempts as f64).collect();
            let restarts: Vec<f64> = cell.iter().map(|r| r.restarts as f64).collect();
            ThresholdSummary {
                n,
                delta,
                threshold,
                runs: cell.len(),
                successes: cell.iter().filter(|r| r.success).count(),
                mean_attempts: mean(&attempts),
                median_attempts: median(&attempts),
                mean_restarts: mean(&restarts),
                median_restarts: median(&restarts),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullRow {
    pub n: usize,
    pub delta: i64,
    pub mean_interior: f64,
    /// Sample standard deviation over the successful instances.
    pub sd_interior: f64,
    pub failures: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullConfig {
    pub threshold: u64,
    pub max_restarts: u32,
    /// Give up on a cell after this many runs per wanted instance.
    pub max_runs_factor: u64,
    pub schedule: SeedSchedule,
}

impl Default for HullConfig {
    fn default() -> Self {
        Self {
            threshold: crate::pointgen::DEFAULT_THRESHOLD,
            max_runs_factor: 4,
            max_restarts: crate::pointgen::DEFAULT_MAX_RESTARTS,
            schedule: SeedSchedule::default(),
        }
    }
}

/// Interior point counts of successful runs in one cell, plus the number of
/// failed runs. Runs are tried in repetition order until enough succeed.
pub fn hull_samples(
    n: usize,
    delta: i64,
    cell: usize,
    instances: usize,
    cfg: &HullConfig,
) -> (Vec<PointGenStats>, u64) {
    let max_runs = cfg.max_runs_factor.saturating_mul(instances as u64).max(instances as u64);
    let mut ok: Vec<PointGenStats> = Vec::with_capacity(instances);
    let mut failures = 0u64;
    let mut next = 0u64;
    while ok.len() < instances && next < max_runs {
        let batch = ((instances - ok.len()) as u64).min(max_runs - next);
        let results: Vec<Option<PointGenStats>> = (next..next + batch)
            .into_par_iter()
            .map(|rep| {
                let params = PointGenParams {
                    threshold: cfg.threshold.max(n as u64),
                    max_restarts: cfg.max_restarts,
                    ..PointGenParams::new(n, delta, cfg.schedule.seed(cell, rep))
                };
                generate_points(&params).ok().map(|(_, stats)| stats)
            })
            .collect();
        for r in results {
            match r {
                Some(stats) if ok.len() < instances => ok.push(stats),
                Some(_) => {}
                None => failures += 1,
            }
        }
        next += batch;
    }
    (ok, failures)
}

/// Mean and standard deviation of the interior point count per
/// `(n, delta)` cell.
pub fn hull_statistics(
    n_values: &[usize],
    delta_values: &[i64],
    instances_per_cell: usize,
    cfg: &HullConfig,
) -> Vec<HullRow> {
    let cells: Vec<(usize, i64)> =
        n_values.iter().flat_map(|&n| delta_values.iter().map(move |&d| (n, d))).collect();
    cells
        .iter()
        .enumerate()
        .map(|(cell, &(n, delta))| {
            let (stats, failures) = hull_samples(n, delta, cell, instances_per_cell, cfg);
            let interior: Vec<f64> = stats.iter().map(|s| s.interior_count as f64).collect();
            HullRow {
                n,
                delta,
                mean_interior: mean(&interior),
                sd_interior: sample_sd(&interior),
                failures,
            }
        })
        .collect()
}

/// Writes rows as CSV with a header line.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
