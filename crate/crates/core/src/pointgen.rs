//! Rejection sampling of point sets in δ-general position.
//!
//! Candidates are drawn uniformly from the square grid and kept only if no
//! triple they form with two accepted points is closer than δ to a line.
//! A run that has spent `threshold` draws without completing is discarded
//! and restarted from scratch.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{self, check_grid_size, delta_ok, forbidden_region_violated, GridPoint};

pub const DEFAULT_MAX_RESTARTS: u32 = 100_000;
pub const DEFAULT_THRESHOLD: u64 = 500;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointGenError {
    #[error("invalid point generation parameters: {0}")]
    InvalidParams(String),
    #[error("gave up after {restarts} restarts and {total_attempts} attempts; delta is too large for this many points")]
    Exhausted { restarts: u32, total_attempts: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointGenParams {
    pub n: usize,
    pub delta: i64,
    pub grid_size: u32,
    /// Draws allowed per run before it is restarted.
    pub threshold: u64,
    pub seed: u64,
    pub max_restarts: u32,
}

impl PointGenParams {
    pub fn new(n: usize, delta: i64, seed: u64) -> Self {
        Self {
            n,
            delta,
            grid_size: geom::DEFAULT_GRID_SIZE,
            threshold: DEFAULT_THRESHOLD.max(n as u64),
            seed,
            max_restarts: DEFAULT_MAX_RESTARTS,
        }
    }

    pub fn validate(&self) -> Result<(), PointGenError> {
        if self.delta <= 0 {
            return Err(PointGenError::InvalidParams("delta must be positive".into()));
        }
        if self.threshold < self.n as u64 {
            return Err(PointGenError::InvalidParams(format!(
                "threshold {} is below n = {}",
                self.threshold, self.n
            )));
        }
        check_grid_size(self.grid_size).map_err(|e| PointGenError::InvalidParams(e.to_string()))?;
        if self.n > (self.grid_size as usize).saturating_mul(self.grid_size as usize) {
            return Err(PointGenError::InvalidParams("more points than grid cells".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointGenStats {
    /// Candidate draws over all runs, accepted or not.
    pub total_attempts: u64,
    pub restarts: u32,
    /// Points strictly inside the convex hull of the result.
    pub interior_count: usize,
}

/// Draws `params.n` points in δ-general position.
///
/// Deterministic in `params`. Every draw counts as one attempt; duplicates
/// of accepted points are ordinary rejections.
pub fn generate_points(
    params: &PointGenParams,
) -> Result<(Vec<GridPoint>, PointGenStats), PointGenError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let side = params.grid_size as i64;
    let mut stats = PointGenStats::default();
    let mut accepted: Vec<GridPoint> = Vec::with_capacity(params.n);
    let mut run_attempts = 0u64;

    while accepted.len() < params.n {
        if run_attempts >= params.threshold {
            if stats.restarts >= params.max_restarts {
                return Err(PointGenError::Exhausted {
                    restarts: stats.restarts,
                    total_attempts: stats.total_attempts,
                });
            }
            stats.restarts += 1;
            run_attempts = 0;
            accepted.clear();
        }
        let candidate = GridPoint::new(rng.random_range(0..side), rng.random_range(0..side));
        run_attempts += 1;
        stats.total_attempts += 1;
        if admissible(&accepted, candidate, params.delta) {
            accepted.push(candidate);
        }
    }

    stats.interior_count = geom::interior_count(&accepted);
    Ok((accepted, stats))
}

/// Quadratic check of a candidate against every accepted pair.
fn admissible(accepted: &[GridPoint], candidate: GridPoint, delta: i64) -> bool {
    if accepted.contains(&candidate) {
        return false;
    }
    for (i, &p) in accepted.iter().enumerate() {
        for &q in &accepted[i + 1..] {
            if forbidden_region_violated(p, q, candidate, delta) {
                return false;
            }
        }
    }
    true
}

/// First ordered triple `(p, q, r)` of indices whose point `r` is closer
/// than `delta` to the line through `p` and `q`.
pub fn first_delta_violation(points: &[GridPoint], delta: i64) -> Option<(usize, usize, usize)> {
    let n = points.len();
    if n < 3 {
        return None;
    }
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if !delta_ok(points[i], points[j], points[k], delta) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Exhaustive δ-general-position check over all ordered triples.
pub fn validate_delta_general_position(points: &[GridPoint], delta: i64) -> bool {
    first_delta_violation(points, delta).is_none()
}
