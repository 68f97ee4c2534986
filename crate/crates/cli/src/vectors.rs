//! Reference results for `orient` and `segments_cross`, for clients that
//! reimplement the two predicates and need to prove they agree bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use swap_planarity::geom::{orient, segments_cross, GridPoint, DEFAULT_GRID_SIZE};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientCase {
    pub a: GridPoint,
    pub b: GridPoint,
    pub c: GridPoint,
    /// 1 counter-clockwise, -1 clockwise, 0 collinear.
    pub expected: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCase {
    pub a: GridPoint,
    pub b: GridPoint,
    pub c: GridPoint,
    pub d: GridPoint,
    pub expected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateVectors {
    pub seed: u64,
    pub grid_size: u32,
    pub orient: Vec<OrientCase>,
    pub segments_cross: Vec<CrossCase>,
}

/// Draws coordinates from a mix of regimes: a tiny window where collinear
/// and touching configurations are frequent, the full grid, and the grid
/// corners where products are largest.
fn point(rng: &mut ChaCha8Rng, regime: u32) -> GridPoint {
    let g = DEFAULT_GRID_SIZE as i64;
    match regime {
        0 => GridPoint::new(rng.random_range(0..6), rng.random_range(0..6)),
        1 => GridPoint::new(rng.random_range(0..g), rng.random_range(0..g)),
        _ => {
            let mut c = || if rng.random_bool(0.5) { rng.random_range(0..4) } else { g - 1 - rng.random_range(0..4) };
            GridPoint::new(c(), c())
        }
    }
}

/// A point on the line through `a` and `b`, possibly outside the segment.
fn on_line(rng: &mut ChaCha8Rng, a: GridPoint, b: GridPoint) -> GridPoint {
    let g = DEFAULT_GRID_SIZE as i64;
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let k = gcd(dx.abs(), dy.abs()).max(1);
    let (sx, sy) = (dx / k, dy / k);
    let t = rng.random_range(-2 * k..=3 * k);
    let p = GridPoint::new(a.x + t * sx, a.y + t * sy);
    if (0..g).contains(&p.x) && (0..g).contains(&p.y) {
        p
    } else {
        b
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn predicate_vectors(count: usize, seed: u64) -> PredicateVectors {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orient_cases = Vec::with_capacity(count);
    for i in 0..count {
        let regime = (i % 3) as u32;
        let a = point(&mut rng, regime);
        let b = point(&mut rng, regime);
        let c = if i % 5 == 4 { on_line(&mut rng, a, b) } else { point(&mut rng, regime) };
        orient_cases.push(OrientCase { a, b, c, expected: orient(a, b, c).signum() });
    }
    let mut cross_cases = Vec::with_capacity(count);
    for i in 0..count {
        let regime = (i % 3) as u32;
        let a = point(&mut rng, regime);
        let b = point(&mut rng, regime);
        let (c, d) = match i % 7 {
            // shared endpoint
            5 => (a, point(&mut rng, regime)),
            // overlapping or touching collinear segments
            6 => (on_line(&mut rng, a, b), on_line(&mut rng, a, b)),
            _ => (point(&mut rng, regime), point(&mut rng, regime)),
        };
        cross_cases.push(CrossCase { a, b, c, d, expected: segments_cross(a, b, c, d) });
    }
    PredicateVectors { seed, grid_size: DEFAULT_GRID_SIZE, orient: orient_cases, segments_cross: cross_cases }
}
