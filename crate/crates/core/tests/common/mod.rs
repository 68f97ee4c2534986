#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use swap_planarity::geom::{RenderMetrics, DEFAULT_GRID_SIZE};
use swap_planarity::pointgen::{generate_points, PointGenParams};
use swap_planarity::puzzle::{canonical_edges, has_crossing, GenerationMeta, PuzzleInstance};

/// δ-general points with a small separation, quick to sample.
pub fn points(n: usize, delta: i64, seed: u64) -> Vec<swap_planarity::geom::GridPoint> {
    generate_points(&PointGenParams::new(n, delta, seed)).expect("sparse sampling succeeds").0
}

/// Random connected simple graph: a random spanning tree plus `extra`
/// random edges.
pub fn connected_edges<R: Rng>(n: usize, extra: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((order[i], parent));
    }
    let max = n * (n - 1) / 2;
    let mut set: std::collections::BTreeSet<(usize, usize)> =
        canonical_edges(edges).into_iter().collect();
    while set.len() < (n - 1 + extra).min(max) {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v {
            set.insert((u.min(v), u.max(v)));
        }
    }
    set.into_iter().collect()
}

/// Instance on `points` with the given edges and a random assignment.
pub fn instance<R: Rng>(
    points: Vec<swap_planarity::geom::GridPoint>,
    edges: Vec<(usize, usize)>,
    delta: i64,
    rng: &mut R,
) -> PuzzleInstance {
    let n = points.len();
    let mut assignment: Vec<usize> = (0..n).collect();
    assignment.shuffle(rng);
    let m = edges.len();
    PuzzleInstance {
        grid_size: DEFAULT_GRID_SIZE,
        points,
        edges,
        assignment,
        solution_assignment: None,
        metrics: RenderMetrics::from_delta(delta).unwrap(),
        meta: GenerationMeta { n, m, s: 0, flips: 0, removed: 0, seed: 0 },
    }
}

/// Minimum swaps by plain iterative deepening over move sequences, without
/// state deduplication, skipping only an immediate repeat of the previous
/// edge. Returns the depth and the number of sequences of that length that
/// reach a crossing-free drawing.
pub fn iterative_deepening(inst: &PuzzleInstance, max_depth: u32) -> Option<(u32, u64)> {
    let plane = |a: &[usize]| !has_crossing(&inst.points, &inst.edges, a);
    if plane(&inst.assignment) {
        return Some((0, 1));
    }
    for depth in 1..=max_depth {
        let mut sigma = inst.assignment.clone();
        let count = dfs(inst, &mut sigma, depth, None, &plane);
        if count > 0 {
            return Some((depth, count));
        }
    }
    None
}

fn dfs(
    inst: &PuzzleInstance,
    sigma: &mut Vec<usize>,
    left: u32,
    last: Option<usize>,
    plane: &dyn Fn(&[usize]) -> bool,
) -> u64 {
    if left == 0 {
        return plane(sigma) as u64;
    }
    let mut total = 0;
    for (e, &(u, v)) in inst.edges.iter().enumerate() {
        if Some(e) == last {
            continue;
        }
        sigma.swap(u, v);
        total += dfs(inst, sigma, left - 1, Some(e), plane);
        sigma.swap(u, v);
    }
    total
}
