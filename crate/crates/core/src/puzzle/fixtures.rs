//! Hand-built instances with known answers.

use std::f64::consts::PI;

use super::{max_separation, GenerationMeta, PuzzleInstance};
use crate::geom::{GridPoint, RenderMetrics, DEFAULT_GRID_SIZE};

/// Cycle on `n` convex points with a single crossing that needs
/// `C(n/2, 2)` swaps.
///
/// Points `p_0..p_{n-1}` run clockwise around a circle. Vertices
/// `v_0..v_{n/2-1}` sit on `p_0..p_{n/2-1}` in order and the second half of
/// the cycle runs backwards, so that only the chords `(v_{n/2-1}, v_{n/2})`
/// and `(v_{n-1}, v_0)` cross.
///
/// # Panics
/// If `n` is odd or smaller than 4.
pub fn lower_bound_cycle(n: usize) -> PuzzleInstance {
    assert!(n >= 4 && n.is_multiple_of(2), "the cycle family needs an even n >= 4");
    let half = n / 2;
    let centre = (DEFAULT_GRID_SIZE / 2) as f64;
    let radius = 0.375 * DEFAULT_GRID_SIZE as f64;
    let points: Vec<GridPoint> = (0..n)
        .map(|i| {
            let a = PI / 2.0 - 2.0 * PI * i as f64 / n as f64;
            GridPoint::new(
                (centre + radius * a.cos()).round() as i64,
                (centre + radius * a.sin()).round() as i64,
            )
        })
        .collect();
    let assignment: Vec<usize> =
        (0..n).map(|v| if v < half { v } else { n - 1 - (v - half) }).collect();
    let edges: Vec<(usize, usize)> =
        super::canonical_edges((0..n).map(|v| (v, (v + 1) % n)));
    let delta = max_separation(&points);
    let inst = PuzzleInstance {
        grid_size: DEFAULT_GRID_SIZE,
        points,
        edges,
        assignment,
        solution_assignment: Some((0..n).collect()),
        metrics: RenderMetrics::from_delta(delta).expect("separation is large"),
        meta: GenerationMeta {
            n,
            m: n,
            s: (half * (half - 1) / 2) as u32,
            flips: 0,
            removed: 0,
            seed: 0,
        },
    };
    let expected = (
        inst.edge_index(half - 1, half).unwrap(),
        inst.edge_index(0, n - 1).unwrap(),
    );
    let expected = (expected.0.min(expected.1), expected.0.max(expected.1));
    assert_eq!(inst.crossing_pairs(), vec![expected]);
    inst
}

/// The eight-cycle with one crossing that takes six swaps to untangle.
pub fn eight_cycle() -> PuzzleInstance {
    lower_bound_cycle(8)
}

/// Seven-vertex path whose ends occupy the corners of a square, with the
/// middle three vertices inside so that edges `(v_1, v_2)` and `(v_4, v_5)`
/// cross. Swapping either the first or the last edge untangles it.
pub fn basic_construction() -> PuzzleInstance {
    const LAYOUT: [(i64, i64); 7] =
        [(0, 100), (0, 0), (92, 46), (50, 34), (14, 41), (100, 0), (100, 100)];
    const SCALE: i64 = 400;
    const OFFSET: i64 = 12_000;
    let points: Vec<GridPoint> = LAYOUT
        .iter()
        .map(|&(x, y)| GridPoint::new(OFFSET + SCALE * x, OFFSET + SCALE * y))
        .collect();
    let delta = max_separation(&points);
    let inst = PuzzleInstance {
        grid_size: DEFAULT_GRID_SIZE,
        points,
        edges: (0..6).map(|v| (v, v + 1)).collect(),
        assignment: (0..7).collect(),
        solution_assignment: Some(vec![1, 0, 2, 3, 4, 5, 6]),
        metrics: RenderMetrics::from_delta(delta).expect("separation is large"),
        meta: GenerationMeta { n: 7, m: 6, s: 1, flips: 0, removed: 0, seed: 0 },
    };
    assert_eq!(inst.crossing_pairs(), vec![(1, 4)]);
    inst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::convex_hull;
    use crate::puzzle::SwapMove;

    #[test]
    fn cycle_family_is_valid_and_convex() {
        for n in [4, 6, 8, 10, 12] {
            let inst = lower_bound_cycle(n);
            assert!(inst.validate().is_empty(), "n = {n}: {:?}", inst.validate());
            assert_eq!(convex_hull(&inst.points).len(), n);
            assert_eq!(inst.crossing_count(), 1);
            let solved = PuzzleInstance {
                assignment: inst.solution_assignment.clone().unwrap(),
                ..inst.clone()
            };
            assert!(solved.is_solved());
        }
    }

    #[test]
    fn gadget_has_two_single_swap_solutions() {
        let inst = basic_construction();
        assert!(inst.validate().is_empty());
        assert_eq!(inst.crossing_count(), 1);
        let solving: Vec<usize> = (0..inst.edge_count())
            .filter(|&e| inst.apply_swap(SwapMove(e)).unwrap().is_solved())
            .collect();
        assert_eq!(solving, vec![0, 5]);
        // corners in convex position, the middle three strictly inside
        let hull = convex_hull(&inst.points);
        let mut corners = hull.clone();
        corners.sort_unstable();
        assert_eq!(corners, vec![0, 1, 5, 6]);
    }
}
