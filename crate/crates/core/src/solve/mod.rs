//! Minimum-swap search and related analyses.
//!
//! [`min_swaps`] runs a breadth-first search over assignments, deduplicating
//! on the full vertex-to-point permutation. Alongside the minimum it counts
//! every distinct shortest move sequence (by propagating path counts layer
//! by layer) and lists the lexicographically smallest ones up to a cap.

mod exhaustive;
mod route;

pub use exhaustive::{exhaustive_solvable, EXHAUSTIVE_LIMIT};
pub use route::{route_to_assignment, route_with_phases, Route, RoutePhase};

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{segments_cross, GridPoint};
use crate::puzzle::{PuzzleError, PuzzleInstance, SwapMove};
use crate::triangulate::Edge;

pub const DEFAULT_SOLUTION_CAP: usize = 64;
pub const DEFAULT_STATE_LIMIT: usize = 20_000_000;

/// Parents expanded per parallel batch; bounds the transient child buffer.
const BATCH: usize = 4096;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("search stored more than {limit} states before finishing depth {depth}")]
    StateLimit { limit: usize, depth: u32 },
    #[error("the search supports at most 255 vertices, got {0}")]
    TooManyVertices(usize),
    #[error("target is not a permutation of the {0} points")]
    TargetNotBijective(usize),
    #[error("component containing vertex {vertex} cannot reach the target: its point set would change")]
    Unreachable { vertex: usize },
    #[error("exhaustive search would visit {assignments} assignments, above the limit of {limit}")]
    TooLarge { assignments: u128, limit: u128 },
    #[error(transparent)]
    Puzzle(#[from] PuzzleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub max_depth: u32,
    pub max_states: usize,
    pub solution_cap: usize,
}

impl SolveOptions {
    pub fn new(max_depth: u32) -> Self {
        Self { max_depth, max_states: DEFAULT_STATE_LIMIT, solution_cap: DEFAULT_SOLUTION_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    /// `None` when no plane drawing lies within `max_depth` swaps.
    pub min_swaps: Option<u32>,
    pub max_depth: u32,
    /// Distinct minimal move sequences, saturating at `u64::MAX`.
    pub solution_count: u64,
    /// The lexicographically smallest minimal sequences, capped.
    pub solutions: Vec<Vec<SwapMove>>,
    pub nodes_expanded: u64,
    pub states_visited: u64,
    /// Raw sequence count without deduplication, summed over the searched
    /// depths (saturating).
    pub raw_sequences: u64,
    /// Position pairs `(i, j)` within the first solution whose moves are
    /// independent.
    pub independent_pairs: Vec<(usize, usize)>,
}

impl SolveReport {
    pub fn is_found(&self) -> bool {
        self.min_swaps.is_some()
    }
}

/// `m * (m - 1)^(depth - 1)`: move sequences of the given length that never
/// repeat an edge twice in a row. Saturates at `u128::MAX`.
pub fn enumeration_size(m_edges: u64, depth: u32) -> u128 {
    if depth == 0 {
        return 1;
    }
    let m = m_edges as u128;
    let mut total = m;
    for _ in 1..depth {
        total = total.saturating_mul(m.saturating_sub(1));
    }
    total
}

/// Two swaps are independent when their edges have four distinct endpoints
/// and no other edge joins any two of those four vertices.
pub fn independent(inst: &PuzzleInstance, a: SwapMove, b: SwapMove) -> bool {
    let (Some(&(u, v)), Some(&(w, x))) = (inst.edges.get(a.0), inst.edges.get(b.0)) else {
        return false;
    };
    let quad = [u, v, w, x];
    for i in 0..4 {
        for j in i + 1..4 {
            if quad[i] == quad[j] {
                return false;
            }
        }
    }
    let induced = inst
        .edges
        .iter()
        .filter(|&&(p, q)| quad.contains(&p) && quad.contains(&q))
        .count();
    induced == 2
}

/// Crossing lookup over all point pairs, precomputed for small point sets.
pub(crate) struct CrossOracle<'a> {
    points: &'a [GridPoint],
    n: usize,
    table: Option<Vec<u64>>,
}

const TABLE_MAX_POINTS: usize = 48;

impl<'a> CrossOracle<'a> {
    pub(crate) fn new(points: &'a [GridPoint]) -> Self {
        let n = points.len();
        let table = (n <= TABLE_MAX_POINTS).then(|| {
            let nn = n * n;
            let mut bits = vec![0u64; (nn * nn).div_ceil(64)];
            for a in 0..n {
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    for c in 0..n {
                        for d in 0..n {
                            if c == d {
                                continue;
                            }
                            if segments_cross(points[a], points[b], points[c], points[d]) {
                                let i = (a * n + b) * nn + c * n + d;
                                bits[i >> 6] |= 1 << (i & 63);
                            }
                        }
                    }
                }
            }
            bits
        });
        Self { points, n, table }
    }

    #[inline]
    pub(crate) fn crosses(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        match &self.table {
            Some(bits) => {
                let n = self.n;
                let i = (a * n + b) * n * n + c * n + d;
                bits[i >> 6] >> (i & 63) & 1 == 1
            }
            None => segments_cross(self.points[a], self.points[b], self.points[c], self.points[d]),
        }
    }

    pub(crate) fn plane<T: Copy + Into<usize>>(&self, edges: &[Edge], sigma: &[T]) -> bool {
        for (i, &(u, v)) in edges.iter().enumerate() {
            let (a, b) = (sigma[u].into(), sigma[v].into());
            for &(w, x) in &edges[i + 1..] {
                if self.crosses(a, b, sigma[w].into(), sigma[x].into()) {
                    return false;
                }
            }
        }
        true
    }
}

type State = Box<[u8]>;

#[derive(Clone, Copy)]
struct Node {
    depth: u32,
    paths: u64,
    solved: bool,
}

/// Breadth-first search for the fewest swaps to any crossing-free drawing.
pub fn min_swaps(inst: &PuzzleInstance, max_depth: u32) -> Result<SolveReport, SolveError> {
    min_swaps_with(inst, &SolveOptions::new(max_depth))
}

pub fn min_swaps_with(inst: &PuzzleInstance, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let n = inst.vertex_count();
    if n > 255 {
        return Err(SolveError::TooManyVertices(n));
    }
    let oracle = CrossOracle::new(&inst.points);
    let edges = &inst.edges;
    let m = edges.len();
    let start: State = inst.assignment.iter().map(|&p| p as u8).collect();

    let mut report = SolveReport {
        min_swaps: None,
        max_depth: opts.max_depth,
        solution_count: 0,
        solutions: Vec::new(),
        nodes_expanded: 0,
        states_visited: 1,
        raw_sequences: 0,
        independent_pairs: Vec::new(),
    };
    if oracle.plane(edges, &start) {
        report.min_swaps = Some(0);
        report.solution_count = 1;
        report.solutions.push(Vec::new());
        return Ok(report);
    }

    let mut nodes: HashMap<State, Node> = HashMap::new();
    nodes.insert(start.clone(), Node { depth: 0, paths: 1, solved: false });
    let mut frontier: Vec<State> = vec![start.clone()];
    let mut found_at = None;

    for depth in 0..opts.max_depth {
        report.raw_sequences =
            report.raw_sequences.saturating_add(sat_u64(enumeration_size(m as u64, depth + 1)));
        let mut next: Vec<State> = Vec::new();
        let mut any_solved = false;
        for batch in frontier.chunks(BATCH) {
            let children: Vec<(usize, usize, State, bool)> = batch
                .par_iter()
                .enumerate()
                .flat_map_iter(|(pi, parent)| {
                    let nodes = &nodes;
                    let oracle = &oracle;
                    (0..m).filter_map(move |e| {
                        let mut child = parent.clone();
                        child.swap(edges[e].0, edges[e].1);
                        match nodes.get(&child) {
                            Some(node) if node.depth <= depth => None,
                            Some(_) => Some((pi, e, child, false)),
                            None => {
                                let solved = oracle.plane(edges, &child);
                                Some((pi, e, child, solved))
                            }
                        }
                    })
                })
                .collect();
            for (pi, _e, child, solved) in children {
                let parent_paths = nodes[&batch[pi]].paths;
                match nodes.get_mut(&child) {
                    Some(node) => node.paths = node.paths.saturating_add(parent_paths),
                    None => {
                        any_solved |= solved;
                        nodes.insert(
                            child.clone(),
                            Node { depth: depth + 1, paths: parent_paths, solved },
                        );
                        next.push(child);
                    }
                }
            }
            if nodes.len() > opts.max_states {
                return Err(SolveError::StateLimit { limit: opts.max_states, depth: depth + 1 });
            }
        }
        report.nodes_expanded += frontier.len() as u64;
        report.states_visited = nodes.len() as u64;
        if any_solved {
            found_at = Some(depth + 1);
            report.solution_count = next
                .iter()
                .map(|s| &nodes[s])
                .filter(|node| node.solved)
                .fold(0u64, |acc, node| acc.saturating_add(node.paths));
            break;
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    if let Some(d) = found_at {
        report.min_swaps = Some(d);
        let mut dead = HashSet::new();
        let mut path = Vec::new();
        collect_solutions(
            &start,
            0,
            d,
            edges,
            &nodes,
            opts.solution_cap,
            &mut path,
            &mut report.solutions,
            &mut dead,
        );
        if let Some(first) = report.solutions.first() {
            for i in 0..first.len() {
                for j in i + 1..first.len() {
                    if independent(inst, first[i], first[j]) {
                        report.independent_pairs.push((i, j));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn sat_u64(v: u128) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// Depth-first walk of the shortest-path layers in ascending edge order,
/// remembering states that cannot reach a solved state at the target depth.
#[allow(clippy::too_many_arguments)]
fn collect_solutions(
    state: &State,
    depth: u32,
    target: u32,
    edges: &[Edge],
    nodes: &HashMap<State, Node>,
    cap: usize,
    path: &mut Vec<SwapMove>,
    out: &mut Vec<Vec<SwapMove>>,
    dead: &mut HashSet<State>,
) -> bool {
    if depth == target {
        if nodes.get(state).is_some_and(|n| n.solved) {
            out.push(path.clone());
            return true;
        }
        return false;
    }
    let mut reached = false;
    for (e, &(u, v)) in edges.iter().enumerate() {
        if out.len() >= cap {
            break;
        }
        let mut child = state.clone();
        child.swap(u, v);
        if nodes.get(&child).is_none_or(|n| n.depth != depth + 1) || dead.contains(&child) {
            continue;
        }
        path.push(SwapMove(e));
        if collect_solutions(&child, depth + 1, target, edges, nodes, cap, path, out, dead) {
            reached = true;
        } else {
            dead.insert(child);
        }
        path.pop();
    }
    reached
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::fixtures;

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumeration_size(20, 4), 137_180);
        assert_eq!(enumeration_size(7, 1), 7);
        assert_eq!(enumeration_size(2, 3), 2);
        assert_eq!(enumeration_size(1, 3), 0);
    }

    #[test]
    fn eight_cycle_needs_six() {
        let r = min_swaps(&fixtures::eight_cycle(), 6).unwrap();
        assert_eq!(r.min_swaps, Some(6));
        assert!(r.nodes_expanded < 1_000_000);
        for seq in &r.solutions {
            assert_eq!(seq.len(), 6);
            assert!(fixtures::eight_cycle().apply_moves(seq).unwrap().is_solved());
        }
    }

    #[test]
    fn eight_cycle_not_found_below_six() {
        let r = min_swaps(&fixtures::eight_cycle(), 5).unwrap();
        assert_eq!(r.min_swaps, None);
        assert_eq!(r.solution_count, 0);
        assert!(r.solutions.is_empty());
    }

    #[test]
    fn gadget_has_two_solutions() {
        let r = min_swaps(&fixtures::basic_construction(), 3).unwrap();
        assert_eq!(r.min_swaps, Some(1));
        assert_eq!(r.solution_count, 2);
        assert_eq!(r.solutions, vec![vec![SwapMove(0)], vec![SwapMove(5)]]);
    }

    #[test]
    fn solved_instance_needs_zero() {
        let mut inst = fixtures::eight_cycle();
        inst.assignment = inst.solution_assignment.clone().unwrap();
        let r = min_swaps(&inst, 4).unwrap();
        assert_eq!(r.min_swaps, Some(0));
        assert_eq!(r.nodes_expanded, 0);
        assert_eq!(r.solutions, vec![Vec::<SwapMove>::new()]);
    }

    #[test]
    fn state_limit_is_an_error() {
        let opts = SolveOptions { max_states: 50, ..SolveOptions::new(6) };
        assert!(matches!(
            min_swaps_with(&fixtures::eight_cycle(), &opts),
            Err(SolveError::StateLimit { limit: 50, .. })
        ));
    }

    #[test]
    fn solution_cap_keeps_exact_count() {
        let opts = SolveOptions { solution_cap: 3, ..SolveOptions::new(6) };
        let r = min_swaps_with(&fixtures::eight_cycle(), &opts).unwrap();
        assert_eq!(r.solutions.len(), 3.min(r.solution_count as usize));
        let full = min_swaps(&fixtures::eight_cycle(), 6).unwrap();
        assert_eq!(r.solution_count, full.solution_count);
        assert_eq!(r.solutions[..], full.solutions[..r.solutions.len()]);
        let mut sorted = full.solutions.clone();
        sorted.sort();
        assert_eq!(sorted, full.solutions);
    }

    fn path_graph(edges: &[(usize, usize)], n: usize) -> PuzzleInstance {
        let mut inst = fixtures::eight_cycle();
        inst.points.truncate(n);
        inst.assignment = (0..n).collect();
        inst.edges = edges.to_vec();
        inst
    }

    #[test]
    fn independence_examples() {
        // a-b, b-c share b
        let inst = path_graph(&[(0, 1), (1, 2), (2, 3)], 4);
        assert!(!independent(&inst, SwapMove(0), SwapMove(1)));
        // a-b and c-d joined by b-c
        assert!(!independent(&inst, SwapMove(0), SwapMove(2)));
        let inst = path_graph(&[(0, 1), (2, 3), (3, 4)], 5);
        assert!(independent(&inst, SwapMove(0), SwapMove(1)));
        assert!(!independent(&inst, SwapMove(0), SwapMove(9)));
    }
}
