//! Level generation: points, Delaunay triangulation, random flips, edge
//! removal and a solver-verified shuffle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{RenderMetrics, DEFAULT_GRID_SIZE};
use crate::pointgen::{
    generate_points, PointGenError, PointGenParams, PointGenStats, DEFAULT_MAX_RESTARTS,
    DEFAULT_THRESHOLD,
};
use crate::puzzle::{adjacency, GenerationMeta, PuzzleError, PuzzleInstance, SwapMove};
use crate::solve::{min_swaps_with, SolveError, SolveOptions, SolveReport, DEFAULT_STATE_LIMIT};
use crate::triangulate::{Edge, TriangulateError, Triangulation};

pub const DEFAULT_MAX_SHUFFLE_ROUNDS: u32 = 50;

/// `round(0.03 * 65536)`, the separation used for the default playing area.
pub const DEFAULT_DELTA: i64 = 1966;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    PointGen(#[from] PointGenError),
    #[error(transparent)]
    Triangulate(#[from] TriangulateError),
    #[error("requested {requested} edges but the triangulation only has {available}")]
    TooManyEdges { requested: usize, available: usize },
    #[error("edge removal stuck at {reached} edges (target {target}): every remaining edge has a degree-1 endpoint")]
    RemovalStuck { reached: usize, target: usize },
    #[error("shuffle gave up after {rounds} extra rounds; last verified minimum was {achieved:?}, wanted {wanted}")]
    ShuffleExhausted { rounds: u32, achieved: Option<u32>, wanted: u32 },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Puzzle(#[from] PuzzleError),
}

/// How many edges of the triangulation survive removal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeBudget {
    /// Keep exactly this many edges.
    Total(usize),
    /// Remove this many edges from the triangulation.
    Remove(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationParams {
    pub n: usize,
    pub edges: EdgeBudget,
    pub s: u32,
    pub metrics: RenderMetrics,
    pub flips: usize,
    pub grid_size: u32,
    pub threshold: u64,
    pub max_restarts: u32,
    pub seed: u64,
    pub max_shuffle_rounds: u32,
    pub max_states: usize,
}

impl GenerationParams {
    pub fn new(n: usize, edges: EdgeBudget, s: u32, seed: u64) -> Self {
        Self {
            n,
            edges,
            s,
            metrics: RenderMetrics::from_delta(DEFAULT_DELTA).expect("default metrics are valid"),
            flips: 0,
            grid_size: DEFAULT_GRID_SIZE,
            threshold: DEFAULT_THRESHOLD.max(n as u64),
            max_restarts: DEFAULT_MAX_RESTARTS,
            seed,
            max_shuffle_rounds: DEFAULT_MAX_SHUFFLE_ROUNDS,
            max_states: DEFAULT_STATE_LIMIT,
        }
    }

    pub fn pointgen(&self) -> PointGenParams {
        PointGenParams {
            n: self.n,
            delta: self.metrics.delta,
            grid_size: self.grid_size,
            threshold: self.threshold,
            seed: self.seed,
            max_restarts: self.max_restarts,
        }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        let bad = |msg: String| Err(GenerateError::InvalidParams(msg));
        if self.n < 3 {
            return bad(format!("need at least 3 vertices, got {}", self.n));
        }
        if self.s == 0 {
            return bad("s must be at least 1".into());
        }
        if let Err(e) = self.metrics.validate() {
            return bad(e.to_string());
        }
        if let EdgeBudget::Total(m) = self.edges {
            let max = 3 * self.n - 6;
            if m > max.max(3) {
                return bad(format!("{m} edges exceed the {max} of any triangulation on {} points", self.n));
            }
            if m < self.n.div_ceil(2) {
                return bad(format!("{m} edges cannot cover {} vertices", self.n));
            }
        }
        self.pointgen().validate()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Removal {
    pub edges: Vec<Edge>,
    /// `false` when removal stopped early with more than the target left.
    pub complete: bool,
}

/// Removes random edges until `m` remain, never touching an edge that has
/// an endpoint of degree 1.
pub fn remove_edges<R: Rng + ?Sized>(
    edges: &[Edge],
    vertex_count: usize,
    m: usize,
    rng: &mut R,
) -> Removal {
    let mut kept = edges.to_vec();
    let mut degree = vec![0usize; vertex_count];
    for &(u, v) in &kept {
        degree[u] += 1;
        degree[v] += 1;
    }
    while kept.len() > m {
        let eligible: Vec<usize> = (0..kept.len())
            .filter(|&i| degree[kept[i].0] >= 2 && degree[kept[i].1] >= 2)
            .collect();
        if eligible.is_empty() {
            return Removal { edges: kept, complete: false };
        }
        let (u, v) = kept.remove(eligible[rng.random_range(0..eligible.len())]);
        degree[u] -= 1;
        degree[v] -= 1;
    }
    Removal { edges: kept, complete: true }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shuffle {
    pub instance: PuzzleInstance,
    /// Swaps applied to the solution, in order.
    pub moves: Vec<SwapMove>,
    pub report: SolveReport,
    /// Extra rounds spent after the initial `s` swaps.
    pub rounds: u32,
}

fn random_edge<R: Rng + ?Sized>(m: usize, avoid: &[usize], rng: &mut R) -> usize {
    loop {
        let e = rng.random_range(0..m);
        if !avoid.contains(&e) || avoid.len() >= m {
            return e;
        }
    }
}

/// Shuffles a plane instance until the solver confirms that exactly `s`
/// swaps are needed.
///
/// After `s` random swaps the instance is checked with a search bounded at
/// depth `s`. If it is closer than `s` to a plane state one more random
/// swap is added. If no plane state is within `s` swaps the last swap is
/// replaced by a different random edge. Either adjustment costs one round.
pub fn shuffle<R: Rng + ?Sized>(
    solution: &PuzzleInstance,
    s: u32,
    max_rounds: u32,
    max_states: usize,
    rng: &mut R,
) -> Result<Shuffle, GenerateError> {
    if s == 0 {
        return Err(GenerateError::InvalidParams("s must be at least 1".into()));
    }
    if !solution.is_solved() {
        return Err(GenerateError::InvalidParams("shuffle needs a plane starting drawing".into()));
    }
    let m = solution.edge_count();
    let mut inst = solution.clone();
    let mut moves: Vec<SwapMove> = Vec::new();
    let step = |inst: &mut PuzzleInstance, moves: &mut Vec<SwapMove>, rng: &mut R, avoid: &[usize]| {
        let e = random_edge(m, avoid, rng);
        inst.swap_in_place(SwapMove(e)).expect("edge index in range");
        moves.push(SwapMove(e));
    };
    for _ in 0..s {
        let last: Vec<usize> = moves.last().map(|mv| mv.0).into_iter().collect();
        step(&mut inst, &mut moves, rng, &last);
    }

    let opts = SolveOptions { max_states, ..SolveOptions::new(s) };
    let mut rounds = 0;
    loop {
        let report = min_swaps_with(&inst, &opts)?;
        if report.min_swaps == Some(s) {
            return Ok(Shuffle { instance: inst, moves, report, rounds });
        }
        if rounds >= max_rounds {
            return Err(GenerateError::ShuffleExhausted {
                rounds,
                achieved: report.min_swaps,
                wanted: s,
            });
        }
        rounds += 1;
        if report.min_swaps.is_some() {
            let last: Vec<usize> = moves.last().map(|mv| mv.0).into_iter().collect();
            step(&mut inst, &mut moves, rng, &last);
        } else {
            let undone = moves.pop().expect("more than s swaps were made");
            inst.swap_in_place(undone).expect("edge index in range");
            let mut avoid = vec![undone.0];
            avoid.extend(moves.last().map(|mv| mv.0));
            step(&mut inst, &mut moves, rng, &avoid);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedLevel {
    pub instance: PuzzleInstance,
    pub point_stats: PointGenStats,
    /// Solver report for the shuffled instance, including the number of
    /// minimal solutions and independent swap pairs.
    pub report: SolveReport,
    pub shuffle_moves: Vec<SwapMove>,
    pub shuffle_rounds: u32,
    pub flips_requested: usize,
    pub flips_performed: usize,
    pub triangulation_edges: usize,
}

/// Runs the whole pipeline. Deterministic in `params`.
pub fn generate_level(params: &GenerationParams) -> Result<GeneratedLevel, GenerateError> {
    params.validate()?;
    let (points, point_stats) = generate_points(&params.pointgen())?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(1);

    let delaunay = Triangulation::delaunay(&points)?;
    let (tri, flips_performed) = match delaunay.lawson_flips(params.flips, &mut rng) {
        Ok(t) => (t, params.flips),
        Err(stall) => (*stall.triangulation, stall.performed),
    };
    let all_edges = tri.edges();
    let target = match params.edges {
        EdgeBudget::Total(m) => m,
        EdgeBudget::Remove(r) => all_edges.len().saturating_sub(r),
    };
    let requested_removal = matches!(params.edges, EdgeBudget::Remove(r) if r > all_edges.len());
    if target > all_edges.len() || requested_removal {
        return Err(GenerateError::TooManyEdges { requested: target, available: all_edges.len() });
    }
    let removal = remove_edges(&all_edges, params.n, target, &mut rng);
    if !removal.complete {
        return Err(GenerateError::RemovalStuck { reached: removal.edges.len(), target });
    }

    let identity: Vec<usize> = (0..params.n).collect();
    let solution = PuzzleInstance {
        grid_size: params.grid_size,
        points,
        edges: removal.edges,
        assignment: identity.clone(),
        solution_assignment: Some(identity),
        metrics: params.metrics,
        meta: GenerationMeta {
            n: params.n,
            m: target,
            s: params.s,
            flips: flips_performed,
            removed: all_edges.len() - target,
            seed: params.seed,
        },
    };
    debug_assert!(solution.is_solved());
    debug_assert!(adjacency(params.n, &solution.edges).iter().all(|a| !a.is_empty()));

    let shuffled = shuffle(&solution, params.s, params.max_shuffle_rounds, params.max_states, &mut rng)?;
    Ok(GeneratedLevel {
        instance: shuffled.instance,
        point_stats,
        report: shuffled.report,
        shuffle_moves: shuffled.moves,
        shuffle_rounds: shuffled.rounds,
        flips_requested: params.flips,
        flips_performed,
        triangulation_edges: all_edges.len(),
    })
}
