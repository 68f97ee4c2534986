//! Puzzle state: fixed points, a graph, and the vertex-to-point assignment.
//!
//! The assignment `sigma` maps each vertex to the index of the point it is
//! drawn on. A swap exchanges `sigma(u)` and `sigma(v)` for an edge `(u, v)`;
//! the points and edges never change.

pub mod fixtures;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{self, check_grid_size, segments_cross, GridPoint, RenderMetrics};
use crate::pointgen::first_delta_violation;
use crate::triangulate::Edge;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PuzzleError {
    #[error("malformed instance JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("unsupported instance format version {0}")]
    UnsupportedVersion(u32),
    #[error("instance violates {} invariant(s): {}", .0.len(), join(.0))]
    Invalid(Vec<Violation>),
    #[error("swap refers to edge {index} but the instance has {edges} edges")]
    MoveOutOfRange { index: usize, edges: usize },
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<serde_json::Error> for PuzzleError {
    fn from(e: serde_json::Error) -> Self {
        PuzzleError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// One broken instance invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    InvalidGridSize { grid_size: u32 },
    PointOutOfGrid { point: usize },
    DuplicatePoint { point: usize, first: usize },
    AssignmentNotBijective,
    SolutionNotBijective,
    EdgeOutOfRange { edge: usize },
    SelfLoop { edge: usize },
    EdgeNotNormalized { edge: usize },
    DuplicateEdge { edge: usize, first: usize },
    IsolatedVertex { vertex: usize },
    InvalidMetrics,
    NotInGeneralPosition { line_from: usize, line_to: usize, point: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "instance has no points"),
            Violation::InvalidGridSize { grid_size } => {
                write!(f, "grid size {grid_size} is not a power of two <= 65536")
            }
            Violation::PointOutOfGrid { point } => write!(f, "point {point} lies outside the grid"),
            Violation::DuplicatePoint { point, first } => {
                write!(f, "point {point} duplicates point {first}")
            }
            Violation::AssignmentNotBijective => write!(f, "assignment is not a permutation"),
            Violation::SolutionNotBijective => {
                write!(f, "solution assignment is not a permutation")
            }
            Violation::EdgeOutOfRange { edge } => write!(f, "edge {edge} names a missing vertex"),
            Violation::SelfLoop { edge } => write!(f, "edge {edge} is a self-loop"),
            Violation::EdgeNotNormalized { edge } => {
                write!(f, "edge {edge} does not list its smaller vertex first")
            }
            Violation::DuplicateEdge { edge, first } => {
                write!(f, "edge {edge} duplicates edge {first}")
            }
            Violation::IsolatedVertex { vertex } => write!(f, "vertex {vertex} has no edges"),
            Violation::InvalidMetrics => write!(f, "metrics violate 0 < lambda < 2*rho < delta"),
            Violation::NotInGeneralPosition { line_from, line_to, point } => write!(
                f,
                "point {point} is closer than delta to the line through points {line_from} and {line_to}"
            ),
        }
    }
}

/// Parameters and outcome of the generation run that produced an instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationMeta {
    pub n: usize,
    pub m: usize,
    /// Verified minimum number of swaps to a plane drawing.
    pub s: u32,
    pub flips: usize,
    pub removed: usize,
    pub seed: u64,
}

/// Swap the endpoints of the edge with this index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SwapMove(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuzzleInstance {
    pub grid_size: u32,
    pub points: Vec<GridPoint>,
    /// Vertex pairs, smaller index first.
    pub edges: Vec<Edge>,
    /// `assignment[v]` is the point vertex `v` is drawn on.
    pub assignment: Vec<usize>,
    pub solution_assignment: Option<Vec<usize>>,
    pub metrics: RenderMetrics,
    pub meta: GenerationMeta,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    version: u32,
    grid_size: u32,
    points: Vec<GridPoint>,
    edges: Vec<(usize, usize)>,
    assignment: Vec<usize>,
    solution_assignment: Option<Vec<usize>>,
    metrics: RenderMetrics,
    meta: GenerationMeta,
}

fn is_permutation(a: &[usize], n: usize) -> bool {
    if a.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    a.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

impl PuzzleInstance {
    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of edge `e` as currently drawn.
    pub fn drawn_edge(&self, e: usize) -> (GridPoint, GridPoint) {
        let (u, v) = self.edges[e];
        (self.points[self.assignment[u]], self.points[self.assignment[v]])
    }

    /// Index of the edge joining `u` and `v`, if any.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = crate::triangulate::edge(u, v);
        self.edges.iter().position(|&e| e == key)
    }

    /// Returns the instance after swapping the endpoints of `m`'s edge.
    pub fn apply_swap(&self, m: SwapMove) -> Result<PuzzleInstance, PuzzleError> {
        let mut next = self.clone();
        next.swap_in_place(m)?;
        Ok(next)
    }

    pub fn swap_in_place(&mut self, m: SwapMove) -> Result<(), PuzzleError> {
        let &(u, v) = self
            .edges
            .get(m.0)
            .ok_or(PuzzleError::MoveOutOfRange { index: m.0, edges: self.edges.len() })?;
        self.assignment.swap(u, v);
        Ok(())
    }

    pub fn apply_moves(&self, moves: &[SwapMove]) -> Result<PuzzleInstance, PuzzleError> {
        let mut next = self.clone();
        for &m in moves {
            next.swap_in_place(m)?;
        }
        Ok(next)
    }

    /// Unordered pairs of edge indices whose drawn segments cross.
    pub fn crossing_pairs(&self) -> Vec<(usize, usize)> {
        crossing_pairs_with(&self.points, &self.edges, &self.assignment)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossing_pairs().len()
    }

    pub fn is_solved(&self) -> bool {
        !has_crossing(&self.points, &self.edges, &self.assignment)
    }

    /// Connected components of the graph, each as a sorted vertex list,
    /// ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components(self.vertex_count(), &self.edges)
    }

    /// Adjacency lists, neighbours sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        adjacency(self.vertex_count(), &self.edges)
    }

    /// Every broken invariant; empty for a well-formed instance.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.points.len();
        if n == 0 {
            out.push(Violation::Empty);
        }
        if check_grid_size(self.grid_size).is_err() {
            out.push(Violation::InvalidGridSize { grid_size: self.grid_size });
        } else {
            for (i, p) in self.points.iter().enumerate() {
                if !p.in_grid(self.grid_size) {
                    out.push(Violation::PointOutOfGrid { point: i });
                }
            }
        }
        let mut first_seen = std::collections::HashMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if let Some(&first) = first_seen.get(p) {
                out.push(Violation::DuplicatePoint { point: i, first });
            } else {
                first_seen.insert(*p, i);
            }
        }
        if !is_permutation(&self.assignment, n) {
            out.push(Violation::AssignmentNotBijective);
        }
        if let Some(sol) = &self.solution_assignment {
            if !is_permutation(sol, n) {
                out.push(Violation::SolutionNotBijective);
            }
        }

        let mut seen_edges = std::collections::HashMap::new();
        let mut degree = vec![0usize; n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if u >= n || v >= n {
                out.push(Violation::EdgeOutOfRange { edge: i });
                continue;
            }
            if u == v {
                out.push(Violation::SelfLoop { edge: i });
                continue;
            }
            if u > v {
                out.push(Violation::EdgeNotNormalized { edge: i });
            }
            let key = crate::triangulate::edge(u, v);
            if let Some(&first) = seen_edges.get(&key) {
                out.push(Violation::DuplicateEdge { edge: i, first });
                continue;
            }
            seen_edges.insert(key, i);
            degree[u] += 1;
            degree[v] += 1;
        }
        for (v, &d) in degree.iter().enumerate() {
            if d == 0 {
                out.push(Violation::IsolatedVertex { vertex: v });
            }
        }

        if self.metrics.validate().is_err() {
            out.push(Violation::InvalidMetrics);
        }
        if let Some((i, j, k)) = first_delta_violation(&self.points, self.metrics.delta) {
            out.push(Violation::NotInGeneralPosition { line_from: i, line_to: j, point: k });
        }
        out
    }

    /// Serializes to the canonical single-line JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization cannot fail")
    }

    /// Parses and validates an instance; any violated invariant is an error.
    pub fn from_json(text: &str) -> Result<PuzzleInstance, PuzzleError> {
        let inst = Self::from_json_unchecked(text)?;
        let violations = inst.validate();
        if violations.is_empty() {
            Ok(inst)
        } else {
            Err(PuzzleError::Invalid(violations))
        }
    }

    /// Parses without validating invariants, for tools that report them.
    pub fn from_json_unchecked(text: &str) -> Result<PuzzleInstance, PuzzleError> {
        let file: InstanceFile = serde_json::from_str(text)?;
        Self::from_file(file)
    }

    fn from_file(file: InstanceFile) -> Result<PuzzleInstance, PuzzleError> {
        if file.version != FORMAT_VERSION {
            return Err(PuzzleError::UnsupportedVersion(file.version));
        }
        Ok(PuzzleInstance {
            grid_size: file.grid_size,
            points: file.points,
            edges: file.edges,
            assignment: file.assignment,
            solution_assignment: file.solution_assignment,
            metrics: file.metrics,
            meta: file.meta,
        })
    }
}

impl Serialize for PuzzleInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        InstanceFile {
            version: FORMAT_VERSION,
            grid_size: self.grid_size,
            points: self.points.clone(),
            edges: self.edges.clone(),
            assignment: self.assignment.clone(),
            solution_assignment: self.solution_assignment.clone(),
            metrics: self.metrics,
            meta: self.meta,
        }
        .serialize(s)
    }
}

/// Deserialization validates; invalid instances are rejected.
impl<'de> Deserialize<'de> for PuzzleInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let inst = Self::from_file(InstanceFile::deserialize(d)?).map_err(serde::de::Error::custom)?;
        let violations = inst.validate();
        if violations.is_empty() {
            Ok(inst)
        } else {
            Err(serde::de::Error::custom(PuzzleError::Invalid(violations)))
        }
    }
}

pub fn crossing_pairs_with(
    points: &[GridPoint],
    edges: &[Edge],
    assignment: &[usize],
) -> Vec<(usize, usize)> {
    let seg = |e: Edge| (points[assignment[e.0]], points[assignment[e.1]]);
    let mut out = Vec::new();
    for i in 0..edges.len() {
        let (a, b) = seg(edges[i]);
        for j in i + 1..edges.len() {
            let (c, d) = seg(edges[j]);
            if segments_cross(a, b, c, d) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn has_crossing(points: &[GridPoint], edges: &[Edge], assignment: &[usize]) -> bool {
    let seg = |e: Edge| (points[assignment[e.0]], points[assignment[e.1]]);
    for i in 0..edges.len() {
        let (a, b) = seg(edges[i]);
        for &f in &edges[i + 1..] {
            let (c, d) = seg(f);
            if segments_cross(a, b, c, d) {
                return true;
            }
        }
    }
    false
}

pub fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

pub fn components(n: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let adj = adjacency(n, edges);
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Whether every edge shares one common vertex.
pub fn is_star(edges: &[Edge]) -> bool {
    let Some(&(a, b)) = edges.first() else {
        return false;
    };
    [a, b].iter().any(|&c| edges.iter().all(|&(u, v)| u == c || v == c))
}

/// Points occupied by each component, as sorted lists parallel to
/// [`PuzzleInstance::components`].
pub fn component_point_sets(inst: &PuzzleInstance, assignment: &[usize]) -> Vec<Vec<usize>> {
    inst.components()
        .iter()
        .map(|comp| {
            let mut pts: Vec<usize> = comp.iter().map(|&v| assignment[v]).collect();
            pts.sort_unstable();
            pts
        })
        .collect()
}

/// Largest `delta` for which `points` are in δ-general position.
pub fn max_separation(points: &[GridPoint]) -> i64 {
    let n = points.len();
    let mut best = i128::MAX;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let len2 = points[i].dist2(points[j]);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let c = geom::cross(points[i], points[j], points[k]);
                best = best.min(isqrt((c * c) / len2));
            }
        }
    }
    if best == i128::MAX {
        i64::MAX
    } else {
        best as i64
    }
}

fn isqrt(v: i128) -> i128 {
    if v <= 0 {
        return 0;
    }
    let mut r = (v as f64).sqrt() as i128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Normalizes, deduplicates and sorts an edge list.
pub fn canonical_edges(edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Edge> {
    let set: HashSet<Edge> =
        edges.into_iter().map(|(u, v)| crate::triangulate::edge(u, v)).collect();
    let mut v: Vec<Edge> = set.into_iter().collect();
    v.sort_unstable();
    v
}
