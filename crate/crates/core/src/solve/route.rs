//! Constructive routing of a drawing onto any reachable target assignment.
//!
//! Each connected component keeps its set of occupied points under swaps,
//! and within a component any permutation of those points is reachable.
//! The router works on a BFS spanning tree of every component: it fixes
//! one leaf at a time by walking the token that belongs there along the
//! tree path to the leaf, then retires the leaf. Each leaf costs at most
//! `n - 1` swaps.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::SolveError;
use crate::puzzle::{components, PuzzleInstance, SwapMove};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutePhase {
    /// Vertex placed and retired at the end of this phase.
    pub vertex: usize,
    pub swaps: Vec<SwapMove>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub phases: Vec<RoutePhase>,
}

impl Route {
    pub fn moves(&self) -> Vec<SwapMove> {
        self.phases.iter().flat_map(|p| p.swaps.iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        self.phases.iter().map(|p| p.swaps.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Swap sequence turning `inst.assignment` into `target`.
pub fn route_to_assignment(
    inst: &PuzzleInstance,
    target: &[usize],
) -> Result<Vec<SwapMove>, SolveError> {
    route_with_phases(inst, target).map(|r| r.moves())
}

pub fn route_with_phases(inst: &PuzzleInstance, target: &[usize]) -> Result<Route, SolveError> {
    let n = inst.vertex_count();
    if target.len() != n {
        return Err(SolveError::TargetNotBijective(n));
    }
    let mut seen = vec![false; n];
    for &p in target {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(SolveError::TargetNotBijective(n));
        }
    }

    let comps = components(n, &inst.edges);
    for comp in &comps {
        let mut now: Vec<usize> = comp.iter().map(|&v| inst.assignment[v]).collect();
        let mut want: Vec<usize> = comp.iter().map(|&v| target[v]).collect();
        now.sort_unstable();
        want.sort_unstable();
        if now != want {
            return Err(SolveError::Unreachable { vertex: comp[0] });
        }
    }

    let edge_ids: HashMap<(usize, usize), usize> =
        inst.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let edge_id = |a: usize, b: usize| edge_ids[&(a.min(b), a.max(b))];
    let adj = inst.adjacency();

    let mut sigma = inst.assignment.clone();
    let mut holder = vec![0usize; n];
    for (v, &p) in sigma.iter().enumerate() {
        holder[p] = v;
    }
    let mut route = Route::default();

    for comp in &comps {
        // BFS spanning tree rooted at the smallest vertex
        let mut tree: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut visited = vec![false; n];
        let mut queue = VecDeque::from([comp[0]]);
        visited[comp[0]] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !visited[w] {
                    visited[w] = true;
                    tree[u].push(w);
                    tree[w].push(u);
                    queue.push_back(w);
                }
            }
        }

        let mut alive = vec![false; n];
        for &v in comp {
            alive[v] = true;
        }
        let mut degree: Vec<usize> = (0..n).map(|v| tree[v].len()).collect();

        for _ in 0..comp.len() {
            let leaf = *comp
                .iter()
                .find(|&&v| alive[v] && degree[v] <= 1)
                .expect("a finite tree always has a leaf");
            let from = holder[target[leaf]];
            let path = tree_path(&tree, &alive, from, leaf);
            let mut swaps = Vec::with_capacity(path.len().saturating_sub(1));
            for pair in path.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                sigma.swap(a, b);
                holder[sigma[a]] = a;
                holder[sigma[b]] = b;
                swaps.push(SwapMove(edge_id(a, b)));
            }
            debug_assert_eq!(sigma[leaf], target[leaf]);
            alive[leaf] = false;
            for &w in &tree[leaf] {
                if alive[w] {
                    degree[w] -= 1;
                }
            }
            route.phases.push(RoutePhase { vertex: leaf, swaps });
        }
    }
    debug_assert_eq!(sigma, target);
    Ok(route)
}

/// Vertex path `from ..= to` through live tree vertices.
fn tree_path(tree: &[Vec<usize>], alive: &[bool], from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; tree.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in &tree[u] {
            if alive[w] && parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}
