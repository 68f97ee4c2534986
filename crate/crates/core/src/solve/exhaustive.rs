//! Exhaustive solvability check for small instances.

use super::{CrossOracle, SolveError};
use crate::puzzle::{components, PuzzleInstance};

/// Upper bound on the number of reachable assignments the backtracking
/// search is allowed to consider.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

/// Searches every assignment reachable by swaps for a crossing-free one.
///
/// Reachable assignments are exactly those that keep each component on its
/// current point set. Vertices are placed in index order and a branch is cut
/// as soon as two fully placed edges cross. Returns the lexicographically
/// smallest plane assignment, or `None` when there is none.
pub fn exhaustive_solvable(inst: &PuzzleInstance) -> Result<Option<Vec<usize>>, SolveError> {
    let n = inst.vertex_count();
    let comps = components(n, &inst.edges);
    let mut total: u128 = 1;
    for comp in &comps {
        for k in 2..=comp.len() as u128 {
            total = total.saturating_mul(k);
        }
    }
    if total > EXHAUSTIVE_LIMIT {
        return Err(SolveError::TooLarge { assignments: total, limit: EXHAUSTIVE_LIMIT });
    }

    let mut comp_of = vec![0usize; n];
    let mut pool: Vec<Vec<usize>> = Vec::with_capacity(comps.len());
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
        let mut pts: Vec<usize> = comp.iter().map(|&v| inst.assignment[v]).collect();
        pts.sort_unstable();
        pool.push(pts);
    }
    // edges whose larger endpoint is v become complete once v is placed
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in &inst.edges {
        closing[u.max(v)].push(u.min(v));
    }

    let search = Search {
        oracle: CrossOracle::new(&inst.points),
        comp_of,
        pool,
        closing,
    };
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut placed_edges = Vec::new();
    Ok(search.place(0, &mut sigma, &mut used, &mut placed_edges).then_some(sigma))
}

struct Search<'a> {
    oracle: CrossOracle<'a>,
    comp_of: Vec<usize>,
    pool: Vec<Vec<usize>>,
    closing: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn place(
        &self,
        v: usize,
        sigma: &mut [usize],
        used: &mut [bool],
        placed: &mut Vec<(usize, usize)>,
    ) -> bool {
        if v == sigma.len() {
            return true;
        }
        for &p in &self.pool[self.comp_of[v]] {
            if used[p] {
                continue;
            }
            sigma[v] = p;
            let before = placed.len();
            let mut ok = true;
            'edges: for &u in &self.closing[v] {
                let (a, b) = (sigma[u], p);
                for &(c, d) in placed.iter() {
                    if self.oracle.crosses(a, b, c, d) {
                        ok = false;
                        break 'edges;
                    }
                }
                placed.push((a, b));
            }
            if ok {
                used[p] = true;
                if self.place(v + 1, sigma, used, placed) {
                    return true;
                }
                used[p] = false;
            }
            placed.truncate(before);
        }
        sigma[v] = usize::MAX;
        false
    }
}
