//! Swap-equivalence of two instances.
//!
//! Two drawings are swap-equivalent when a vertex matching preserves the
//! edge relation and keeps the crossing pattern identical after any
//! sequence of matched swaps. For connected graphs that are not stars this
//! reduces to finding one matching that is both a graph isomorphism and an
//! order-type isomorphism of the point sets. A reflection flips every
//! orientation but preserves every crossing, so mirrored order-type
//! matchings are accepted too.
//!
//! When no such matching exists the verdict is backed by a witness: a graph
//! isomorphism together with four points whose crossing status differs, or
//! a proof that the graphs are not isomorphic at all.

use std::cmp::Ordering;
use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{convex_hull, cross, orient, GridPoint, Orientation};
use crate::puzzle::{adjacency, components, is_star, PuzzleInstance, SwapMove};
use crate::solve::{route_to_assignment, CrossOracle};
use crate::triangulate::edge;

/// Node budget for the fallback isomorphism search.
pub const SEARCH_BUDGET: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    Inapplicable,
}

/// Which hypotheses of the characterization hold for a pair of instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicability {
    pub connected: [bool; 2],
    pub star: [bool; 2],
    /// An orientation-preserving or mirrored point matching exists.
    pub same_order_type: bool,
    /// `None` when the isomorphism search ran out of budget.
    pub isomorphic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    SizeMismatch { vertices: [usize; 2], edges: [usize; 2] },
    /// No bijection of the vertices preserves the edge relation.
    NotIsomorphic,
    /// Under `vertex_matching`, segments `points[0]-points[1]` and
    /// `points[2]-points[3]` of the first point set cross iff
    /// `crosses_in_first`, but their images behave the other way. Every
    /// graph isomorphism the search visited failed in this way; this is the
    /// first one.
    CrossingMismatch {
        vertex_matching: Vec<usize>,
        points: [usize; 4],
        crosses_in_first: bool,
    },
    /// The search budget ran out before any isomorphism was settled.
    SearchBudget,
    /// The theorem's hypotheses fail.
    Inapplicable(Applicability),
    /// The matching preserves every crossing although it is not an
    /// order-type isomorphism. This only happens for degenerate point sets
    /// and for four points.
    CrossingsOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceCertificate {
    pub verdict: Verdict,
    /// Vertex matching `mu`, vertex of the first instance to vertex of the
    /// second.
    pub matching: Option<Vec<usize>>,
    /// The point matching induced by `matching` and the two assignments.
    pub point_matching: Option<Vec<usize>>,
    /// Whether the point matching reverses orientations.
    pub mirrored: bool,
    pub reason: Option<Reason>,
}

impl EquivalenceCertificate {
    fn not_equivalent(reason: Reason) -> Self {
        Self {
            verdict: Verdict::NotEquivalent,
            matching: None,
            point_matching: None,
            mirrored: false,
            reason: Some(reason),
        }
    }
}

/// All bijections `mu` (as index vectors into `p2`) with
/// `orient(u, v, w) == orient(mu u, mu v, mu w)` for every triple.
///
/// The lexicographically smallest point of `p1` is a hull vertex and must
/// go to a hull vertex of `p2`; the radial order around it then fixes the
/// rest, so at most one candidate per hull vertex of `p2` is checked.
/// For point sets that lie on one line only the two monotone matchings are
/// reported.
pub fn same_order_type(p1: &[GridPoint], p2: &[GridPoint]) -> Vec<Vec<usize>> {
    order_type_matchings(p1, p2, false)
}

/// Bijections that reverse every orientation.
pub fn mirrored_order_type(p1: &[GridPoint], p2: &[GridPoint]) -> Vec<Vec<usize>> {
    order_type_matchings(p1, p2, true)
}

fn order_type_matchings(p1: &[GridPoint], p2: &[GridPoint], mirror: bool) -> Vec<Vec<usize>> {
    let n = p1.len();
    if n != p2.len() {
        return Vec::new();
    }
    let q: Vec<GridPoint> = if mirror {
        p2.iter().map(|p| GridPoint::new(-p.x, p.y)).collect()
    } else {
        p2.to_vec()
    };
    if n <= 2 {
        let mut out = vec![(0..n).collect::<Vec<_>>()];
        if n == 2 {
            out.push(vec![1, 0]);
        }
        return out;
    }
    if all_collinear(p1) {
        if !all_collinear(&q) {
            return Vec::new();
        }
        let mut s1: Vec<usize> = (0..n).collect();
        let mut s2: Vec<usize> = (0..n).collect();
        s1.sort_by_key(|&i| p1[i]);
        s2.sort_by_key(|&i| q[i]);
        let mut out = Vec::new();
        for rev in [false, true] {
            let mut mu = vec![0; n];
            for k in 0..n {
                mu[s1[k]] = if rev { s2[n - 1 - k] } else { s2[k] };
            }
            out.push(mu);
        }
        return out;
    }

    let anchor = (0..n).min_by_key(|&i| p1[i]).expect("nonempty");
    let order1 = radial_order(p1, anchor);
    let hull2 = convex_hull(&q);
    let h = hull2.len();
    let mut out = Vec::new();
    for k in 0..h {
        let (prev, cur, next) = (hull2[(k + h - 1) % h], hull2[k], hull2[(k + 1) % h]);
        if orient(q[prev], q[cur], q[next]) == Orientation::Collinear {
            continue;
        }
        let order2 = radial_order(&q, cur);
        let mut mu = vec![0; n];
        mu[anchor] = cur;
        for (&a, &b) in order1.iter().zip(&order2) {
            mu[a] = b;
        }
        if preserves_orientation(p1, &q, &mu) {
            out.push(mu);
        }
    }
    out
}

fn all_collinear(p: &[GridPoint]) -> bool {
    p.len() < 3 || (2..p.len()).all(|k| orient(p[0], p[1], p[k]) == Orientation::Collinear)
}

/// Indices other than `a`, counter-clockwise around the strictly convex
/// hull vertex `a`, nearer points first on a shared ray.
fn radial_order(p: &[GridPoint], a: usize) -> Vec<usize> {
    let mut rest: Vec<usize> = (0..p.len()).filter(|&i| i != a).collect();
    rest.sort_by(|&x, &y| match cross(p[a], p[x], p[y]).cmp(&0) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => p[a].dist2(p[x]).cmp(&p[a].dist2(p[y])),
    });
    rest
}

fn preserves_orientation(p1: &[GridPoint], p2: &[GridPoint], mu: &[usize]) -> bool {
    let n = p1.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(p1[i], p1[j], p1[k]) != orient(p2[mu[i]], p2[mu[j]], p2[mu[k]]) {
                    return false;
                }
            }
        }
    }
    true
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn edge_set(inst: &PuzzleInstance) -> HashSet<(usize, usize)> {
    inst.edges.iter().map(|&(u, v)| edge(u, v)).collect()
}

fn preserves_edges(a: &PuzzleInstance, b_edges: &HashSet<(usize, usize)>, mu: &[usize]) -> bool {
    a.edges.iter().all(|&(u, v)| b_edges.contains(&edge(mu[u], mu[v])))
}

/// Decides swap-equivalence, with a certificate for the verdict.
pub fn swap_equivalent(a: &PuzzleInstance, b: &PuzzleInstance) -> EquivalenceCertificate {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return EquivalenceCertificate::not_equivalent(Reason::SizeMismatch {
            vertices: [n, b.vertex_count()],
            edges: [a.edge_count(), b.edge_count()],
        });
    }
    let b_edges = edge_set(b);
    let sigma1_inv = inverse(&a.assignment);
    let sigma2_inv = inverse(&b.assignment);
    let to_vertex_matching = |mu_p: &[usize]| -> Vec<usize> {
        (0..n).map(|u| sigma2_inv[mu_p[a.assignment[u]]]).collect()
    };

    let connected = [
        components(n, &a.edges).len() == 1,
        components(n, &b.edges).len() == 1,
    ];
    let star = [is_star(&a.edges), is_star(&b.edges)];
    let applicable = connected == [true, true] && star == [false, false];

    let mut any_order_type = false;
    for mirrored in [false, true] {
        for mu_p in order_type_matchings(&a.points, &b.points, mirrored) {
            any_order_type = true;
            let mu = to_vertex_matching(&mu_p);
            if preserves_edges(a, &b_edges, &mu) {
                let verdict = if applicable { Verdict::Equivalent } else { Verdict::Inapplicable };
                let reason = (!applicable).then_some({
                    Reason::Inapplicable(Applicability {
                        connected,
                        star,
                        same_order_type: true,
                        isomorphic: Some(true),
                    })
                });
                return EquivalenceCertificate {
                    verdict,
                    matching: Some(mu),
                    point_matching: Some(mu_p),
                    mirrored,
                    reason,
                };
            }
        }
    }

    let search = IsoSearch::new(a, b).run();
    if !applicable {
        return EquivalenceCertificate {
            verdict: Verdict::Inapplicable,
            matching: None,
            point_matching: None,
            mirrored: false,
            reason: Some(Reason::Inapplicable(Applicability {
                connected,
                star,
                same_order_type: any_order_type,
                isomorphic: search.isomorphic(),
            })),
        };
    }
    match search {
        SearchOutcome::CrossingPreserving(mu) => {
            let mu_p: Vec<usize> = (0..n).map(|p| b.assignment[mu[sigma1_inv[p]]]).collect();
            EquivalenceCertificate {
                verdict: Verdict::Equivalent,
                matching: Some(mu),
                point_matching: Some(mu_p),
                mirrored: false,
                reason: Some(Reason::CrossingsOnly),
            }
        }
        SearchOutcome::NoIsomorphism => EquivalenceCertificate::not_equivalent(Reason::NotIsomorphic),
        SearchOutcome::Refuted { matching, points, crosses_in_first } => {
            EquivalenceCertificate::not_equivalent(Reason::CrossingMismatch {
                vertex_matching: matching,
                points,
                crosses_in_first,
            })
        }
        SearchOutcome::OutOfBudget => EquivalenceCertificate::not_equivalent(Reason::SearchBudget),
    }
}

enum SearchOutcome {
    CrossingPreserving(Vec<usize>),
    NoIsomorphism,
    Refuted { matching: Vec<usize>, points: [usize; 4], crosses_in_first: bool },
    OutOfBudget,
}

impl SearchOutcome {
    fn isomorphic(&self) -> Option<bool> {
        match self {
            SearchOutcome::CrossingPreserving(_) | SearchOutcome::Refuted { .. } => Some(true),
            SearchOutcome::NoIsomorphism => Some(false),
            SearchOutcome::OutOfBudget => None,
        }
    }
}

/// Backtracking over vertex matchings that preserve the edge relation,
/// pruned by crossing preservation of the induced point map.
struct IsoSearch<'a> {
    a: &'a PuzzleInstance,
    b: &'a PuzzleInstance,
    adj_a: Vec<Vec<usize>>,
    deg_b: Vec<usize>,
    b_edges: HashSet<(usize, usize)>,
    cross_a: CrossOracle<'a>,
    cross_b: CrossOracle<'a>,
    order: Vec<usize>,
    nodes: u64,
    first_refutation: Option<(Vec<usize>, [usize; 4], bool)>,
}

enum Step {
    Found(Vec<usize>),
    Exhausted,
    Budget,
}

impl<'a> IsoSearch<'a> {
    fn new(a: &'a PuzzleInstance, b: &'a PuzzleInstance) -> Self {
        let n = a.vertex_count();
        let adj_a = adjacency(n, &a.edges);
        let deg_b = adjacency(n, &b.edges).iter().map(Vec::len).collect();
        // breadth-first from each component's smallest vertex keeps
        // placed vertices adjacent, which prunes early
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut head = order.len();
            order.push(start);
            while head < order.len() {
                let u = order[head];
                head += 1;
                for &w in &adj_a[u] {
                    if !seen[w] {
                        seen[w] = true;
                        order.push(w);
                    }
                }
            }
        }
        Self {
            a,
            b,
            adj_a,
            deg_b,
            b_edges: edge_set(b),
            cross_a: CrossOracle::new(&a.points),
            cross_b: CrossOracle::new(&b.points),
            order,
            nodes: 0,
            first_refutation: None,
        }
    }

    fn run(mut self) -> SearchOutcome {
        let n = self.a.vertex_count();
        let mut mu = vec![usize::MAX; n];
        let mut used = vec![false; n];
        match self.extend(0, &mut mu, &mut used) {
            Step::Found(mu) => SearchOutcome::CrossingPreserving(mu),
            Step::Budget => SearchOutcome::OutOfBudget,
            Step::Exhausted => match self.first_refutation {
                Some((matching, points, crosses_in_first)) => {
                    SearchOutcome::Refuted { matching, points, crosses_in_first }
                }
                None => SearchOutcome::NoIsomorphism,
            },
        }
    }

    fn extend(&mut self, k: usize, mu: &mut [usize], used: &mut [bool]) -> Step {
        if k == mu.len() {
            return Step::Found(mu.to_vec());
        }
        let v = self.order[k];
        for w in 0..mu.len() {
            if used[w] || self.deg_b[w] != self.adj_a[v].len() {
                continue;
            }
            self.nodes += 1;
            if self.nodes > SEARCH_BUDGET {
                return Step::Budget;
            }
            let consistent = self.order[..k].iter().all(|&u| {
                let in_a = self.adj_a[v].binary_search(&u).is_ok();
                in_a == self.b_edges.contains(&edge(w, mu[u]))
            });
            if !consistent {
                continue;
            }
            mu[v] = w;
            if let Some(mismatch) = self.crossing_mismatch(k, mu) {
                if self.first_refutation.is_none() {
                    let full = self.complete_isomorphism(k + 1, mu, used, w);
                    if let Some(full) = full {
                        self.first_refutation = Some((full, mismatch.0, mismatch.1));
                    }
                }
                mu[v] = usize::MAX;
                continue;
            }
            used[w] = true;
            match self.extend(k + 1, mu, used) {
                Step::Exhausted => {}
                other => return other,
            }
            used[w] = false;
            mu[v] = usize::MAX;
        }
        Step::Exhausted
    }

    /// Four points of the first set, one of them the point of the vertex
    /// just placed, whose crossing status the current partial matching
    /// changes.
    fn crossing_mismatch(&self, k: usize, mu: &[usize]) -> Option<([usize; 4], bool)> {
        let (s1, s2) = (&self.a.assignment, &self.b.assignment);
        let v = self.order[k];
        let q = (s1[v], s2[mu[v]]);
        let placed: Vec<(usize, usize)> =
            self.order[..k].iter().map(|&u| (s1[u], s2[mu[u]])).collect();
        for i in 0..placed.len() {
            for j in i + 1..placed.len() {
                for l in j + 1..placed.len() {
                    let (pi, pj, pl) = (placed[i], placed[j], placed[l]);
                    for [x, y, z, t] in [[pi, pj, pl, q], [pi, pl, pj, q], [pi, q, pj, pl]] {
                        let c1 = self.cross_a.crosses(x.0, y.0, z.0, t.0);
                        let c2 = self.cross_b.crosses(x.1, y.1, z.1, t.1);
                        if c1 != c2 {
                            return Some(([x.0, y.0, z.0, t.0], c1));
                        }
                    }
                }
            }
        }
        None
    }

    /// Any edge-preserving completion of `mu`, ignoring crossings; used to
    /// turn the first local mismatch into a full refuting matching.
    fn complete_isomorphism(
        &mut self,
        k: usize,
        mu: &mut [usize],
        used: &mut [bool],
        just_placed: usize,
    ) -> Option<Vec<usize>> {
        used[just_placed] = true;
        let result = self.complete_from(k, mu, used);
        used[just_placed] = false;
        result
    }

    fn complete_from(&mut self, k: usize, mu: &mut [usize], used: &mut [bool]) -> Option<Vec<usize>> {
        if k == mu.len() {
            return Some(mu.to_vec());
        }
        let v = self.order[k];
        for w in 0..mu.len() {
            if used[w] || self.deg_b[w] != self.adj_a[v].len() {
                continue;
            }
            self.nodes += 1;
            if self.nodes > SEARCH_BUDGET {
                return None;
            }
            let consistent = self.order[..k].iter().all(|&u| {
                let in_a = self.adj_a[v].binary_search(&u).is_ok();
                in_a == self.b_edges.contains(&edge(w, mu[u]))
            });
            if !consistent {
                continue;
            }
            mu[v] = w;
            used[w] = true;
            let found = self.complete_from(k + 1, mu, used);
            used[w] = false;
            mu[v] = usize::MAX;
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// The move in `b` matched to move `mv` of `a` under the vertex matching.
pub fn matched_move(
    a: &PuzzleInstance,
    b: &PuzzleInstance,
    mu: &[usize],
    mv: SwapMove,
) -> Option<SwapMove> {
    let (u, v) = *a.edges.get(mv.0)?;
    b.edge_index(mu[u], mu[v]).map(SwapMove)
}

/// Crossing pairs of `a` mapped into `b`'s edge indices, sorted.
fn mapped_crossings(a: &PuzzleInstance, edge_map: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = a
        .crossing_pairs()
        .into_iter()
        .map(|(e, f)| (edge_map[e].min(edge_map[f]), edge_map[e].max(edge_map[f])))
        .collect();
    out.sort_unstable();
    out
}

/// Applies `moves` to `a` and the matched moves to `b`, checking after
/// every step (and before the first) that the crossing pairs correspond.
/// Returns the index of the first step with a discrepancy, where `0` is
/// the starting position.
///
/// # Panics
/// If `mu` does not map every edge of `a` onto an edge of `b`.
pub fn replay_matched_walk(
    a: &PuzzleInstance,
    b: &PuzzleInstance,
    mu: &[usize],
    moves: &[SwapMove],
) -> Option<usize> {
    let edge_map: Vec<usize> = a
        .edges
        .iter()
        .map(|&(u, v)| b.edge_index(mu[u], mu[v]).expect("matching preserves edges"))
        .collect();
    let (mut x, mut y) = (a.clone(), b.clone());
    if mapped_crossings(&x, &edge_map) != y.crossing_pairs() {
        return Some(0);
    }
    for (i, &mv) in moves.iter().enumerate() {
        x.swap_in_place(mv).expect("move in range");
        y.swap_in_place(SwapMove(edge_map[mv.0])).expect("matched move in range");
        if mapped_crossings(&x, &edge_map) != y.crossing_pairs() {
            return Some(i + 1);
        }
    }
    None
}

/// Randomized check of the definition: `trials` random matched walks of
/// length `walk_length`, comparing crossing pairs after every step.
/// Returns `false` on the first discrepancy.
pub fn definition_oracle(
    a: &PuzzleInstance,
    b: &PuzzleInstance,
    mu: &[usize],
    walk_length: usize,
    trials: usize,
    seed: u64,
) -> bool {
    if a.edge_count() == 0 {
        return replay_matched_walk(a, b, mu, &[]).is_none();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).all(|_| {
        let walk: Vec<SwapMove> =
            (0..walk_length).map(|_| SwapMove(rng.random_range(0..a.edge_count()))).collect();
        replay_matched_walk(a, b, mu, &walk).is_none()
    })
}

/// A swap sequence in `a` that places two vertex-disjoint edges on the
/// segments `points[0]-points[1]` and `points[2]-points[3]`.
///
/// Returns `None` if `a` is disconnected or has no two disjoint edges.
pub fn separating_walk(a: &PuzzleInstance, points: [usize; 4]) -> Option<Vec<SwapMove>> {
    let n = a.vertex_count();
    if components(n, &a.edges).len() != 1 {
        return None;
    }
    let (e, f) = a.edges.iter().enumerate().find_map(|(i, &(u, v))| {
        a.edges[i + 1..]
            .iter()
            .find(|&&(w, x)| u != w && u != x && v != w && v != x)
            .map(|&g| ((u, v), g))
    })?;
    let mut target = vec![usize::MAX; n];
    target[e.0] = points[0];
    target[e.1] = points[1];
    target[f.0] = points[2];
    target[f.1] = points[3];
    let mut free = (0..n).filter(|p| !points.contains(p));
    for slot in target.iter_mut().filter(|t| **t == usize::MAX) {
        *slot = free.next().expect("as many points as vertices");
    }
    route_to_assignment(a, &target).ok()
}
