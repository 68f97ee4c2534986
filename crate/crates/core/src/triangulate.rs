//! Delaunay triangulation and random Lawson flips.
//!
//! The triangulation is built by a left-to-right sweep that fans each new
//! point onto the visible part of the current hull, then legalized with
//! in-circle flips until every edge is locally Delaunay. Cocircular
//! configurations are left alone (an `On` result is not a violation).

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use thiserror::Error;

use crate::geom::{in_circle, orient, CirclePosition, GridPoint, Orientation};

/// An undirected edge, smaller index first.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulateError {
    #[error("a triangulation needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("all points are collinear")]
    AllCollinear,
    #[error("point {0} appears more than once")]
    DuplicatePoint(GridPoint),
    #[error("({}, {}) is not an edge of the triangulation", .0.0, .0.1)]
    NotAnEdge(Edge),
    #[error("({}, {}) is a hull edge and cannot be flipped", .0.0, .0.1)]
    BoundaryEdge(Edge),
    #[error("the triangles beside ({}, {}) do not form a convex quadrilateral", .0.0, .0.1)]
    NotConvex(Edge),
}

/// Random flipping stopped before the requested count because no flippable
/// edge turned up within the skip budget.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("flipping stalled after {performed} of {requested} flips")]
pub struct FlipStall {
    pub performed: usize,
    pub requested: usize,
    pub triangulation: Box<Triangulation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    points: Vec<GridPoint>,
    /// Counter-clockwise vertex triples.
    triangles: Vec<[usize; 3]>,
    /// Each edge and the one or two triangles beside it.
    incidence: BTreeMap<Edge, (usize, Option<usize>)>,
}

fn ccw(points: &[GridPoint], t: [usize; 3]) -> [usize; 3] {
    if orient(points[t[0]], points[t[1]], points[t[2]]) == Orientation::Right {
        [t[0], t[2], t[1]]
    } else {
        t
    }
}

fn third(t: [usize; 3], e: Edge) -> usize {
    *t.iter().find(|&&v| v != e.0 && v != e.1).expect("triangle has a third vertex")
}

impl Triangulation {
    /// Delaunay triangulation of `points`.
    pub fn delaunay(points: &[GridPoint]) -> Result<Self, TriangulateError> {
        let mut t = Self::sweep(points)?;
        t.legalize();
        Ok(t)
    }

    /// Builds a triangulation from explicit triangles over `points`.
    pub fn from_triangles(
        points: Vec<GridPoint>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Self, TriangulateError> {
        if points.len() < 3 {
            return Err(TriangulateError::TooFewPoints(points.len()));
        }
        for t in &triangles {
            if orient(points[t[0]], points[t[1]], points[t[2]]) == Orientation::Collinear {
                return Err(TriangulateError::AllCollinear);
            }
        }
        let triangles = triangles.into_iter().map(|t| ccw(&points, t)).collect();
        let mut tri = Self { points, triangles, incidence: BTreeMap::new() };
        tri.rebuild_incidence();
        Ok(tri)
    }

    fn sweep(points: &[GridPoint]) -> Result<Self, TriangulateError> {
        let n = points.len();
        if n < 3 {
            return Err(TriangulateError::TooFewPoints(n));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| points[i]);
        if let Some(w) = order.windows(2).find(|w| points[w[0]] == points[w[1]]) {
            return Err(TriangulateError::DuplicatePoint(points[w[0]]));
        }

        let base = (points[order[0]], points[order[1]]);
        let apex_pos = (2..n)
            .find(|&k| orient(base.0, base.1, points[order[k]]) != Orientation::Collinear)
            .ok_or(TriangulateError::AllCollinear)?;
        let apex = order[apex_pos];
        let chain = &order[..apex_pos];

        let mut triangles: Vec<[usize; 3]> = chain
            .windows(2)
            .map(|w| ccw(points, [w[0], w[1], apex]))
            .collect();
        let mut hull: Vec<usize> = match orient(base.0, base.1, points[apex]) {
            Orientation::Left => chain.to_vec(),
            _ => chain.iter().rev().copied().collect(),
        };
        hull.push(apex);

        for &p in &order[apex_pos + 1..] {
            let h = hull.len();
            let visible: Vec<bool> = (0..h)
                .map(|i| {
                    orient(points[hull[i]], points[hull[(i + 1) % h]], points[p])
                        == Orientation::Right
                })
                .collect();
            let start = (0..h)
                .find(|&i| visible[i] && !visible[(i + h - 1) % h])
                .expect("a point beyond the sweep line sees part of the hull");
            hull.rotate_left(start);
            let count = visible.iter().filter(|&&v| v).count();
            for i in 0..count {
                triangles.push(ccw(points, [hull[i], hull[i + 1], p]));
            }
            let mut next = Vec::with_capacity(h - count + 2);
            next.push(hull[0]);
            next.push(p);
            next.extend_from_slice(&hull[count..]);
            hull = next;
        }

        let mut t = Self { points: points.to_vec(), triangles, incidence: BTreeMap::new() };
        t.rebuild_incidence();
        Ok(t)
    }

    fn rebuild_incidence(&mut self) {
        self.incidence.clear();
        for (ti, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let e = edge(t[k], t[(k + 1) % 3]);
                self.incidence
                    .entry(e)
                    .and_modify(|slot| slot.1 = Some(ti))
                    .or_insert((ti, None));
            }
        }
    }

    fn legalize(&mut self) {
        let mut stack: Vec<Edge> = self.internal_edges();
        while let Some(e) = stack.pop() {
            let Some(&(t1, Some(t2))) = self.incidence.get(&e) else {
                continue;
            };
            let tri = self.triangles[t1];
            let d = third(self.triangles[t2], e);
            let p = &self.points;
            let inside = in_circle(p[tri[0]], p[tri[1]], p[tri[2]], p[d])
                .map(|pos| pos == CirclePosition::Inside)
                .unwrap_or(false);
            if inside && self.flip_edge(e.0, e.1).is_ok() {
                let c = third(tri, e);
                stack.extend([edge(e.0, c), edge(c, e.1), edge(e.1, d), edge(d, e.0)]);
            }
        }
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// All edges in sorted order.
    pub fn edges(&self) -> Vec<Edge> {
        self.incidence.keys().copied().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.incidence.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.incidence.contains_key(&edge(u, v))
    }

    /// Edges shared by two triangles, in sorted order.
    pub fn internal_edges(&self) -> Vec<Edge> {
        self.incidence
            .iter()
            .filter(|(_, slot)| slot.1.is_some())
            .map(|(e, _)| *e)
            .collect()
    }

    /// Number of hull edges, which equals the number of hull points.
    pub fn hull_size(&self) -> usize {
        self.incidence.values().filter(|slot| slot.1.is_none()).count()
    }

    /// The opposite corners `(c, d)` of an internal edge, if its two
    /// triangles form a strictly convex quadrilateral.
    pub fn flip_partner(&self, u: usize, v: usize) -> Result<Edge, TriangulateError> {
        let e = edge(u, v);
        let &(t1, t2) = self.incidence.get(&e).ok_or(TriangulateError::NotAnEdge(e))?;
        let t2 = t2.ok_or(TriangulateError::BoundaryEdge(e))?;
        let c = third(self.triangles[t1], e);
        let d = third(self.triangles[t2], e);
        let p = &self.points;
        let convex = orient(p[c], p[d], p[e.0]).signum() * orient(p[c], p[d], p[e.1]).signum()
            < 0
            && orient(p[e.0], p[e.1], p[c]).signum() * orient(p[e.0], p[e.1], p[d]).signum() < 0;
        if convex {
            Ok((c, d))
        } else {
            Err(TriangulateError::NotConvex(e))
        }
    }

    pub fn is_flippable(&self, u: usize, v: usize) -> bool {
        self.flip_partner(u, v).is_ok()
    }

    /// Replaces the internal edge `uv` by the other diagonal of its
    /// quadrilateral and returns that diagonal.
    pub fn flip_edge(&mut self, u: usize, v: usize) -> Result<Edge, TriangulateError> {
        let (c, d) = self.flip_partner(u, v)?;
        let e = edge(u, v);
        let (t1, t2) = self.incidence[&e];
        let t2 = t2.expect("checked by flip_partner");
        let (a, b) = e;
        // t1 keeps the corner c, t2 keeps d; after the flip t1 = {a, c, d}
        // and t2 = {b, c, d}.
        self.triangles[t1] = ccw(&self.points, [a, c, d]);
        self.triangles[t2] = ccw(&self.points, [b, c, d]);
        self.incidence.remove(&e);
        self.incidence.insert(edge(c, d), (t1, Some(t2)));
        self.retarget(edge(b, c), t1, t2);
        self.retarget(edge(a, d), t2, t1);
        Ok(edge(c, d))
    }

    fn retarget(&mut self, e: Edge, from: usize, to: usize) {
        if let Some(slot) = self.incidence.get_mut(&e) {
            if slot.0 == from {
                slot.0 = to;
            } else if slot.1 == Some(from) {
                slot.1 = Some(to);
            }
        }
    }

    /// Performs `count` random Lawson flips.
    ///
    /// Each pick is a uniformly random internal edge; picks whose
    /// quadrilateral is not convex are skipped without counting. After
    /// `100 * |edges|` consecutive skips the partial result is returned in
    /// the error.
    pub fn lawson_flips<R: Rng + ?Sized>(
        &self,
        count: usize,
        rng: &mut R,
    ) -> Result<Triangulation, FlipStall> {
        let mut t = self.clone();
        let mut internal = t.internal_edges();
        let skip_budget = 100 * t.edge_count();
        let mut performed = 0;
        let mut skips = 0;
        while performed < count {
            if internal.is_empty() || skips >= skip_budget {
                return Err(FlipStall {
                    performed,
                    requested: count,
                    triangulation: Box::new(t),
                });
            }
            let k = rng.random_range(0..internal.len());
            let (u, v) = internal[k];
            match t.flip_edge(u, v) {
                Ok(replacement) => {
                    internal[k] = replacement;
                    performed += 1;
                    skips = 0;
                }
                Err(_) => skips += 1,
            }
        }
        Ok(t)
    }

    /// Triangles whose circumcircle strictly contains another point, with
    /// that point. Empty for a Delaunay triangulation.
    pub fn empty_circle_violations(&self) -> Vec<([usize; 3], usize)> {
        let p = &self.points;
        let mut out = Vec::new();
        for &t in &self.triangles {
            for (i, &q) in p.iter().enumerate() {
                if t.contains(&i) {
                    continue;
                }
                if in_circle(p[t[0]], p[t[1]], p[t[2]], q) == Ok(CirclePosition::Inside) {
                    out.push((t, i));
                }
            }
        }
        out
    }

    pub fn is_delaunay(&self) -> bool {
        self.empty_circle_violations().is_empty()
    }

    /// Every point is a corner of some triangle.
    pub fn covers_all_points(&self) -> bool {
        let used: HashSet<usize> = self.triangles.iter().flatten().copied().collect();
        used.len() == self.points.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{convex_hull, segments_cross};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pts(v: &[(i64, i64)]) -> Vec<GridPoint> {
        v.iter().map(|&(x, y)| GridPoint::new(x, y)).collect()
    }

    fn crossing_free(t: &Triangulation) -> bool {
        let e = t.edges();
        let p = t.points();
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if segments_cross(p[e[i].0], p[e[i].1], p[e[j].0], p[e[j].1]) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn square_picks_one_diagonal() {
        let p = pts(&[(0, 0), (1000, 0), (1000, 1000), (0, 1000)]);
        let t = Triangulation::delaunay(&p).unwrap();
        assert_eq!(t.edge_count(), 5);
        assert_eq!(t.edge_count(), 3 * 4 - 4 - 3);
        assert!(t.is_delaunay());
        assert_eq!(t.internal_edges().len(), 1);
    }

    #[test]
    fn too_few_and_collinear() {
        assert_eq!(
            Triangulation::delaunay(&pts(&[(0, 0), (1, 1)])),
            Err(TriangulateError::TooFewPoints(2))
        );
        assert_eq!(
            Triangulation::delaunay(&pts(&[(0, 0), (1, 1), (2, 2), (3, 3)])),
            Err(TriangulateError::AllCollinear)
        );
        assert!(matches!(
            Triangulation::delaunay(&pts(&[(0, 0), (1, 1), (0, 0)])),
            Err(TriangulateError::DuplicatePoint(_))
        ));
    }

    #[test]
    fn collinear_prefix_is_fanned() {
        let p = pts(&[(0, 0), (0, 10), (0, 20), (0, 30), (15, 12), (40, 5)]);
        let t = Triangulation::delaunay(&p).unwrap();
        let k = convex_hull(&p).len();
        assert_eq!(t.edge_count(), 3 * p.len() - k - 3);
        assert!(t.is_delaunay());
        assert!(crossing_free(&t));
    }

    #[test]
    fn flip_twice_is_identity() {
        let p = pts(&[(0, 0), (1000, 0), (1000, 1000), (0, 1000)]);
        let t = Triangulation::delaunay(&p).unwrap();
        let (u, v) = t.internal_edges()[0];
        let mut f = t.clone();
        let (c, d) = f.flip_edge(u, v).unwrap();
        assert!(!f.has_edge(u, v));
        assert!(f.has_edge(c, d));
        assert_eq!(edge(c, d), if edge(u, v) == (0, 2) { (1, 3) } else { (0, 2) });
        f.flip_edge(c, d).unwrap();
        assert_eq!(f.edges(), t.edges());
    }

    #[test]
    fn non_convex_and_boundary_flips_rejected() {
        // triangle with an interior point: every internal edge is reflex
        let p = pts(&[(0, 0), (100, 0), (50, 100), (50, 30)]);
        let t = Triangulation::delaunay(&p).unwrap();
        for (u, v) in t.internal_edges() {
            assert_eq!(t.flip_partner(u, v), Err(TriangulateError::NotConvex(edge(u, v))));
        }
        assert_eq!(t.flip_partner(0, 1), Err(TriangulateError::BoundaryEdge((0, 1))));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let stall = t.lawson_flips(2, &mut rng).unwrap_err();
        assert_eq!(stall.performed, 0);
        assert_eq!(stall.triangulation.edges(), t.edges());
    }

    #[test]
    fn zero_flips_is_identity() {
        let p = pts(&[(0, 0), (900, 40), (1000, 1000), (30, 800), (500, 450)]);
        let t = Triangulation::delaunay(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(t.lawson_flips(0, &mut rng).unwrap(), t);
    }

    #[test]
    fn random_flips_keep_plane_and_count() {
        let p = pts(&[
            (0, 0),
            (900, 40),
            (1000, 1000),
            (30, 800),
            (500, 450),
            (200, 300),
            (700, 600),
            (420, 900),
        ]);
        let t = Triangulation::delaunay(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for flips in [1, 3, 10, 40] {
            let f = t.lawson_flips(flips, &mut rng).unwrap();
            assert_eq!(f.edge_count(), t.edge_count());
            assert_eq!(f.triangles().len(), t.triangles().len());
            assert!(crossing_free(&f));
            assert!(f.covers_all_points());
        }
    }
}
