//! Exact geometric predicates over integer grid coordinates.
//!
//! Every predicate here is evaluated in `i128` without rounding. Coordinates
//! are expected to lie in `0..grid_size` with `grid_size <= 2^16`; under that
//! bound the widest intermediate (the in-circle determinant) stays below
//! 2^72, far inside the `i128` range.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible playing-area side length.
pub const MAX_GRID_SIZE: u32 = 1 << 16;

/// Default playing-area side length.
pub const DEFAULT_GRID_SIZE: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("points {0}, {1}, {2} are collinear; their circumcircle is undefined")]
    DegenerateTriangle(GridPoint, GridPoint, GridPoint),
    #[error("render metrics must satisfy 0 < lambda < 2*rho < delta (got rho={rho}, lambda={lambda}, delta={delta})")]
    InvalidMetrics { rho: i64, lambda: i64, delta: i64 },
    #[error("grid size {0} must be a power of two no larger than 65536")]
    InvalidGridSize(u32),
}

/// A point of the playing area in integer grid units.
///
/// Serialized as a two-element array `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Squared Euclidean distance, exact.
    pub fn dist2(self, other: GridPoint) -> i128 {
        let dx = (other.x - self.x) as i128;
        let dy = (other.y - self.y) as i128;
        dx * dx + dy * dy
    }

    pub fn in_grid(self, grid_size: u32) -> bool {
        let g = grid_size as i64;
        (0..g).contains(&self.x) && (0..g).contains(&self.y)
    }
}

impl From<(i64, i64)> for GridPoint {
    fn from((x, y): (i64, i64)) -> Self {
        Self { x, y }
    }
}

impl From<GridPoint> for (i64, i64) {
    fn from(p: GridPoint) -> Self {
        (p.x, p.y)
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn check_grid_size(grid_size: u32) -> Result<(), GeomError> {
    if grid_size.is_power_of_two() && grid_size <= MAX_GRID_SIZE {
        Ok(())
    } else {
        Err(GeomError::InvalidGridSize(grid_size))
    }
}

/// Turn direction of an ordered triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

impl Orientation {
    fn from_sign(v: i128) -> Self {
        match v.cmp(&0) {
            Ordering::Greater => Orientation::Left,
            Ordering::Less => Orientation::Right,
            Ordering::Equal => Orientation::Collinear,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }

    /// +1 for a left turn, -1 for a right turn, 0 otherwise.
    pub fn signum(self) -> i8 {
        match self {
            Orientation::Left => 1,
            Orientation::Right => -1,
            Orientation::Collinear => 0,
        }
    }
}

/// Where a query point lies relative to a circumcircle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CirclePosition {
    Inside,
    Outside,
    On,
}

/// Cross product `(a - o) x (b - o)`.
#[inline]
pub fn cross(o: GridPoint, a: GridPoint, b: GridPoint) -> i128 {
    let ax = (a.x - o.x) as i128;
    let ay = (a.y - o.y) as i128;
    let bx = (b.x - o.x) as i128;
    let by = (b.y - o.y) as i128;
    ax * by - ay * bx
}

#[inline]
fn dot(o: GridPoint, a: GridPoint, b: GridPoint) -> i128 {
    let ax = (a.x - o.x) as i128;
    let ay = (a.y - o.y) as i128;
    let bx = (b.x - o.x) as i128;
    let by = (b.y - o.y) as i128;
    ax * bx + ay * by
}

/// Orientation of the triple `a, b, c`: the sign of `(b - a) x (c - a)`.
#[inline]
pub fn orient(a: GridPoint, b: GridPoint, c: GridPoint) -> Orientation {
    Orientation::from_sign(cross(a, b, c))
}

/// `p` lies on the closed segment `ab`, given that the three are collinear.
#[inline]
fn within_box(a: GridPoint, b: GridPoint, p: GridPoint) -> bool {
    a.x.min(b.x) <= p.x && p.x <= a.x.max(b.x) && a.y.min(b.y) <= p.y && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share at least one point.
fn closed_segments_meet(a: GridPoint, b: GridPoint, c: GridPoint, d: GridPoint) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let proper = o1.signum() * o2.signum() < 0 && o3.signum() * o4.signum() < 0;
    proper
        || (o1 == Orientation::Collinear && within_box(a, b, c))
        || (o2 == Orientation::Collinear && within_box(a, b, d))
        || (o3 == Orientation::Collinear && within_box(c, d, a))
        || (o4 == Orientation::Collinear && within_box(c, d, b))
}

/// Whether the drawn edges `ab` and `cd` cross.
///
/// Closed-segment intersection, except that two edges meeting only in a
/// common endpoint do not cross. An endpoint lying in the interior of the
/// other segment, and collinear overlap, both count as a crossing.
pub fn segments_cross(a: GridPoint, b: GridPoint, c: GridPoint, d: GridPoint) -> bool {
    if !closed_segments_meet(a, b, c, d) {
        return false;
    }
    let shared: Vec<GridPoint> = [a, b].into_iter().filter(|p| *p == c || *p == d).collect();
    match shared.as_slice() {
        [p] => {
            let p = *p;
            let q1 = if a == p { b } else { a };
            let q2 = if c == p { d } else { c };
            // Only the shared endpoint is common unless both segments leave
            // it along the same ray.
            orient(p, q1, q2) == Orientation::Collinear && dot(p, q1, q2) > 0
        }
        _ => true,
    }
}

/// Position of `d` relative to the circumcircle of `a, b, c`, independent of
/// the orientation of the triangle.
pub fn in_circle(
    a: GridPoint,
    b: GridPoint,
    c: GridPoint,
    d: GridPoint,
) -> Result<CirclePosition, GeomError> {
    let o = orient(a, b, c);
    if o == Orientation::Collinear {
        return Err(GeomError::DegenerateTriangle(a, b, c));
    }
    let adx = (a.x - d.x) as i128;
    let ady = (a.y - d.y) as i128;
    let bdx = (b.x - d.x) as i128;
    let bdy = (b.y - d.y) as i128;
    let cdx = (c.x - d.x) as i128;
    let cdy = (c.y - d.y) as i128;
    let alift = adx * adx + ady * ady;
    let blift = bdx * bdx + bdy * bdy;
    let clift = cdx * cdx + cdy * cdy;
    let det = adx * (bdy * clift - cdy * blift) - ady * (bdx * clift - cdx * blift)
        + alift * (bdx * cdy - cdx * bdy);
    let det = if o == Orientation::Left { det } else { -det };
    Ok(match det.cmp(&0) {
        Ordering::Greater => CirclePosition::Inside,
        Ordering::Less => CirclePosition::Outside,
        Ordering::Equal => CirclePosition::On,
    })
}

/// The distance from `r` to the line through `p` and `q` is at least `delta`.
///
/// Compares `cross(q - p, r - p)^2 >= delta^2 * |q - p|^2` exactly. A
/// degenerate line (`p == q`) never satisfies the condition.
pub fn delta_ok(p: GridPoint, q: GridPoint, r: GridPoint, delta: i64) -> bool {
    if p == q {
        return false;
    }
    let c = cross(p, q, r);
    let d = delta as i128;
    c * c >= d * d * p.dist2(q)
}

/// Adding `candidate` to a set containing `p` and `q` would break
/// δ-general position for the triple `{p, q, candidate}`.
///
/// This is the membership test for the region bounded by the two outer
/// tangents of the δ-discs around `p` and `q` and the four tangents through
/// one point to the other's disc, phrased as three point-to-line checks.
pub fn forbidden_region_violated(
    p: GridPoint,
    q: GridPoint,
    candidate: GridPoint,
    delta: i64,
) -> bool {
    if candidate == p || candidate == q {
        return true;
    }
    !(delta_ok(p, q, candidate, delta)
        && delta_ok(p, candidate, q, delta)
        && delta_ok(q, candidate, p, delta))
}

/// Counter-clockwise convex hull, as indices into `points`, starting at the
/// lexicographically smallest point.
///
/// Points in the relative interior of a hull edge are reported as hull
/// points. If all points are collinear the result is every point in sorted
/// order.
pub fn convex_hull(points: &[GridPoint]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| (points[i].x, points[i].y));
    if points.len() < 3 {
        return order;
    }
    let first = points[order[0]];
    let last = points[order[order.len() - 1]];
    if order
        .iter()
        .all(|&i| orient(first, last, points[i]) == Orientation::Collinear)
    {
        return order;
    }

    let chain = |it: &mut dyn Iterator<Item = usize>| {
        let mut h: Vec<usize> = Vec::new();
        for i in it {
            while h.len() >= 2
                && orient(points[h[h.len() - 2]], points[h[h.len() - 1]], points[i])
                    == Orientation::Right
            {
                h.pop();
            }
            h.push(i);
        }
        h
    };
    let mut lower = chain(&mut order.iter().copied());
    let mut upper = chain(&mut order.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Number of points strictly inside the convex hull.
pub fn interior_count(points: &[GridPoint]) -> usize {
    points.len() - convex_hull(points).len()
}

/// Rendering parameters, all in grid units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderMetrics {
    /// Vertex disc radius.
    pub rho: i64,
    /// Edge width.
    pub lambda: i64,
    /// General-position separation.
    pub delta: i64,
}

impl RenderMetrics {
    pub fn new(rho: i64, lambda: i64, delta: i64) -> Result<Self, GeomError> {
        let m = Self { rho, lambda, delta };
        m.validate()?;
        Ok(m)
    }

    /// Metrics derived from a separation alone: `rho = delta / 3`,
    /// `lambda = delta / 4`.
    pub fn from_delta(delta: i64) -> Result<Self, GeomError> {
        Self::new(delta / 3, delta / 4, delta)
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        if self.lambda > 0 && self.lambda < 2 * self.rho && 2 * self.rho < self.delta {
            Ok(())
        } else {
            Err(GeomError::InvalidMetrics {
                rho: self.rho,
                lambda: self.lambda,
                delta: self.delta,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(p(0, 0), p(1, 0), p(0, 1)), Orientation::Left);
        assert_eq!(orient(p(0, 0), p(1, 1), p(2, 2)), Orientation::Collinear);
        assert_eq!(orient(p(0, 0), p(0, 1), p(1, 0)), Orientation::Right);
    }

    #[test]
    fn segments_cross_examples() {
        assert!(segments_cross(p(0, 0), p(2, 2), p(0, 2), p(2, 0)));
        assert!(!segments_cross(p(0, 0), p(1, 0), p(0, 0), p(0, 1)));
        assert!(segments_cross(p(0, 0), p(4, 0), p(2, 0), p(2, -2)));
    }

    #[test]
    fn shared_endpoint_with_overlap_crosses() {
        assert!(segments_cross(p(0, 0), p(4, 0), p(0, 0), p(2, 0)));
        // opposite rays from the shared point only touch there
        assert!(!segments_cross(p(0, 0), p(4, 0), p(0, 0), p(-2, 0)));
        // identical segments overlap entirely
        assert!(segments_cross(p(0, 0), p(4, 0), p(4, 0), p(0, 0)));
        // disjoint collinear
        assert!(!segments_cross(p(0, 0), p(1, 0), p(2, 0), p(3, 0)));
        assert!(segments_cross(p(0, 0), p(2, 0), p(1, 0), p(3, 0)));
    }

    #[test]
    fn in_circle_examples() {
        let (a, b, c) = (p(0, 0), p(4, 0), p(0, 4));
        assert_eq!(in_circle(a, b, c, p(1, 1)), Ok(CirclePosition::Inside));
        assert_eq!(in_circle(a, b, c, p(4, 4)), Ok(CirclePosition::On));
        assert_eq!(in_circle(a, b, c, p(10, 10)), Ok(CirclePosition::Outside));
        // clockwise input gives the same answers
        assert_eq!(in_circle(a, c, b, p(1, 1)), Ok(CirclePosition::Inside));
        assert_eq!(in_circle(a, c, b, p(10, 10)), Ok(CirclePosition::Outside));
    }

    #[test]
    fn in_circle_rejects_collinear() {
        assert!(matches!(
            in_circle(p(0, 0), p(1, 1), p(2, 2), p(5, 0)),
            Err(GeomError::DegenerateTriangle(..))
        ));
    }

    #[test]
    fn in_circle_extreme_coordinates() {
        let g = MAX_GRID_SIZE as i64 - 1;
        let (a, b, c) = (p(0, 0), p(g, 0), p(0, g));
        assert_eq!(in_circle(a, b, c, p(g, g)), Ok(CirclePosition::On));
        assert_eq!(in_circle(a, b, c, p(g - 1, g - 1)), Ok(CirclePosition::Inside));
        assert_eq!(in_circle(a, c, b, p(g, g)), Ok(CirclePosition::On));
    }

    #[test]
    fn delta_ok_examples() {
        assert!(delta_ok(p(0, 0), p(100, 0), p(50, 50), 10));
        assert!(!delta_ok(p(0, 0), p(100, 0), p(50, 5), 10));
        assert!(delta_ok(p(0, 0), p(100, 0), p(50, 10), 10));
    }

    #[test]
    fn forbidden_region_examples() {
        assert!(forbidden_region_violated(p(0, 0), p(100, 0), p(50, 5), 10));
        assert!(!forbidden_region_violated(p(0, 0), p(100, 0), p(50, 500), 10));
        // q sits within delta of the long line from p to the candidate
        assert!(forbidden_region_violated(p(0, 0), p(10, 0), p(5000, 40), 10));
        assert!(delta_ok(p(0, 0), p(10, 0), p(5000, 40), 10));
        assert!(!delta_ok(p(0, 0), p(5000, 40), p(10, 0), 10));
        assert!(forbidden_region_violated(p(0, 0), p(10, 0), p(0, 0), 1));
    }

    #[test]
    fn hull_examples() {
        let square = [p(0, 0), p(10, 0), p(10, 10), p(0, 10), p(5, 5)];
        let h = convex_hull(&square);
        assert_eq!(h, vec![0, 1, 2, 3]);
        assert_eq!(interior_count(&square), 1);

        let tri = [p(3, 1), p(0, 0), p(1, 5)];
        assert_eq!(convex_hull(&tri).len(), 3);

        let oct = [
            p(1, 0),
            p(2, 0),
            p(3, 1),
            p(3, 2),
            p(2, 3),
            p(1, 3),
            p(0, 2),
            p(0, 1),
        ];
        assert_eq!(convex_hull(&oct).len(), 8);
        assert_eq!(interior_count(&oct), 0);
    }

    #[test]
    fn hull_keeps_collinear_boundary_points() {
        let pts = [p(0, 0), p(2, 0), p(4, 0), p(4, 4), p(0, 4), p(0, 2), p(2, 2)];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 6);
        assert!(!h.contains(&6));
        assert_eq!(h[0], 0);
    }

    #[test]
    fn hull_degenerate_inputs() {
        assert_eq!(convex_hull(&[p(3, 3)]), vec![0]);
        assert_eq!(convex_hull(&[p(3, 3), p(1, 1)]), vec![1, 0]);
        assert_eq!(convex_hull(&[p(2, 2), p(0, 0), p(1, 1)]), vec![1, 2, 0]);
    }

    #[test]
    fn metrics_constraints() {
        assert!(RenderMetrics::new(10, 15, 25).is_ok());
        assert!(RenderMetrics::new(10, 20, 25).is_err());
        assert!(RenderMetrics::new(10, 15, 20).is_err());
        assert!(RenderMetrics::from_delta(1966).is_ok());
    }

    #[test]
    fn grid_size_check() {
        assert!(check_grid_size(65536).is_ok());
        assert!(check_grid_size(1024).is_ok());
        assert!(check_grid_size(1000).is_err());
        assert!(check_grid_size(1 << 17).is_err());
    }

    fn coord() -> impl Strategy<Value = i64> {
        0i64..(MAX_GRID_SIZE as i64)
    }

    fn point() -> impl Strategy<Value = GridPoint> {
        (coord(), coord()).prop_map(|(x, y)| GridPoint::new(x, y))
    }

    fn small_point() -> impl Strategy<Value = GridPoint> {
        (0i64..6, 0i64..6).prop_map(|(x, y)| GridPoint::new(x, y))
    }

    proptest! {
        #[test]
        fn orient_antisymmetric(a in point(), b in point(), c in point()) {
            prop_assert_eq!(orient(a, b, c), orient(a, c, b).reversed());
        }

        #[test]
        fn segments_cross_symmetric(
            a in small_point(), b in small_point(), c in small_point(), d in small_point()
        ) {
            prop_assume!(a != b && c != d);
            let r = segments_cross(a, b, c, d);
            prop_assert_eq!(r, segments_cross(c, d, a, b));
            prop_assert_eq!(r, segments_cross(b, a, c, d));
            prop_assert_eq!(r, segments_cross(a, b, d, c));
        }

        #[test]
        fn delta_zero_always_ok(p0 in point(), q in point(), r in point()) {
            prop_assume!(p0 != q);
            prop_assert!(delta_ok(p0, q, r, 0));
        }

        #[test]
        fn in_circle_cyclic_invariant(a in point(), b in point(), c in point(), d in point()) {
            prop_assume!(orient(a, b, c) != Orientation::Collinear);
            let r = in_circle(a, b, c, d).unwrap();
            prop_assert_eq!(r, in_circle(b, c, a, d).unwrap());
            prop_assert_eq!(r, in_circle(c, a, b, d).unwrap());
            prop_assert_eq!(r, in_circle(b, a, c, d).unwrap());
        }
    }
}
