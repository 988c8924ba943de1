//! Exact-geometry brute force.
//!
//! Everything here works on explicit rational coordinates and knows nothing
//! about shapes, sides or the combinatorial crossing rules used elsewhere in
//! the crate. It is the ground truth those rules are tested against.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl ExactPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        ExactPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        ExactPoint {
            x: BigRational::from_integer(BigInt::from(x)),
            y: BigRational::from_integer(BigInt::from(y)),
        }
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &ExactPoint, t: &BigRational) -> ExactPoint {
        ExactPoint {
            x: &self.x + (&other.x - &self.x) * t,
            y: &self.y + (&other.y - &self.y) * t,
        }
    }

    /// Approximate coordinates, for display only.
    pub fn to_f64(&self) -> (f64, f64) {
        (ratio_to_f64(&self.x), ratio_to_f64(&self.y))
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
    Collinear,
}

impl Orientation {
    fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::Counterclockwise => 1,
        }
    }
}

/// Sign of the cross product `(q - p) x (r - p)`.
pub fn orientation(p: &ExactPoint, q: &ExactPoint, r: &ExactPoint) -> Orientation {
    let cross = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    if cross.is_zero() {
        Orientation::Collinear
    } else if cross.is_positive() {
        Orientation::Counterclockwise
    } else {
        Orientation::Clockwise
    }
}

/// Whether `p` lies on the closed segment `[a, b]`.
fn on_segment(a: &ExactPoint, b: &ExactPoint, p: &ExactPoint) -> bool {
    orientation(a, b, p) == Orientation::Collinear
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// A fixed point set with every orientation and segment-membership
/// predicate precomputed, so repeated queries stay cheap.
#[derive(Debug, Clone)]
pub struct Geometry {
    points: Vec<ExactPoint>,
    orient: Vec<i8>,
    on_seg: Vec<bool>,
}

impl Geometry {
    pub fn new(points: Vec<ExactPoint>) -> Self {
        let n = points.len();
        let mut orient = vec![0i8; n * n * n];
        let mut on_seg = vec![false; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let idx = (i * n + j) * n + k;
                    orient[idx] = orientation(&points[i], &points[j], &points[k]).sign();
                    on_seg[idx] = on_segment(&points[i], &points[j], &points[k]);
                }
            }
        }
        Geometry {
            points,
            orient,
            on_seg,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ExactPoint] {
        &self.points
    }

    fn o(&self, i: usize, j: usize, k: usize) -> i8 {
        let n = self.points.len();
        self.orient[(i * n + j) * n + k]
    }

    /// Point `k` on the closed segment between points `i` and `j`.
    pub fn on_segment(&self, i: usize, j: usize, k: usize) -> bool {
        let n = self.points.len();
        self.on_seg[(i * n + j) * n + k]
    }

    pub fn orientation(&self, i: usize, j: usize, k: usize) -> Orientation {
        match self.o(i, j, k) {
            0 => Orientation::Collinear,
            1 => Orientation::Counterclockwise,
            _ => Orientation::Clockwise,
        }
    }

    /// Closed segments `[a, b]` and `[c, d]` meet.
    pub fn segments_intersect(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let o1 = self.o(a, b, c);
        let o2 = self.o(a, b, d);
        let o3 = self.o(c, d, a);
        let o4 = self.o(c, d, b);
        if o1 * o2 < 0 && o3 * o4 < 0 {
            return true;
        }
        self.on_segment(a, b, c)
            || self.on_segment(a, b, d)
            || self.on_segment(c, d, a)
            || self.on_segment(c, d, b)
    }

    /// Point `p` lies in the convex hull of `set` (Caratheodory: some point,
    /// segment or triangle of `set` contains it).
    pub fn point_in_hull(&self, p: usize, set: &[usize]) -> bool {
        if set.contains(&p) {
            return true;
        }
        for (x, &i) in set.iter().enumerate() {
            for (y, &j) in set.iter().enumerate().skip(x + 1) {
                if self.on_segment(i, j, p) {
                    return true;
                }
                for &k in &set[y + 1..] {
                    let o = self.o(i, j, k);
                    if o == 0 {
                        continue;
                    }
                    let inside = [self.o(i, j, p), self.o(j, k, p), self.o(k, i, p)]
                        .iter()
                        .all(|&s| s == 0 || s == o);
                    if inside {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Convex hulls of two index sets are disjoint (contact counts as meeting).
    pub fn hulls_disjoint(&self, a: &[usize], b: &[usize]) -> bool {
        if a.iter().any(|&p| self.point_in_hull(p, b))
            || b.iter().any(|&p| self.point_in_hull(p, a))
        {
            return false;
        }
        for (x, &a1) in a.iter().enumerate() {
            for &a2 in &a[x + 1..] {
                for (y, &b1) in b.iter().enumerate() {
                    for &b2 in &b[y + 1..] {
                        if self.segments_intersect(a1, a2, b1, b2) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Every pair of blocks has disjoint hulls.
    pub fn is_noncrossing(&self, blocks: &[Vec<usize>]) -> bool {
        blocks
            .iter()
            .enumerate()
            .all(|(i, a)| blocks[i + 1..].iter().all(|b| self.hulls_disjoint(a, b)))
    }
}

/// Exact test that `Conv(a)` and `Conv(b)` do not meet.
pub fn hulls_disjoint(a: &[ExactPoint], b: &[ExactPoint]) -> bool {
    let pts: Vec<ExactPoint> = a.iter().chain(b).cloned().collect();
    let g = Geometry::new(pts);
    let ia: Vec<usize> = (0..a.len()).collect();
    let ib: Vec<usize> = (a.len()..a.len() + b.len()).collect();
    g.hulls_disjoint(&ia, &ib)
}

/// Largest point count accepted by the Bell-number brute force.
pub const ORACLE_MAX_POINTS: usize = 10;

/// Partition verdict by pairwise hull disjointness.
pub fn nc_oracle(points: &[ExactPoint], blocks: &[Vec<usize>]) -> bool {
    Geometry::new(points.to_vec()).is_noncrossing(blocks)
}

/// All set partitions of `0..n` as block lists, in lexicographic order of
/// their restricted growth strings.
pub fn all_set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut rgs = vec![0usize; n];
    loop {
        let nblocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (p, &b) in rgs.iter().enumerate() {
            blocks[b].push(p);
        }
        out.push(blocks);
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Noncrossing partitions of the point set by filtering every set partition.
pub fn nc_lattice_oracle(points: &[ExactPoint]) -> Result<Vec<Vec<Vec<usize>>>> {
    if points.len() > ORACLE_MAX_POINTS {
        return Err(Error::BudgetExceeded(format!(
            "oracle enumeration limited to {ORACLE_MAX_POINTS} points, got {}",
            points.len()
        )));
    }
    let g = Geometry::new(points.to_vec());
    Ok(all_set_partitions(points.len())
        .into_iter()
        .filter(|blocks| g.is_noncrossing(blocks))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeVerdict {
    /// Acyclic, no edge through a third point, edges meet only at shared endpoints.
    pub noncrossing: bool,
    /// Literal definition over every subtree; `None` when not noncrossing.
    pub convex_geodesics: Option<bool>,
    /// Pairwise-path formulation; `None` when not noncrossing.
    pub convex_geodesics_pairwise: Option<bool>,
}

/// Largest edge count for the all-subtrees enumeration.
pub const ORACLE_MAX_EDGES: usize = 16;

/// Exact verdicts for a forest drawn with straight edges on `points`.
pub fn tree_oracle(points: &[ExactPoint], edges: &[(usize, usize)]) -> Result<TreeVerdict> {
    Geometry::new(points.to_vec()).tree_verdict(edges)
}

impl Geometry {
    /// Tree verdicts against the cached predicate tables.
    pub fn tree_verdict(&self, edges: &[(usize, usize)]) -> Result<TreeVerdict> {
        if edges.len() > ORACLE_MAX_EDGES {
            return Err(Error::BudgetExceeded(format!(
                "subtree enumeration limited to {ORACLE_MAX_EDGES} edges"
            )));
        }
        let n = self.len();
        if edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
            return Err(Error::MalformedEdges(format!("{edges:?}")));
        }
        let noncrossing = geometric_noncrossing(self, edges);
        if !noncrossing {
            return Ok(TreeVerdict {
                noncrossing,
                convex_geodesics: None,
                convex_geodesics_pairwise: None,
            });
        }
        Ok(TreeVerdict {
            noncrossing,
            convex_geodesics: Some(cg_all_subtrees(self, edges)),
            convex_geodesics_pairwise: Some(cg_pairwise(self, edges)),
        })
    }
}

fn geometric_noncrossing(g: &Geometry, edges: &[(usize, usize)]) -> bool {
    let n = g.len();
    for &(a, b) in edges {
        if (0..n).any(|p| p != a && p != b && g.on_segment(a, b, p)) {
            return false;
        }
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            let shared = a == c || a == d || b == c || b == d;
            if (a, b) == (c, d) || (a, b) == (d, c) {
                return false;
            }
            if !shared && g.segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    // acyclic
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

fn vertices_of(edges: &[(usize, usize)]) -> Vec<usize> {
    let mut v: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn is_connected(edges: &[(usize, usize)]) -> bool {
    let verts = vertices_of(edges);
    let Some(&start) = verts.first() else {
        return true;
    };
    let mut seen = vec![start];
    let mut frontier = vec![start];
    while let Some(v) = frontier.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen.contains(&y) {
                    seen.push(y);
                    frontier.push(y);
                }
            }
        }
    }
    seen.len() == verts.len()
}

fn hull_is_clean(g: &Geometry, verts: &[usize]) -> bool {
    (0..g.len()).all(|p| verts.contains(&p) || !g.point_in_hull(p, verts))
}

/// Every subtree's hull meets the point set only in its own vertices.
fn cg_all_subtrees(g: &Geometry, edges: &[(usize, usize)]) -> bool {
    let m = edges.len();
    for mask in 1u32..(1u32 << m) {
        let sub: Vec<(usize, usize)> = (0..m)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| edges[i])
            .collect();
        if !is_connected(&sub) {
            continue;
        }
        if !hull_is_clean(g, &vertices_of(&sub)) {
            return false;
        }
    }
    true
}

/// Every path between two vertices of a component has a clean hull.
fn cg_pairwise(g: &Geometry, edges: &[(usize, usize)]) -> bool {
    let n = g.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for x in 0..n {
        // BFS parents from x
        let mut parent = vec![usize::MAX; n];
        parent[x] = x;
        let mut queue = std::collections::VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        for y in x + 1..n {
            if parent[y] == usize::MAX {
                continue;
            }
            let mut path = vec![y];
            let mut v = y;
            while v != x {
                v = parent[v];
                path.push(v);
            }
            if !hull_is_clean(g, &path) {
                return false;
            }
        }
    }
    true
}

/// Orders points around a center by angle, starting from the positive x axis.
pub fn angular_cmp(center: &ExactPoint, a: &ExactPoint, b: &ExactPoint) -> Ordering {
    let half = |p: &ExactPoint| {
        let dy = &p.y - &center.y;
        let dx = &p.x - &center.x;
        if dy.is_positive() || (dy.is_zero() && dx.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a)
        .cmp(&half(b))
        .then_with(|| match orientation(center, a, b) {
            Orientation::Counterclockwise => Ordering::Less,
            Orientation::Clockwise => Ordering::Greater,
            Orientation::Collinear => {
                let da = (&a.x - &center.x).abs() + (&a.y - &center.y).abs();
                let db = (&b.x - &center.x).abs() + (&b.y - &center.y).abs();
                da.cmp(&db)
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::HullConfig;

    fn p(x: i64, y: i64) -> ExactPoint {
        ExactPoint::from_ints(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(
            orientation(&p(0, 0), &p(1, 0), &p(0, 1)),
            Orientation::Counterclockwise
        );
        assert_eq!(
            orientation(&p(0, 0), &p(1, 0), &p(2, 0)),
            Orientation::Collinear
        );
        assert_eq!(
            orientation(&p(0, 0), &p(0, 1), &p(1, 0)),
            Orientation::Clockwise
        );
    }

    #[test]
    fn hull_disjointness_degenerate_cases() {
        assert!(hulls_disjoint(&[p(0, 0)], &[p(1, 0)]));
        assert!(!hulls_disjoint(&[p(0, 0), p(2, 0)], &[p(1, 0)]));
        assert!(!hulls_disjoint(
            &[p(0, 0), p(2, 0), p(1, 2)],
            &[p(2, 0), p(4, 0), p(3, 2)]
        ));
        // crossing diagonals
        assert!(!hulls_disjoint(&[p(0, 0), p(2, 2)], &[p(2, 0), p(0, 2)]));
        // point strictly inside a triangle
        assert!(!hulls_disjoint(&[p(0, 0), p(4, 0), p(0, 4)], &[p(1, 1)]));
        // collinear but separated
        assert!(hulls_disjoint(&[p(0, 0), p(1, 0)], &[p(2, 0), p(3, 0)]));
        // parallel segments
        assert!(hulls_disjoint(&[p(0, 0), p(3, 0)], &[p(0, 1), p(3, 1)]));
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(all_set_partitions(n).len(), b);
        }
        let p3 = all_set_partitions(3);
        assert_eq!(p3[0], vec![vec![0, 1, 2]]);
        assert_eq!(p3[4], vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn lattice_oracle_small_counts() {
        let tri = HullConfig::parse("[0;0;0]").unwrap().realize();
        assert_eq!(nc_lattice_oracle(&tri).unwrap().len(), 5);
        let seg = HullConfig::parse("segment:4").unwrap().realize();
        assert_eq!(nc_lattice_oracle(&seg).unwrap().len(), 8);
        let mid = HullConfig::parse("[1;1;1]").unwrap().realize();
        assert_eq!(nc_lattice_oracle(&mid).unwrap().len(), 95);
        let big: Vec<ExactPoint> = (0..11).map(|i| p(i, 0)).collect();
        assert!(nc_lattice_oracle(&big).is_err());
    }

    #[test]
    fn tree_verdicts() {
        let seg = HullConfig::parse("segment:4").unwrap().realize();
        let v = tree_oracle(&seg, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(v.noncrossing);
        assert_eq!(v.convex_geodesics, Some(true));
        let sq = HullConfig::parse("[0;0;0;0]").unwrap().realize();
        let v = tree_oracle(&sq, &[(0, 2), (1, 3)]).unwrap();
        assert!(!v.noncrossing);
        assert_eq!(v.convex_geodesics, None);
        let mid = HullConfig::parse("[1;1;1]").unwrap().realize();
        let v = tree_oracle(&mid, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert_eq!(
            (
                v.noncrossing,
                v.convex_geodesics,
                v.convex_geodesics_pairwise
            ),
            (true, Some(false), Some(false))
        );
        // the path from 4 to 0 passes along the whole boundary except 5,
        // which sits on the segment between them
        let v = tree_oracle(&mid, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 5)]).unwrap();
        assert_eq!(
            (v.convex_geodesics, v.convex_geodesics_pairwise),
            (Some(false), Some(false))
        );
        let v = tree_oracle(&sq, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            (v.convex_geodesics, v.convex_geodesics_pairwise),
            (Some(true), Some(true))
        );
    }

    #[test]
    fn angular_order_is_counterclockwise() {
        let c = p(0, 0);
        let mut pts = vec![p(0, -1), p(-1, 0), p(1, 1), p(1, 0), p(2, 0)];
        pts.sort_by(|a, b| angular_cmp(&c, a, b));
        assert_eq!(pts, vec![p(1, 0), p(2, 0), p(1, 1), p(-1, 0), p(0, -1)]);
    }
}
