//! Hull configurations stored combinatorially.
//!
//! A hull configuration is either `n` points on a line segment or the points
//! on the boundary of a convex polygon. Up to deformation that preserves
//! collinearities, a polygon configuration is determined by its *shape*: the
//! number of side-internal points `c_1, ..., c_k` on each of its `k` sides,
//! read counterclockwise. Points are indexed `0..n` counterclockwise starting
//! at the first corner (left to right for segments).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::oracle::ExactPoint;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConfigKind {
    Segment,
    Polygon(Vec<usize>),
}

/// A convexity class of hull configurations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HullConfig {
    kind: ConfigKind,
    n: usize,
    /// Linear index of each corner `z_{i,0}`; for segments the two endpoints.
    corners: Vec<usize>,
}

/// A point addressed as `z_{side,offset}` with `side` counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointRef {
    pub side: usize,
    pub offset: usize,
}

/// A hull configuration induced on a contiguous boundary arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubConfig {
    pub config: HullConfig,
    /// `points[new] = old`: the index in the parent configuration of each
    /// point of the sub-configuration.
    pub points: Vec<usize>,
}

impl SubConfig {
    /// Index in the sub-configuration of a parent index, if present.
    pub fn local(&self, old: usize) -> Option<usize> {
        self.points.iter().position(|&p| p == old)
    }
}

impl HullConfig {
    pub fn segment(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        Ok(HullConfig {
            kind: ConfigKind::Segment,
            n,
            corners: vec![0, n - 1],
        })
    }

    pub fn polygon(shape: Vec<usize>) -> Result<Self> {
        let k = shape.len();
        if k < 3 {
            return Err(Error::TooFewSides(k));
        }
        let mut corners = Vec::with_capacity(k);
        let mut idx = 0;
        for &c in &shape {
            corners.push(idx);
            idx += c + 1;
        }
        Ok(HullConfig {
            kind: ConfigKind::Polygon(shape),
            n: idx,
            corners,
        })
    }

    /// Parses `segment:<n>` or `[c1;c2;...;ck]`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::MalformedShape(text.to_string());
        let digits = |s: &str| -> Result<usize> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            s.parse().map_err(|_| bad())
        };
        if let Some(rest) = text.strip_prefix("segment:") {
            return HullConfig::segment(digits(rest)?);
        }
        let inner = text
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let shape = inner.split(';').map(digits).collect::<Result<Vec<_>>>()?;
        HullConfig::polygon(shape)
    }

    pub fn kind(&self) -> &ConfigKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_segment(&self) -> bool {
        matches!(self.kind, ConfigKind::Segment)
    }

    pub fn shape(&self) -> Option<&[usize]> {
        match &self.kind {
            ConfigKind::Segment => None,
            ConfigKind::Polygon(s) => Some(s),
        }
    }

    /// Rank in the hull poset: 2 for a segment, the corner count otherwise.
    pub fn rank(&self) -> usize {
        match &self.kind {
            ConfigKind::Segment => 2,
            ConfigKind::Polygon(s) => s.len(),
        }
    }

    /// Number of sides (a segment counts as a single side).
    pub fn num_sides(&self) -> usize {
        match &self.kind {
            ConfigKind::Segment => 1,
            ConfigKind::Polygon(s) => s.len(),
        }
    }

    /// Corner indices; the two endpoints for a segment.
    pub fn corners(&self) -> &[usize] {
        &self.corners
    }

    pub fn is_corner(&self, index: usize) -> bool {
        self.corners.contains(&index)
    }

    /// Multiplicity of a point: 1 for side-internal points, 0 otherwise.
    pub fn multiplicity(&self, index: usize) -> usize {
        usize::from(!self.is_corner(index))
    }

    pub fn point_index(&self, side: usize, offset: usize) -> Result<usize> {
        let out = Error::PointOutOfRange { side, offset };
        match &self.kind {
            ConfigKind::Segment => {
                if side == 1 && offset < self.n {
                    Ok(offset)
                } else {
                    Err(out)
                }
            }
            ConfigKind::Polygon(shape) => {
                if side == 0 || side > shape.len() || offset > shape[side - 1] {
                    return Err(out);
                }
                Ok(self.corners[side - 1] + offset)
            }
        }
    }

    pub fn point_ref(&self, index: usize) -> Result<PointRef> {
        if index >= self.n {
            return Err(Error::IndexOutOfRange { index, n: self.n });
        }
        match &self.kind {
            ConfigKind::Segment => Ok(PointRef {
                side: 1,
                offset: index,
            }),
            ConfigKind::Polygon(_) => {
                let s = self.corners.partition_point(|&c| c <= index) - 1;
                Ok(PointRef {
                    side: s + 1,
                    offset: index - self.corners[s],
                })
            }
        }
    }

    /// Points of side `s` (0-based) in their linear order along the side.
    pub fn side_points(&self, s: usize) -> Vec<usize> {
        match &self.kind {
            ConfigKind::Segment => (0..self.n).collect(),
            ConfigKind::Polygon(shape) => {
                let start = self.corners[s];
                (0..shape[s] + 2).map(|t| (start + t) % self.n).collect()
            }
        }
    }

    /// Position of `index` along side `s` (0-based), if it lies on that side.
    pub fn position_on_side(&self, s: usize, index: usize) -> Option<usize> {
        match &self.kind {
            ConfigKind::Segment => (index < self.n).then_some(index),
            ConfigKind::Polygon(shape) => {
                let pos = (index + self.n - self.corners[s]) % self.n;
                (pos < shape[s] + 2).then_some(pos)
            }
        }
    }

    /// A side (0-based) containing every given point, if there is one.
    pub fn common_side(&self, points: &[usize]) -> Option<usize> {
        (0..self.num_sides()).find(|&s| {
            points
                .iter()
                .all(|&p| self.position_on_side(s, p).is_some())
        })
    }

    /// True iff `x`, `y`, `z` lie on one side and `z` is strictly between
    /// `x` and `y` along it.
    pub fn strictly_between(&self, x: usize, y: usize, z: usize) -> bool {
        (0..self.num_sides()).any(|s| {
            match (
                self.position_on_side(s, x),
                self.position_on_side(s, y),
                self.position_on_side(s, z),
            ) {
                (Some(a), Some(b), Some(c)) => a.min(b) < c && c < a.max(b),
                _ => false,
            }
        })
    }

    /// The configuration with side `side` (1-based) renumbered as side 1,
    /// together with `map[old] = new`.
    pub fn rotated(&self, side: usize) -> Result<(HullConfig, Vec<usize>)> {
        let shape = match &self.kind {
            ConfigKind::Segment => {
                return Err(Error::PointOutOfRange { side, offset: 0 });
            }
            ConfigKind::Polygon(shape) => shape,
        };
        if side == 0 || side > shape.len() {
            return Err(Error::PointOutOfRange { side, offset: 0 });
        }
        let k = shape.len();
        let new_shape = (0..k).map(|t| shape[(t + side - 1) % k]).collect();
        let shift = self.corners[side - 1];
        let map = (0..self.n)
            .map(|old| (old + self.n - shift) % self.n)
            .collect();
        Ok((HullConfig::polygon(new_shape)?, map))
    }

    /// Representative of the shape up to cyclic shift: the lexicographically
    /// largest rotation. Segments are returned unchanged.
    pub fn canonical(&self) -> HullConfig {
        match &self.kind {
            ConfigKind::Segment => self.clone(),
            ConfigKind::Polygon(shape) => {
                HullConfig::polygon(canonical_rotation(shape)).expect("rotation of a valid shape")
            }
        }
    }

    /// Lowest-numbered blank side (1-based), if any.
    pub fn first_blank_side(&self) -> Option<usize> {
        self.shape()?.iter().position(|&c| c == 0).map(|s| s + 1)
    }

    /// Hull configuration induced on the counterclockwise arc `start..=end`.
    pub fn arc_subconfig(&self, start: usize, end: usize) -> Result<SubConfig> {
        let n = self.n;
        if start >= n || end >= n {
            return Err(Error::IndexOutOfRange {
                index: start.max(end),
                n,
            });
        }
        let points: Vec<usize> = if self.is_segment() {
            if end < start {
                return Err(Error::InvalidArc(format!(
                    "{start}..{end} runs backwards on a segment"
                )));
            }
            (start..=end).collect()
        } else {
            let len = (end + n - start) % n + 1;
            (0..len).map(|t| (start + t) % n).collect()
        };
        if points.len() < 2 {
            return Err(Error::InvalidArc("fewer than two points".into()));
        }
        if points.len() == n {
            return Err(Error::InvalidArc(
                "arc covers the whole configuration".into(),
            ));
        }
        Ok(self.induced(points))
    }

    /// Sub-configuration on an arc given as a point list in boundary order.
    /// The list must be a contiguous arc of at least two points.
    pub(crate) fn induced(&self, points: Vec<usize>) -> SubConfig {
        let m = points.len();
        if m == 2 || self.common_side(&points).is_some() {
            return SubConfig {
                config: HullConfig::segment(m).expect("m >= 2"),
                points,
            };
        }
        let corner_pos: Vec<usize> = (0..m)
            .filter(|&t| {
                let prev = points[(t + m - 1) % m];
                let next = points[(t + 1) % m];
                !self.strictly_between(prev, next, points[t])
            })
            .collect();
        let first = corner_pos[0];
        let k = corner_pos.len();
        let shape = (0..k)
            .map(|s| {
                let a = corner_pos[s];
                let b = corner_pos[(s + 1) % k];
                (b + m - a) % m - 1
            })
            .collect();
        let rotated = (0..m).map(|t| points[(first + t) % m]).collect();
        SubConfig {
            config: HullConfig::polygon(shape).expect("at least three corners"),
            points: rotated,
        }
    }

    /// Canonical exact realization.
    pub fn realize(&self) -> Vec<ExactPoint> {
        let k = self.corners.len() as i64;
        let params: Vec<BigRational> = (0..k)
            .map(|i| BigRational::from_integer(BigInt::from(k - 1 - 2 * i)))
            .collect();
        self.realize_with(&params)
    }

    /// Realization with the polygon's corners placed at circle parameters
    /// `params` (strictly decreasing, one per corner). Ignored for segments.
    pub fn realize_with(&self, params: &[BigRational]) -> Vec<ExactPoint> {
        match &self.kind {
            ConfigKind::Segment => (0..self.n)
                .map(|i| ExactPoint::from_ints(i as i64, 0))
                .collect(),
            ConfigKind::Polygon(shape) => {
                assert_eq!(params.len(), shape.len(), "one parameter per corner");
                let corners: Vec<ExactPoint> = params.iter().map(circle_point).collect();
                let k = shape.len();
                let mut out = Vec::with_capacity(self.n);
                for s in 0..k {
                    let a = &corners[s];
                    let b = &corners[(s + 1) % k];
                    let d = BigRational::from_integer(BigInt::from(shape[s] + 1));
                    for j in 0..=shape[s] {
                        let t = BigRational::from_integer(BigInt::from(j)) / &d;
                        out.push(a.lerp(b, &t));
                    }
                }
                out
            }
        }
    }
}

fn circle_point(t: &BigRational) -> ExactPoint {
    let one = BigRational::from_integer(BigInt::from(1));
    let two = BigRational::from_integer(BigInt::from(2));
    let t2 = t * t;
    let den = &t2 + &one;
    ExactPoint::new((&t2 - &one) / &den, (&two * t) / &den)
}

pub(crate) fn canonical_rotation(shape: &[usize]) -> Vec<usize> {
    let k = shape.len();
    (0..k)
        .map(|r| (0..k).map(|t| shape[(t + r) % k]).collect::<Vec<_>>())
        .max()
        .unwrap_or_default()
}

impl fmt::Display for HullConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ConfigKind::Segment => write!(f, "segment:{}", self.n),
            ConfigKind::Polygon(shape) => {
                write!(f, "[")?;
                for (i, c) in shape.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl FromStr for HullConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HullConfig::parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlankFilter {
    #[default]
    Any,
    WithBlankSide,
    WithoutBlankSide,
}

/// Selection for [`enumerate_shapes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeOptions {
    /// Restrict to a single polygon rank `k`.
    pub rank: Option<usize>,
    pub blank: BlankFilter,
    /// Keep one representative per cyclic-shift class.
    pub dedupe: bool,
    /// Include `segment:n` (only when `blank` is `Any` and no rank is set).
    pub segment: bool,
}

impl Default for ShapeOptions {
    fn default() -> Self {
        ShapeOptions {
            rank: None,
            blank: BlankFilter::Any,
            dedupe: false,
            segment: true,
        }
    }
}

/// All hull configurations on `n` points selected by `options`.
pub fn enumerate_shapes(n: usize, options: ShapeOptions) -> Result<Vec<HullConfig>> {
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let mut out = Vec::new();
    if options.segment && options.rank.is_none() && options.blank == BlankFilter::Any {
        out.push(HullConfig::segment(n)?);
    }
    let ranks: Vec<usize> = match options.rank {
        Some(k) => vec![k],
        None => (3..=n).collect(),
    };
    for k in ranks {
        if k < 3 || k > n {
            continue;
        }
        let mut shapes = Vec::new();
        compositions(n - k, k, &mut Vec::new(), &mut shapes);
        for shape in shapes {
            let blank = shape.contains(&0);
            let keep = match options.blank {
                BlankFilter::Any => true,
                BlankFilter::WithBlankSide => blank,
                BlankFilter::WithoutBlankSide => !blank,
            };
            if !keep || (options.dedupe && canonical_rotation(&shape) != shape) {
                continue;
            }
            out.push(HullConfig::polygon(shape)?);
        }
    }
    Ok(out)
}

/// Weak compositions of `total` into `parts` parts, lexicographically descending.
fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}
