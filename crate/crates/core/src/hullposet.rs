//! The poset H(n) of hull configurations on `n` labelled points.
//!
//! An element of rank `k >= 3` is a cyclic order of the labels together
//! with the `k` labels that are corners; an element of rank 2 is a linear
//! order up to reversal. Covers are elementary collapses: a corner becomes
//! a side-internal point.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::configuration::HullConfig;
use crate::error::{Error, Result};
use crate::lattice::bits;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HullElement {
    /// Cyclic order rotated so label 0 comes first, and the corner labels.
    Polygon { order: Vec<usize>, corners: u64 },
    /// Linear order, the lexicographically smaller of the two directions.
    Linear { order: Vec<usize> },
}

fn check_labels(order: &[usize]) -> Result<()> {
    let n = order.len();
    let mut seen = vec![false; n];
    for &l in order {
        if l >= n || seen[l] {
            return Err(Error::InvalidHullElement(format!(
                "{order:?} is not a permutation of 0..{n}"
            )));
        }
        seen[l] = true;
    }
    if n > 64 {
        return Err(Error::InvalidHullElement("at most 64 labels".into()));
    }
    Ok(())
}

impl HullElement {
    pub fn polygon(order: Vec<usize>, corners: &[usize]) -> Result<Self> {
        check_labels(&order)?;
        let mut mask = 0u64;
        for &c in corners {
            if c >= order.len() {
                return Err(Error::InvalidHullElement(format!(
                    "corner {c} out of range"
                )));
            }
            mask |= 1 << c;
        }
        if mask.count_ones() < 3 {
            return Err(Error::InvalidHullElement(
                "a polygon needs at least 3 corners".into(),
            ));
        }
        Ok(Self::polygon_unchecked(order, mask))
    }

    fn polygon_unchecked(order: Vec<usize>, corners: u64) -> Self {
        let zero = order.iter().position(|&l| l == 0).unwrap_or(0);
        let n = order.len();
        let order = (0..n).map(|t| order[(zero + t) % n]).collect();
        HullElement::Polygon { order, corners }
    }

    pub fn linear(order: Vec<usize>) -> Result<Self> {
        check_labels(&order)?;
        if order.len() < 2 {
            return Err(Error::InvalidHullElement(
                "a segment needs at least 2 points".into(),
            ));
        }
        Ok(Self::linear_unchecked(order))
    }

    fn linear_unchecked(order: Vec<usize>) -> Self {
        let rev: Vec<usize> = order.iter().rev().copied().collect();
        HullElement::Linear {
            order: if rev < order { rev } else { order },
        }
    }

    /// The element represented by a shape, with point indices as labels.
    pub fn from_config(config: &HullConfig) -> Self {
        let order: Vec<usize> = (0..config.n()).collect();
        if config.is_segment() {
            HullElement::Linear { order }
        } else {
            let corners = config.corners().iter().fold(0u64, |m, &c| m | 1 << c);
            HullElement::Polygon { order, corners }
        }
    }

    /// Shape representative and `labels[index] = label`.
    pub fn to_config(&self) -> (HullConfig, Vec<usize>) {
        match self {
            HullElement::Linear { order } => (
                HullConfig::segment(order.len()).expect("n >= 2"),
                order.clone(),
            ),
            HullElement::Polygon { order, corners } => {
                let n = order.len();
                let first = order
                    .iter()
                    .position(|&l| corners >> l & 1 == 1)
                    .expect("has corners");
                let labels: Vec<usize> = (0..n).map(|t| order[(first + t) % n]).collect();
                let pos: Vec<usize> = (0..n).filter(|&t| corners >> labels[t] & 1 == 1).collect();
                let k = pos.len();
                let shape = (0..k)
                    .map(|s| {
                        let next = if s + 1 == k { n } else { pos[s + 1] };
                        next - pos[s] - 1
                    })
                    .collect();
                (HullConfig::polygon(shape).expect("k >= 3"), labels)
            }
        }
    }

    pub fn n(&self) -> usize {
        match self {
            HullElement::Polygon { order, .. } | HullElement::Linear { order } => order.len(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            HullElement::Polygon { corners, .. } => corners.count_ones() as usize,
            HullElement::Linear { .. } => 2,
        }
    }

    pub fn is_minimal(&self) -> bool {
        matches!(self, HullElement::Linear { .. })
    }

    pub fn is_maximal(&self) -> bool {
        self.rank() == self.n()
    }

    /// Labels that are corners (endpoints for a segment).
    pub fn corner_labels(&self) -> Vec<usize> {
        match self {
            HullElement::Polygon { corners, .. } => bits(*corners).collect(),
            HullElement::Linear { order } => {
                let mut v = vec![order[0], order[order.len() - 1]];
                v.sort_unstable();
                v
            }
        }
    }

    /// Parses `cyclic:0,1,2,3|corners:0,2,3` or `linear:0,1,2,3`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidHullElement(format!("cannot parse {text:?}"));
        let list = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect()
        };
        if let Some(rest) = text.strip_prefix("linear:") {
            return HullElement::linear(list(rest)?);
        }
        let rest = text.strip_prefix("cyclic:").ok_or_else(bad)?;
        let (order, corners) = rest.split_once("|corners:").ok_or_else(bad)?;
        HullElement::polygon(list(order)?, &list(corners)?)
    }
}

impl fmt::Display for HullElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &mut dyn Iterator<Item = usize>| {
            v.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        match self {
            HullElement::Linear { order } => {
                write!(f, "linear:{}", join(&mut order.iter().copied()))
            }
            HullElement::Polygon { order, corners } => write!(
                f,
                "cyclic:{}|corners:{}",
                join(&mut order.iter().copied()),
                join(&mut bits(*corners))
            ),
        }
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

/// All elements of rank `k` in H(n).
pub fn enumerate_hull(n: usize, k: usize) -> Result<Vec<HullElement>> {
    if n < 2 || k < 2 || k > n || n > 12 {
        return Err(Error::HullPrecondition(format!(
            "rank {k} out of range for n = {n}"
        )));
    }
    let rest: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    if k == 2 {
        for p in permutations(&(0..n).collect::<Vec<_>>()) {
            let rev: Vec<usize> = p.iter().rev().copied().collect();
            if p < rev {
                out.push(HullElement::Linear { order: p });
            }
        }
        if n == 2 {
            out.truncate(1);
        }
        return Ok(out);
    }
    let subsets = subsets_of_size(n, k);
    for mut p in permutations(&rest) {
        p.insert(0, 0);
        for &corners in &subsets {
            out.push(HullElement::Polygon {
                order: p.clone(),
                corners,
            });
        }
    }
    Ok(out)
}

/// All interleavings of `a` and `b` preserving the order within each.
fn shuffles(a: &[usize], b: &[usize]) -> Vec<Vec<usize>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for mut s in shuffles(&a[1..], b) {
        s.insert(0, a[0]);
        out.push(s);
    }
    for mut s in shuffles(a, &b[1..]) {
        s.insert(0, b[0]);
        out.push(s);
    }
    out
}

/// Elements covered by `element`.
///
/// From rank 4 and up a corner is demoted in place. From a triangle, the
/// demoted corner `b` lands between the other two corners `a` and `c`: the
/// points of sides `ab` and `bc` keep their order around `b`, and the points
/// of the opposite side `ca` may fall anywhere between `a` and `c`, so every
/// interleaving is a distinct segment configuration below the triangle.
pub fn elementary_collapses(element: &HullElement) -> Result<Vec<HullElement>> {
    let (order, corners) = match element {
        HullElement::Linear { .. } => {
            return Err(Error::HullPrecondition(
                "rank-2 elements have no collapses".into(),
            ));
        }
        HullElement::Polygon { order, corners } => (order, *corners),
    };
    let mut out = Vec::new();
    if corners.count_ones() >= 4 {
        for c in bits(corners) {
            out.push(HullElement::Polygon {
                order: order.clone(),
                corners: corners & !(1 << c),
            });
        }
        return Ok(out);
    }
    let n = order.len();
    let pos: Vec<usize> = (0..n).filter(|&t| corners >> order[t] & 1 == 1).collect();
    let side = |s: usize| -> Vec<usize> {
        let start = pos[s];
        let end = if s == 2 { pos[0] + n } else { pos[s + 1] };
        (start + 1..end).map(|t| order[t % n]).collect()
    };
    let sides = [side(0), side(1), side(2)];
    for b in 0..3 {
        let a = (b + 2) % 3;
        let c = (b + 1) % 3;
        let mut inner = sides[a].clone();
        inner.push(order[pos[b]]);
        inner.extend(&sides[b]);
        let across: Vec<usize> = sides[c].iter().rev().copied().collect();
        for mid in shuffles(&inner, &across) {
            let mut line = vec![order[pos[a]]];
            line.extend(mid);
            line.push(order[pos[c]]);
            out.push(HullElement::linear_unchecked(line));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Elements covering `element` (the inverse of [`elementary_collapses`]).
pub fn elementary_lifts(element: &HullElement) -> Vec<HullElement> {
    let mut out = Vec::new();
    match element {
        HullElement::Polygon { order, corners } => {
            for l in order {
                if corners >> l & 1 == 0 {
                    out.push(HullElement::Polygon {
                        order: order.clone(),
                        corners: corners | 1 << l,
                    });
                }
            }
        }
        HullElement::Linear { order } => {
            let n = order.len();
            if n < 3 {
                return out;
            }
            let rev: Vec<usize> = order.iter().rev().copied().collect();
            for line in [order.clone(), rev] {
                let (a, c) = (line[0], line[n - 1]);
                for t in 1..n - 1 {
                    let before = &line[1..t];
                    let after = &line[t + 1..n - 1];
                    let free = before.len() + after.len();
                    for choice in 0u64..1 << free {
                        // bit set: the point stays on the side opposite the apex
                        let stays = |i: usize| choice >> i & 1 == 1;
                        let mut cyc = vec![a];
                        cyc.extend(
                            before
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| !stays(i))
                                .map(|(_, &p)| p),
                        );
                        cyc.push(line[t]);
                        cyc.extend(
                            after
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| !stays(before.len() + i))
                                .map(|(_, &p)| p),
                        );
                        cyc.push(c);
                        let base: Vec<usize> = before
                            .iter()
                            .chain(after)
                            .enumerate()
                            .filter(|&(i, _)| stays(i))
                            .map(|(_, &p)| p)
                            .collect();
                        cyc.extend(base.iter().rev());
                        let corners = 1u64 << a | 1 << c | 1 << line[t];
                        out.push(HullElement::polygon_unchecked(cyc, corners));
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `a <= b`: `a` is reachable from `b` by elementary collapses.
pub fn leq(a: &HullElement, b: &HullElement) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::HullPrecondition("label sets differ".into()));
    }
    if a == b {
        return Ok(true);
    }
    if a.rank() >= b.rank() {
        return Ok(false);
    }
    let mut seen = HashSet::from([b.clone()]);
    let mut queue = VecDeque::from([b.clone()]);
    while let Some(x) = queue.pop_front() {
        if x.rank() <= a.rank() {
            continue;
        }
        for y in elementary_collapses(&x)? {
            if &y == a {
                return Ok(true);
            }
            if y.rank() > a.rank() && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(false)
}

/// For a minimal element, the number of maximal elements above it; for a
/// maximal element, the number of minimal elements below it.
pub fn count_extremes(element: &HullElement) -> Result<usize> {
    let n = element.n();
    if element.is_minimal() {
        let mut seen = HashSet::from([element.clone()]);
        let mut queue = VecDeque::from([element.clone()]);
        let mut count = 0;
        while let Some(x) = queue.pop_front() {
            if x.rank() == n {
                count += 1;
                continue;
            }
            for y in elementary_lifts(&x) {
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(count)
    } else if element.rank() == n {
        let mut seen = HashSet::from([element.clone()]);
        let mut queue = VecDeque::from([element.clone()]);
        let mut count = 0;
        while let Some(x) = queue.pop_front() {
            if x.is_minimal() {
                count += 1;
                continue;
            }
            for y in elementary_collapses(&x)? {
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(count)
    } else {
        Err(Error::HullPrecondition(format!(
            "{element} is neither minimal nor maximal"
        )))
    }
}

/// Whether `[a, b]` is a Boolean lattice of height `rk(b) - rk(a)`.
pub fn interval_is_boolean(a: &HullElement, b: &HullElement) -> Result<bool> {
    if !leq(a, b)? {
        return Err(Error::NotComparable);
    }
    // downward closure of b above rank(a), then keep elements above a
    let mut down = vec![b.clone()];
    let mut seen = HashSet::from([b.clone()]);
    let mut i = 0;
    while i < down.len() {
        let x = down[i].clone();
        i += 1;
        if x.rank() > a.rank() {
            for y in elementary_collapses(&x)? {
                if y.rank() >= a.rank() && seen.insert(y.clone()) {
                    down.push(y);
                }
            }
        }
    }
    let mut interval = Vec::new();
    for x in down {
        if leq(a, &x)? {
            interval.push(x);
        }
    }
    let mut rel = vec![vec![false; interval.len()]; interval.len()];
    for (i, x) in interval.iter().enumerate() {
        for (j, y) in interval.iter().enumerate() {
            rel[i][j] = leq(x, y)?;
        }
    }
    let ranks: Vec<usize> = interval.iter().map(|x| x.rank() - a.rank()).collect();
    Ok(is_boolean_order(&rel, &ranks, b.rank() - a.rank()))
}

/// `rel[i][j]` is `i <= j`; checks order isomorphism with the subsets of a
/// `d`-set by mapping every element to the set of atoms below it.
pub(crate) fn is_boolean_order(rel: &[Vec<bool>], ranks: &[usize], d: usize) -> bool {
    let m = rel.len();
    if d >= 20 || m != 1usize << d {
        return false;
    }
    let atoms: Vec<usize> = (0..m).filter(|&i| ranks[i] == 1).collect();
    if atoms.len() != d {
        return false;
    }
    let sig: Vec<u32> = (0..m)
        .map(|i| {
            atoms
                .iter()
                .enumerate()
                .fold(0u32, |s, (t, &a)| if rel[a][i] { s | 1 << t } else { s })
        })
        .collect();
    let mut seen = vec![false; m];
    for i in 0..m {
        if sig[i].count_ones() as usize != ranks[i] || seen[sig[i] as usize] {
            return false;
        }
        seen[sig[i] as usize] = true;
    }
    (0..m).all(|i| (0..m).all(|j| rel[i][j] == (sig[i] & !sig[j] == 0)))
}

/// H(n) held in memory with covers in both directions.
#[derive(Debug, Clone)]
pub struct HullPoset {
    n: usize,
    elements: Vec<HullElement>,
    index: HashMap<HullElement, usize>,
    down: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
}

impl HullPoset {
    pub fn build(n: usize) -> Result<Self> {
        if !(2..=8).contains(&n) {
            return Err(Error::BudgetExceeded(format!(
                "H(n) is built for 2 <= n <= 8, got {n}"
            )));
        }
        let mut elements = Vec::new();
        for k in 2..=n {
            elements.extend(enumerate_hull(n, k)?);
        }
        let index: HashMap<HullElement, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mut down = vec![Vec::new(); elements.len()];
        let mut up = vec![Vec::new(); elements.len()];
        for (i, e) in elements.iter().enumerate() {
            if e.is_minimal() {
                continue;
            }
            for c in elementary_collapses(e)? {
                let j = *index.get(&c).ok_or_else(|| {
                    Error::InvalidHullElement(format!("collapse {c} not enumerated"))
                })?;
                down[i].push(j);
                up[j].push(i);
            }
        }
        Ok(HullPoset {
            n,
            elements,
            index,
            down,
            up,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[HullElement] {
        &self.elements
    }

    pub fn index_of(&self, e: &HullElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn rank_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n + 1];
        for e in &self.elements {
            counts[e.rank()] += 1;
        }
        counts
    }

    /// Elements reachable from `i` along covers (`down = true` for collapses).
    pub fn closure(&self, i: usize, down: bool, rank_bound: usize) -> Vec<usize> {
        let mut seen = HashSet::from([i]);
        let mut out = vec![i];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            k += 1;
            let next = if down { &self.down[x] } else { &self.up[x] };
            for &y in next {
                let r = self.elements[y].rank();
                let ok = if down {
                    r >= rank_bound
                } else {
                    r <= rank_bound
                };
                if ok && seen.insert(y) {
                    out.push(y);
                }
            }
        }
        out
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        let ra = self.elements[a].rank();
        a == b || (ra < self.elements[b].rank() && self.closure(b, true, ra).contains(&a))
    }

    /// Elements of `[a, b]`; empty when `a` is not below `b`.
    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        let ra = self.elements[a].rank();
        let rb = self.elements[b].rank();
        let below: HashSet<usize> = self.closure(b, true, ra).into_iter().collect();
        let mut out: Vec<usize> = self
            .closure(a, false, rb)
            .into_iter()
            .filter(|x| below.contains(x))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn interval_is_boolean(&self, a: usize, b: usize) -> bool {
        let iv = self.interval(a, b);
        if iv.is_empty() {
            return false;
        }
        let ra = self.elements[a].rank();
        let rb = self.elements[b].rank();
        let rel: Vec<Vec<bool>> = iv
            .iter()
            .map(|&x| {
                let up: HashSet<usize> = self.closure(x, false, rb).into_iter().collect();
                iv.iter().map(|y| up.contains(y)).collect()
            })
            .collect();
        let ranks: Vec<usize> = iv.iter().map(|&x| self.elements[x].rank() - ra).collect();
        is_boolean_order(&rel, &ranks, rb - ra)
    }

    /// Maximal elements above a minimal one, or minimal elements below a maximal one.
    pub fn count_extremes(&self, i: usize) -> Option<usize> {
        let e = &self.elements[i];
        if e.is_minimal() {
            Some(
                self.closure(i, false, self.n)
                    .iter()
                    .filter(|&&x| self.elements[x].rank() == self.n)
                    .count(),
            )
        } else if e.rank() == self.n {
            Some(
                self.closure(i, true, 2)
                    .iter()
                    .filter(|&&x| self.elements[x].is_minimal())
                    .count(),
            )
        } else {
            None
        }
    }

    /// Hasse diagram as JSON: node strings and collapse covers `[upper, lower]`.
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<[usize; 2]> = self
            .down
            .iter()
            .enumerate()
            .flat_map(|(i, ds)| ds.iter().map(move |&j| [i, j]))
            .collect();
        serde_json::json!({
            "n": self.n,
            "nodes": self.elements.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "edges": edges,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph \"H({})\" {{\n  rankdir=BT;\n", self.n);
        for (i, e) in self.elements.iter().enumerate() {
            out.push_str(&format!("  h{i} [label=\"{e}\"];\n"));
        }
        for (i, ds) in self.down.iter().enumerate() {
            for &j in ds {
                out.push_str(&format!("  h{j} -> h{i};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn rank_counts_n4() {
        assert_eq!(enumerate_hull(4, 3).unwrap().len(), 24);
        assert_eq!(enumerate_hull(4, 4).unwrap().len(), 6);
        assert_eq!(enumerate_hull(4, 2).unwrap().len(), 12);
        assert!(enumerate_hull(4, 5).is_err());
        assert!(enumerate_hull(4, 1).is_err());
    }

    #[test]
    fn rank_counts_formula() {
        for n in 3..=6 {
            for k in 3..=n {
                assert_eq!(
                    enumerate_hull(n, k).unwrap().len(),
                    factorial(n - 1) * binom(n, k)
                );
            }
            assert_eq!(enumerate_hull(n, 2).unwrap().len(), factorial(n) / 2);
        }
    }

    #[test]
    fn collapses_of_a_square() {
        let sq = HullElement::polygon(vec![0, 1, 2, 3], &[0, 1, 2, 3]).unwrap();
        let c = elementary_collapses(&sq).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.contains(&HullElement::polygon(vec![0, 1, 2, 3], &[0, 2, 3]).unwrap()));
        assert!(elementary_collapses(&HullElement::linear(vec![0, 1, 2]).unwrap()).is_err());
    }

    #[test]
    fn triangle_with_one_side_point_flattens_four_ways() {
        // a=0, x=1 on side 0->2, corners 0,2,3
        let t = HullElement::polygon(vec![0, 1, 2, 3], &[0, 2, 3]).unwrap();
        let got: Vec<String> = elementary_collapses(&t)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(
            got,
            [
                "linear:0,1,2,3",
                "linear:0,1,3,2",
                "linear:0,3,1,2",
                "linear:2,1,0,3"
            ]
        );
    }

    #[test]
    fn lifts_invert_collapses() {
        for n in 3..=6 {
            let all: Vec<HullElement> = (2..=n)
                .flat_map(|k| enumerate_hull(n, k).unwrap())
                .collect();
            for x in &all {
                for y in elementary_lifts(x) {
                    assert!(elementary_collapses(&y).unwrap().contains(x), "{y} !> {x}");
                }
                if !x.is_minimal() {
                    for y in elementary_collapses(x).unwrap() {
                        assert!(elementary_lifts(&y).contains(x), "{y} lift misses {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn leq_examples() {
        let max = HullElement::polygon(vec![0, 1, 2, 3], &[0, 1, 2, 3]).unwrap();
        let min = HullElement::linear(vec![0, 1, 2, 3]).unwrap();
        assert!(leq(&max, &max).unwrap());
        assert!(!leq(&max, &min).unwrap());
        assert!(leq(&min, &max).unwrap());
        assert!(leq(&HullElement::linear(vec![0, 1, 2]).unwrap(), &max).is_err());
    }

    #[test]
    fn extremes_small_n() {
        let min4 = HullElement::linear(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(count_extremes(&min4).unwrap(), 4);
        let max4 = HullElement::polygon(vec![0, 1, 2, 3], &[0, 1, 2, 3]).unwrap();
        assert_eq!(count_extremes(&max4).unwrap(), 8);
        let min5 = HullElement::linear(vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(count_extremes(&min5).unwrap(), 8);
        let mid = HullElement::polygon(vec![0, 1, 2, 3], &[0, 1, 2]).unwrap();
        assert!(count_extremes(&mid).is_err());
    }

    #[test]
    fn boolean_intervals() {
        let max = HullElement::polygon(vec![0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]).unwrap();
        assert!(interval_is_boolean(&max, &max).unwrap());
        let cov = elementary_collapses(&max).unwrap()[0].clone();
        assert!(interval_is_boolean(&cov, &max).unwrap());
        let min = HullElement::linear(vec![0, 1, 2, 3, 4]).unwrap();
        assert!(interval_is_boolean(&min, &max).unwrap());
        assert!(interval_is_boolean(&max, &min).is_err());
    }

    #[test]
    fn config_round_trip() {
        for s in ["[0;3;2;1;2]", "[1;1;1]", "segment:5", "[0;0;0]"] {
            let c = HullConfig::parse(s).unwrap();
            let e = HullElement::from_config(&c);
            let (back, labels) = e.to_config();
            assert_eq!(back, c);
            assert_eq!(labels, (0..c.n()).collect::<Vec<_>>());
            assert_eq!(HullElement::parse(&e.to_string()).unwrap(), e);
        }
        let e = HullElement::parse("cyclic:0,1,2,3,4|corners:1,3,4").unwrap();
        let (c, labels) = e.to_config();
        assert_eq!(c.to_string(), "[1;0;1]");
        assert_eq!(labels, vec![1, 2, 3, 4, 0]);
    }

    #[test]
    fn poset_matches_free_functions() {
        let h = HullPoset::build(4).unwrap();
        assert_eq!(h.rank_counts(), vec![0, 0, 12, 24, 6]);
        for (i, e) in h.elements().iter().enumerate() {
            if let Some(c) = h.count_extremes(i) {
                assert_eq!(c, count_extremes(e).unwrap());
            }
        }
    }
}
