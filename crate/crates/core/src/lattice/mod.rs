//! The lattice NC(P) of noncrossing partitions of a hull configuration.

mod partition;

pub(crate) use partition::bits;
pub use partition::{set_partitions, Partition, MAX_POINTS};

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::configuration::HullConfig;
use crate::error::{Error, Result};
use crate::hullposet::{self, HullElement};

/// Side membership of a configuration, precomputed for crossing tests.
#[derive(Debug, Clone)]
pub struct CrossingRule {
    n: usize,
    polygon: bool,
    /// Points of each side in linear order.
    sides: Vec<Vec<usize>>,
}

impl CrossingRule {
    pub fn new(config: &HullConfig) -> Self {
        CrossingRule {
            n: config.n(),
            polygon: !config.is_segment(),
            sides: (0..config.num_sides())
                .map(|s| config.side_points(s))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether the hulls of two disjoint point sets (as bit masks) meet:
    /// their points interleave around the boundary, or a point of one lies
    /// strictly between two same-side points of the other.
    pub fn masks_cross(&self, a: u64, b: u64) -> bool {
        if self.polygon && self.interleaved(a, b) {
            return true;
        }
        self.sides
            .iter()
            .any(|side| contained(side, a, b) || contained(side, b, a))
    }

    fn interleaved(&self, a: u64, b: u64) -> bool {
        let mut changes = 0;
        let mut first = 0u8;
        let mut last = 0u8;
        for p in 0..self.n {
            let label = if a >> p & 1 == 1 {
                1
            } else if b >> p & 1 == 1 {
                2
            } else {
                continue;
            };
            if first == 0 {
                first = label;
            } else if label != last {
                changes += 1;
            }
            last = label;
        }
        if first != 0 && first != last {
            changes += 1;
        }
        changes >= 4
    }

    /// Bit mask of the points of `set`'s sides' hulls, i.e. `Conv(set) ∩ P`.
    pub fn hull_points(&self, set: u64) -> u64 {
        let mut out = set;
        for side in &self.sides {
            let pos: Vec<usize> = side
                .iter()
                .enumerate()
                .filter(|&(_, &p)| set >> p & 1 == 1)
                .map(|(i, _)| i)
                .collect();
            if let (Some(&lo), Some(&hi)) = (pos.first(), pos.last()) {
                for &p in &side[lo..=hi] {
                    out |= 1 << p;
                }
            }
        }
        out
    }

    pub fn is_noncrossing_masks(&self, blocks: &[u64]) -> bool {
        blocks
            .iter()
            .enumerate()
            .all(|(i, &a)| blocks[i + 1..].iter().all(|&b| !self.masks_cross(a, b)))
    }
}

/// Some point of `inner` lies strictly between two points of `outer` on `side`.
fn contained(side: &[usize], outer: u64, inner: u64) -> bool {
    let mut lo = None;
    let mut hi = None;
    for (i, &p) in side.iter().enumerate() {
        if outer >> p & 1 == 1 {
            lo.get_or_insert(i);
            hi = Some(i);
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) if hi > lo + 1 => {
            side[lo + 1..hi].iter().any(|&p| inner >> p & 1 == 1)
        }
        _ => false,
    }
}

fn to_mask(n: usize, set: &[usize]) -> Result<u64> {
    let mut m = 0u64;
    for &p in set {
        if p >= n {
            return Err(Error::IndexOutOfRange { index: p, n });
        }
        m |= 1 << p;
    }
    Ok(m)
}

/// Whether the convex hulls of two disjoint point sets intersect.
pub fn blocks_cross(config: &HullConfig, b1: &[usize], b2: &[usize]) -> Result<bool> {
    let (a, b) = (to_mask(config.n(), b1)?, to_mask(config.n(), b2)?);
    if a & b != 0 {
        return Err(Error::OverlappingBlocks);
    }
    if a == 0 || b == 0 {
        return Err(Error::InvalidPartition("empty block".into()));
    }
    Ok(CrossingRule::new(config).masks_cross(a, b))
}

pub fn is_noncrossing(config: &HullConfig, partition: &Partition) -> Result<bool> {
    if partition.n() != config.n() {
        return Err(Error::InvalidPartition(format!(
            "partition on {} points, configuration has {}",
            partition.n(),
            config.n()
        )));
    }
    Ok(CrossingRule::new(config).is_noncrossing_masks(partition.masks()))
}

/// The noncrossing join: coarsen transitively, then merge crossing blocks
/// until none cross.
pub fn join_partitions(rule: &CrossingRule, a: &Partition, b: &Partition) -> Partition {
    let mut blocks = a.transitive_join(b).masks().to_vec();
    'outer: loop {
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if rule.masks_cross(blocks[i], blocks[j]) {
                    let merged = blocks[i] | blocks[j];
                    blocks.remove(j);
                    blocks[i] = merged;
                    continue 'outer;
                }
            }
        }
        break;
    }
    Partition::from_masks_unchecked(rule.n(), blocks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Enumeration {
    /// Filter below 10 points, recursive generation above.
    #[default]
    Auto,
    /// Filter every set partition.
    Filter,
    /// Grow partitions point by point, pruning as soon as blocks cross.
    Recursive,
}

/// Largest `n` for which filtering all set partitions is used by default.
pub const FILTER_MAX_N: usize = 9;

/// Enumeration limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_n: usize,
    pub max_elements: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_n: 12,
            max_elements: 250_000,
        }
    }
}

/// All noncrossing partitions, unordered.
pub fn noncrossing_partitions(
    config: &HullConfig,
    strategy: Enumeration,
    budget: Budget,
) -> Result<Vec<Partition>> {
    let n = config.n();
    if n > budget.max_n || n > MAX_POINTS {
        return Err(Error::BudgetExceeded(format!(
            "n = {n} exceeds max_n = {}",
            budget.max_n
        )));
    }
    let rule = CrossingRule::new(config);
    let strategy = match strategy {
        Enumeration::Auto if n <= FILTER_MAX_N => Enumeration::Filter,
        Enumeration::Auto => Enumeration::Recursive,
        s => s,
    };
    let mut out = Vec::new();
    match strategy {
        Enumeration::Filter => {
            for p in set_partitions(n) {
                if rule.is_noncrossing_masks(p.masks()) {
                    out.push(p);
                    if out.len() > budget.max_elements {
                        return Err(over_budget(budget));
                    }
                }
            }
        }
        _ => {
            let mut blocks = Vec::new();
            grow(&rule, 0, &mut blocks, &mut out, budget.max_elements)?;
        }
    }
    Ok(out)
}

fn over_budget(budget: Budget) -> Error {
    Error::BudgetExceeded(format!("more than {} elements", budget.max_elements))
}

fn grow(
    rule: &CrossingRule,
    p: usize,
    blocks: &mut Vec<u64>,
    out: &mut Vec<Partition>,
    max: usize,
) -> Result<()> {
    if p == rule.n() {
        out.push(Partition::from_masks_unchecked(rule.n(), blocks.clone()));
        if out.len() > max {
            return Err(Error::BudgetExceeded(format!("more than {max} elements")));
        }
        return Ok(());
    }
    for i in 0..blocks.len() {
        blocks[i] |= 1 << p;
        let ok = (0..blocks.len()).all(|j| j == i || !rule.masks_cross(blocks[i], blocks[j]));
        if ok {
            grow(rule, p + 1, blocks, out, max)?;
        }
        blocks[i] &= !(1 << p);
    }
    blocks.push(1 << p);
    let last = blocks.len() - 1;
    let ok = (0..last).all(|j| !rule.masks_cross(blocks[last], blocks[j]));
    if ok {
        grow(rule, p + 1, blocks, out, max)?;
    }
    blocks.pop();
    Ok(())
}

/// NC(P) with its elements, ranks and cover relations.
///
/// Elements are sorted by rank, then by restricted growth string, so the
/// bottom is element 0 and the top is the last element.
#[derive(Debug, Clone)]
pub struct NCLattice {
    config: HullConfig,
    rule: CrossingRule,
    elements: Vec<Partition>,
    ranks: Vec<usize>,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    index: HashMap<Partition, usize>,
}

pub fn build_lattice(config: &HullConfig) -> Result<NCLattice> {
    build_lattice_with(config, Enumeration::Auto, Budget::default())
}

pub fn build_lattice_with(
    config: &HullConfig,
    strategy: Enumeration,
    budget: Budget,
) -> Result<NCLattice> {
    let mut elements = noncrossing_partitions(config, strategy, budget)?;
    elements.sort_by_cached_key(|p| (p.rank(), p.rgs()));
    Ok(NCLattice::from_elements(config.clone(), elements))
}

impl NCLattice {
    fn from_elements(config: HullConfig, elements: Vec<Partition>) -> Self {
        let rule = CrossingRule::new(&config);
        let index: HashMap<Partition, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let ranks: Vec<usize> = elements.iter().map(Partition::rank).collect();
        let mut covers = Vec::new();
        let mut up = vec![Vec::new(); elements.len()];
        let mut down = vec![Vec::new(); elements.len()];
        for (lo, p) in elements.iter().enumerate() {
            let mut ups = Vec::new();
            for i in 0..p.num_blocks() {
                for j in i + 1..p.num_blocks() {
                    if let Some(&hi) = index.get(&p.merge(i, j)) {
                        ups.push(hi);
                    }
                }
            }
            ups.sort_unstable();
            for hi in ups {
                covers.push((lo, hi));
                up[lo].push(hi);
                down[hi].push(lo);
            }
        }
        NCLattice {
            config,
            rule,
            elements,
            ranks,
            covers,
            up,
            down,
            index,
        }
    }

    pub fn config(&self) -> &HullConfig {
        &self.config
    }

    pub fn rule(&self) -> &CrossingRule {
        &self.rule
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> Result<&Partition> {
        self.elements.get(i).ok_or(Error::ElementOutOfRange(i))
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements covering `i`.
    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    /// Elements covered by `i`.
    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn is_cover(&self, lo: usize, hi: usize) -> bool {
        self.up[lo].binary_search(&hi).is_ok()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.elements[a].refines(&self.elements[b])
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.ranks[i] == 1).collect()
    }

    pub fn coatoms(&self) -> Vec<usize> {
        let h = self.n().saturating_sub(1);
        (0..self.len())
            .filter(|&i| h > 0 && self.ranks[i] + 1 == h)
            .collect()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange(i))
        }
    }

    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        let m = self.elements[a].meet(&self.elements[b]);
        self.index_of(&m)
            .ok_or_else(|| Error::NotNoncrossing(format!("meet {m} is crossing")))
    }

    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        let j = join_partitions(&self.rule, &self.elements[a], &self.elements[b]);
        self.index_of(&j)
            .ok_or_else(|| Error::NotNoncrossing(format!("join {j} missing from lattice")))
    }

    /// Number of elements at each rank `0..=n-1`.
    pub fn rank_polynomial(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n()];
        for &r in &self.ranks {
            counts[r] += 1;
        }
        counts
    }

    /// Rank counts agree at ranks `k` and `(n-1) - k`.
    pub fn is_rank_symmetric(&self) -> bool {
        let c = self.rank_polynomial();
        c.iter().eq(c.iter().rev())
    }

    /// Every maximal chain has `n - 1` covers. Checked through the order
    /// relation: whenever `a < b`, some merge of two blocks of `a` lies
    /// in `[a, b]`, so no cover skips a rank.
    pub fn is_graded(&self) -> bool {
        if self.elements.first() != Some(&Partition::singletons(self.n()))
            || self.elements.last() != Some(&Partition::single_block(self.n()))
        {
            return false;
        }
        for a in 0..self.len() {
            for b in 0..self.len() {
                if a == b || self.ranks[b] <= self.ranks[a] || !self.leq(a, b) {
                    continue;
                }
                if !self.up[a].iter().any(|&c| self.leq(c, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// JSON export referencing elements by their partition strings.
    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            shape: self.config.to_string(),
            n: self.n(),
            elements: self.elements.iter().map(ToString::to_string).collect(),
            ranks: self.ranks.clone(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    /// Hasse diagram in Graphviz DOT.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"NC({})\" {{", self.config);
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
        for (i, p) in self.elements.iter().enumerate() {
            let _ = writeln!(out, "  e{i} [label=\"{p}\"];");
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "  e{a} -> e{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// Serialized lattice: `{shape, n, elements, ranks, covers}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub shape: String,
    pub n: usize,
    pub elements: Vec<String>,
    pub ranks: Vec<usize>,
    pub covers: Vec<[usize; 2]>,
}

/// Checks that NC(P) sits inside NC(Q) by the identity on point labels,
/// with matching order relations. Requires `P <= Q` in the hull poset.
pub fn embedding_check(p: &HullConfig, q: &HullConfig) -> Result<bool> {
    if p.n() != q.n() {
        return Err(Error::NotComparable);
    }
    let (ep, eq) = (HullElement::from_config(p), HullElement::from_config(q));
    if !hullposet::leq(&ep, &eq)? {
        return Err(Error::NotComparable);
    }
    let lp = build_lattice(p)?;
    let lq = build_lattice(q)?;
    let mut image = Vec::with_capacity(lp.len());
    for x in lp.elements() {
        match lq.index_of(x) {
            Some(i) => image.push(i),
            None => return Ok(false),
        }
    }
    for a in 0..lp.len() {
        for b in 0..lp.len() {
            if lp.leq(a, b) != lq.leq(image[a], image[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Noncrossing partitions of a labelled class, written on its labels.
pub fn labelled_partitions(e: &HullElement) -> Result<Vec<Partition>> {
    let (config, labels) = e.to_config();
    let n = config.n();
    Ok(
        noncrossing_partitions(&config, Enumeration::Auto, Budget::default())?
            .iter()
            .map(|p| p.relabel(&labels, n))
            .collect(),
    )
}

/// For `a <= b` in the hull poset: every partition noncrossing for `a` is
/// noncrossing for `b`, and `b` has strictly more when `a < b`.
pub fn embedding_check_elements(a: &HullElement, b: &HullElement) -> Result<bool> {
    if !hullposet::leq(a, b)? {
        return Err(Error::NotComparable);
    }
    let small = labelled_partitions(a)?;
    let large: std::collections::HashSet<Partition> = labelled_partitions(b)?.into_iter().collect();
    let strict = a == b || small.len() < large.len();
    Ok(strict && small.iter().all(|p| large.contains(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> HullConfig {
        s.parse().unwrap()
    }

    fn part(n: usize, s: &str) -> Partition {
        Partition::parse(n, s).unwrap()
    }

    #[test]
    fn crossing_examples() {
        assert!(blocks_cross(&cfg("segment:4"), &[0, 2], &[1]).unwrap());
        assert!(blocks_cross(&cfg("[0;0;0;0]"), &[0, 2], &[1, 3]).unwrap());
        assert!(!blocks_cross(&cfg("[1;1;1]"), &[0, 1], &[3, 4]).unwrap());
        assert_eq!(
            blocks_cross(&cfg("[1;1;1]"), &[0, 1], &[1, 4]),
            Err(Error::OverlappingBlocks)
        );
    }

    #[test]
    fn noncrossing_examples() {
        let t = cfg("[1;1;1]");
        assert!(!is_noncrossing(&t, &part(6, "0,2,4|1|3|5")).unwrap());
        assert!(is_noncrossing(&t, &Partition::singletons(6)).unwrap());
        assert!(is_noncrossing(&cfg("[0;0;0;0]"), &part(4, "0,1|2,3")).unwrap());
        assert!(is_noncrossing(&t, &Partition::singletons(5)).is_err());
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(build_lattice(&cfg("segment:5")).unwrap().len(), 16);
        assert_eq!(build_lattice(&cfg("[0;0;0;0;0]")).unwrap().len(), 42);
        let t = build_lattice(&cfg("[1;1;1]")).unwrap();
        assert_eq!(t.len(), 95);
        assert_eq!(t.rank_polynomial(), vec![1, 12, 34, 35, 12, 1]);
        assert!(!t.is_rank_symmetric());
        assert!(t.is_graded());
    }

    #[test]
    fn rank_symmetry_extremes() {
        let sq = build_lattice(&cfg("[0;0;0;0]")).unwrap();
        assert_eq!(sq.rank_polynomial(), vec![1, 6, 6, 1]);
        assert!(sq.is_rank_symmetric());
        let seg = build_lattice(&cfg("segment:6")).unwrap();
        assert_eq!(seg.rank_polynomial(), vec![1, 5, 10, 10, 5, 1]);
        assert!(seg.is_rank_symmetric());
    }

    #[test]
    fn strategies_agree_past_the_filter_range() {
        for s in [
            "[0;0;0;0;0;0;0;0;0;0]",
            "[2;0;3;0;1]",
            "[1;1;1;1;1]",
            "segment:10",
        ] {
            let c = cfg(s);
            let mut a = noncrossing_partitions(&c, Enumeration::Filter, Budget::default()).unwrap();
            let mut b =
                noncrossing_partitions(&c, Enumeration::Recursive, Budget::default()).unwrap();
            a.sort();
            b.sort();
            assert_eq!(a, b, "{s}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = cfg("segment:13");
        assert!(matches!(build_lattice(&c), Err(Error::BudgetExceeded(_))));
        let tight = Budget {
            max_n: 12,
            max_elements: 10,
        };
        assert!(build_lattice_with(&cfg("[0;0;0;0;0]"), Enumeration::Auto, tight).is_err());
        assert!(build_lattice_with(&cfg("[0;0;0;0;0]"), Enumeration::Recursive, tight).is_err());
    }

    #[test]
    fn join_examples() {
        let seg = build_lattice(&cfg("segment:4")).unwrap();
        let a = seg.index_of(&part(4, "0,1|2|3")).unwrap();
        let b = seg.index_of(&part(4, "0|1,2|3")).unwrap();
        assert_eq!(
            seg.elements()[seg.join(a, b).unwrap()].to_string(),
            "0,1,2|3"
        );
        assert_eq!(seg.meet(a, seg.bottom()).unwrap(), seg.bottom());
        let t = build_lattice(&cfg("[1;1;1]")).unwrap();
        let a = t.index_of(&part(6, "0,3|1|2|4|5")).unwrap();
        let b = t.index_of(&part(6, "0|1,4|2|3|5")).unwrap();
        assert_eq!(
            t.elements()[t.join(a, b).unwrap()].to_string(),
            "0,1,3,4,5|2"
        );
        assert!(t.join(0, 1000).is_err());
    }

    #[test]
    fn covers_and_bounds() {
        let t = build_lattice(&cfg("[0;1;1]")).unwrap();
        assert_eq!(t.elements()[t.bottom()], Partition::singletons(5));
        assert_eq!(t.elements()[t.top()], Partition::single_block(5));
        for &(a, b) in t.covers() {
            assert_eq!(t.rank(a) + 1, t.rank(b));
            assert!(t.leq(a, b));
        }
        assert_eq!(t.atoms().len(), t.rank_polynomial()[1]);
        assert_eq!(t.coatoms().len(), t.rank_polynomial()[3]);
    }

    #[test]
    fn exports_are_deterministic() {
        let t = build_lattice(&cfg("[0;0;0]")).unwrap();
        let json = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"shape":"[0;0;0]","n":3,"elements":["0|1|2","0,1|2","0,2|1","0|1,2","0,1,2"],"ranks":[0,1,1,1,2],"covers":[[0,1],[0,2],[0,3],[1,4],[2,4],[3,4]]}"#
        );
        let dot = t.to_dot();
        assert_eq!(dot.matches("->").count(), 6);
        assert_eq!(dot, build_lattice(&cfg("[0;0;0]")).unwrap().to_dot());
    }

    #[test]
    fn embeddings() {
        assert!(embedding_check(&cfg("segment:3"), &cfg("[0;0;0]")).unwrap());
        assert!(embedding_check(&cfg("[1;1;1]"), &cfg("[0;0;0;0;0;0]")).unwrap());
        assert!(embedding_check(&cfg("[1;1;1]"), &cfg("[1;1;1]")).unwrap());
        assert_eq!(
            embedding_check(&cfg("[0;0;0;0;0;0]"), &cfg("[1;1;1]")),
            Err(Error::NotComparable)
        );
    }
}
