//! Symmetric chain decompositions of NC(P).
//!
//! With a blank side rotated to side 1, NC(P) splits into the elements where
//! `z_{1,0}` is a singleton or sits with the last point (a copy of
//! `NC(P - z_{1,0}) x Bool(1)`) and one interval `[alpha_ij, beta_ij]` for each
//! other possible "last point" of the block of `z_{1,0}`, each a product of two
//! smaller lattices on boundary arcs. Chains of the pieces are combined with
//! the hook peeling of a product of two chains.

use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::configuration::HullConfig;
use crate::error::{Error, Result};
use crate::lattice::{bits, is_noncrossing, NCLattice, Partition};

/// Chains of element indices into a lattice, each listed bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDecomposition {
    pub chains: Vec<Vec<usize>>,
}

impl ChainDecomposition {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Chain lengths, largest first.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.chains.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScdJson {
    pub shape: String,
    pub chains: Vec<Vec<usize>>,
}

/// Symmetric chains of the subsets of `0..m`, as bit masks.
///
/// Reading a subset as a word with `0 = (` and `1 = )`, the chain through a
/// word keeps its matched brackets and flips the unmatched zeros left to
/// right.
pub fn bool_scd(m: usize) -> Vec<Vec<u64>> {
    assert!(m < 40, "Bool({m}) is too large to decompose");
    let mut chains = Vec::new();
    for w in 0u64..1 << m {
        let mut open = Vec::new();
        let mut unmatched_one = false;
        for i in 0..m {
            if w >> i & 1 == 0 {
                open.push(i);
            } else if open.pop().is_none() {
                unmatched_one = true;
                break;
            }
        }
        if unmatched_one {
            continue;
        }
        let mut chain = vec![w];
        let mut cur = w;
        for &i in &open {
            cur |= 1 << i;
            chain.push(cur);
        }
        chains.push(chain);
    }
    chains
}

/// Hook peeling of the grid `a x b`: index pairs for each symmetric chain.
pub fn product_peel(a: usize, b: usize) -> Vec<Vec<(usize, usize)>> {
    (0..a.min(b))
        .map(|t| {
            let mut c: Vec<(usize, usize)> = (0..a - t).map(|i| (i, t)).collect();
            c.extend((t + 1..b).map(|j| (a - 1 - t, j)));
            c
        })
        .collect()
}

/// Symmetric chains of a product from symmetric chains of its factors.
///
/// Each input chain lists its elements bottom to top; `combine` builds the
/// product element from one element of each factor.
pub fn product_scd<A, B, C>(
    chains_a: &[Vec<A>],
    chains_b: &[Vec<B>],
    mut combine: impl FnMut(&A, &B) -> C,
) -> Vec<Vec<C>> {
    let mut out = Vec::new();
    for ca in chains_a {
        for cb in chains_b {
            for hook in product_peel(ca.len(), cb.len()) {
                out.push(
                    hook.into_iter()
                        .map(|(i, j)| combine(&ca[i], &cb[j]))
                        .collect(),
                );
            }
        }
    }
    out
}

/// `alpha_ij`: the atom joining `z_{1,0}` and `z_{i,j}`.
pub fn alpha(config: &HullConfig, i: usize, j: usize) -> Result<Partition> {
    let m = interval_point(config, i, j)?;
    let n = config.n();
    let mut blocks = vec![1u64 | 1 << m];
    blocks.extend((1..n).filter(|&p| p != m).map(|p| 1u64 << p));
    Partition::from_masks(n, blocks)
}

/// `beta_ij`: the coatom splitting the boundary after `z_{i,j}`.
pub fn beta(config: &HullConfig, i: usize, j: usize) -> Result<Partition> {
    let m = interval_point(config, i, j)?;
    let n = config.n();
    let low = (1u64 << (m + 1)) - 1;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Partition::from_masks(n, vec![low, all & !low])
}

fn interval_point(config: &HullConfig, i: usize, j: usize) -> Result<usize> {
    let shape = config
        .shape()
        .ok_or_else(|| Error::InvalidAlphaBeta("segments have no alpha/beta elements".into()))?;
    if shape[0] != 0 {
        return Err(Error::NoBlankSide);
    }
    let k = shape.len();
    if i < 2 || i > k - 1 || j > shape[i - 1] {
        return Err(Error::InvalidAlphaBeta(format!(
            "(i, j) = ({i}, {j}) out of range for {config}"
        )));
    }
    config.point_index(i, j)
}

/// Points of a boundary arc and, when it has two or more points, the
/// configuration they induce (local labels via `points[local] = parent`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubArc {
    pub points: Vec<usize>,
    pub config: Option<HullConfig>,
}

impl SubArc {
    fn new(parent: &HullConfig, start: usize, end: usize) -> Result<SubArc> {
        if start == end {
            return Ok(SubArc {
                points: vec![start],
                config: None,
            });
        }
        let sub = parent.arc_subconfig(start, end)?;
        Ok(SubArc {
            points: sub.points,
            config: Some(sub.config),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// All noncrossing partitions of the arc, in local labels.
    pub fn elements(&self) -> Result<Vec<Partition>> {
        match &self.config {
            None => Ok(vec![Partition::singletons(1)]),
            Some(c) => Ok(crate::lattice::build_lattice(c)?.elements().to_vec()),
        }
    }

    fn check(&self, p: &Partition) -> Result<()> {
        let ok = match &self.config {
            None => p.n() == 1,
            Some(c) => p.n() == c.n() && is_noncrossing(c, p)?,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NotNoncrossing(format!(
                "{p} on arc {:?}",
                self.points
            )))
        }
    }

    fn lift(&self, p: &Partition) -> Vec<u64> {
        p.masks()
            .iter()
            .map(|&b| bits(b).fold(0u64, |m, x| m | 1 << self.points[x]))
            .collect()
    }
}

/// The arcs `A_ij` (from `z_{2,0}` to `z_{i,j}`) and `B_ij` (the rest,
/// without `z_{1,0}`).
pub fn interval_arcs(config: &HullConfig, i: usize, j: usize) -> Result<(SubArc, SubArc)> {
    let m = interval_point(config, i, j)?;
    let n = config.n();
    Ok((
        SubArc::new(config, 1, m)?,
        SubArc::new(config, m + 1, n - 1)?,
    ))
}

/// The element of `[alpha_ij, beta_ij]` assembled from `sigma` on `A_ij`
/// and `rho` on `B_ij` (local labels): `z_{1,0}` joins the block of `sigma`
/// holding `z_{i,j}`.
pub fn interval_product_iso(
    config: &HullConfig,
    i: usize,
    j: usize,
    sigma: &Partition,
    rho: &Partition,
) -> Result<Partition> {
    let m = interval_point(config, i, j)?;
    let (a, b) = interval_arcs(config, i, j)?;
    a.check(sigma)?;
    b.check(rho)?;
    let mut blocks = a.lift(sigma);
    for blk in blocks.iter_mut() {
        if *blk >> m & 1 == 1 {
            *blk |= 1;
        }
    }
    blocks.extend(b.lift(rho));
    Partition::from_masks(config.n(), blocks)
}

/// NC(P) split into the `X` part and the intervals `[alpha_ij, beta_ij]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub x_part: Vec<usize>,
    /// `(i, j, elements)`
    pub intervals: Vec<(usize, usize, Vec<usize>)>,
}

/// Classifies every element by the last point of the block of `z_{1,0}`.
/// Side 1 must be blank.
pub fn decompose(lattice: &NCLattice) -> Result<Decomposition> {
    let config = lattice.config();
    let shape = config.shape().ok_or(Error::NoBlankSide)?;
    if shape[0] != 0 {
        return Err(Error::NoBlankSide);
    }
    let n = config.n();
    let k = shape.len();
    let mut x_part = Vec::new();
    let mut by_point: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, p) in lattice.elements().iter().enumerate() {
        let last = 63 - p.block_of(0).leading_zeros() as usize;
        if last == 0 || last == n - 1 {
            x_part.push(e);
        } else {
            by_point.entry(last).or_default().push(e);
        }
    }
    let mut intervals = Vec::new();
    for i in 2..k {
        for j in 0..=shape[i - 1] {
            let m = config.point_index(i, j)?;
            intervals.push((i, j, by_point.remove(&m).unwrap_or_default()));
        }
    }
    if !by_point.is_empty() {
        return Err(Error::InvalidChains("elements outside every part".into()));
    }
    Ok(Decomposition { x_part, intervals })
}

type Chains = Rc<Vec<Vec<Vec<u64>>>>;

/// Chains of NC(config) as block masks in the configuration's own labels.
fn chains_of(
    config: &HullConfig,
    blank: Option<usize>,
    memo: &mut HashMap<HullConfig, Chains>,
) -> Result<Chains> {
    if blank.is_none() {
        if let Some(c) = memo.get(config) {
            return Ok(Rc::clone(c));
        }
    }
    let n = config.n();
    let chains: Vec<Vec<Vec<u64>>> = if config.is_segment() {
        bool_scd(n - 1)
            .into_iter()
            .map(|chain| {
                chain
                    .into_iter()
                    .map(|gaps| interval_blocks(n, gaps))
                    .collect()
            })
            .collect()
    } else {
        let side = match blank {
            Some(s) => {
                if config.shape().and_then(|sh| sh.get(s.wrapping_sub(1))) != Some(&0) {
                    return Err(Error::InvalidChains(format!(
                        "side {s} of {config} is not blank"
                    )));
                }
                s
            }
            None => config.first_blank_side().ok_or(Error::NoBlankSide)?,
        };
        let (rc, map) = config.rotated(side)?;
        let mut inverse = vec![0; n];
        for (old, &new) in map.iter().enumerate() {
            inverse[new] = old;
        }
        rotated_chains(&rc, memo)?
            .into_iter()
            .map(|chain| {
                chain
                    .into_iter()
                    .map(|blocks| {
                        blocks
                            .into_iter()
                            .map(|b| bits(b).fold(0, |m, p| m | 1 << inverse[p]))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    };
    let chains = Rc::new(chains);
    if blank.is_none() {
        memo.insert(config.clone(), Rc::clone(&chains));
    }
    Ok(chains)
}

fn interval_blocks(n: usize, gaps: u64) -> Vec<u64> {
    let mut blocks = Vec::new();
    let mut cur = 1u64;
    for p in 1..n {
        if gaps >> (p - 1) & 1 == 1 {
            cur |= 1 << p;
        } else {
            blocks.push(cur);
            cur = 1 << p;
        }
    }
    blocks.push(cur);
    blocks
}

/// Chains of an arc lifted to parent labels.
fn arc_chains(
    parent: &HullConfig,
    start: usize,
    end: usize,
    memo: &mut HashMap<HullConfig, Chains>,
) -> Result<Vec<Vec<Vec<u64>>>> {
    let arc = SubArc::new(parent, start, end)?;
    let Some(c) = &arc.config else {
        return Ok(vec![vec![vec![1u64 << start]]]);
    };
    let local = chains_of(c, None, memo)?;
    Ok(local
        .iter()
        .map(|chain| {
            chain
                .iter()
                .map(|blocks| {
                    blocks
                        .iter()
                        .map(|&b| bits(b).fold(0, |m, p| m | 1 << arc.points[p]))
                        .collect()
                })
                .collect()
        })
        .collect())
}

/// Chains for a polygon whose side 1 is blank.
fn rotated_chains(
    config: &HullConfig,
    memo: &mut HashMap<HullConfig, Chains>,
) -> Result<Vec<Vec<Vec<u64>>>> {
    let n = config.n();
    let shape = config.shape().expect("polygon");
    let k = shape.len();
    let last = n - 1;

    let rest = arc_chains(config, 1, last, memo)?;
    let pair = [false, true];
    let mut out = Vec::new();
    for chain in rest.iter() {
        let hooks = product_scd(
            std::slice::from_ref(chain),
            &[pair.to_vec()],
            |blocks: &Vec<u64>, &joined: &bool| {
                let mut b = blocks.clone();
                if joined {
                    for blk in b.iter_mut() {
                        if *blk >> last & 1 == 1 {
                            *blk |= 1;
                        }
                    }
                } else {
                    b.push(1);
                }
                b
            },
        );
        out.extend(hooks);
    }

    for i in 2..k {
        for j in 0..=shape[i - 1] {
            let m = config.point_index(i, j)?;
            let a = arc_chains(config, 1, m, memo)?;
            let b = arc_chains(config, m + 1, last, memo)?;
            out.extend(product_scd(&a, &b, |sa: &Vec<u64>, sb: &Vec<u64>| {
                let mut blocks: Vec<u64> = sa
                    .iter()
                    .map(|&blk| if blk >> m & 1 == 1 { blk | 1 } else { blk })
                    .collect();
                blocks.extend(sb);
                blocks
            }));
        }
    }
    Ok(out)
}

/// A symmetric chain decomposition of NC(P) for a segment or a polygon with
/// a blank side. The first blank side in stored order is used.
pub fn scd(lattice: &NCLattice) -> Result<ChainDecomposition> {
    scd_with(lattice, None)
}

/// As [`scd`], splitting at the given blank side (1-based) at the top level.
pub fn scd_with(lattice: &NCLattice, blank_side: Option<usize>) -> Result<ChainDecomposition> {
    let config = lattice.config();
    let blank = if config.is_segment() {
        None
    } else {
        blank_side
    };
    let mut memo = HashMap::new();
    let chains = chains_of(config, blank, &mut memo)?;
    let n = config.n();
    let mut out = Vec::with_capacity(chains.len());
    for chain in chains.iter() {
        let mut idx = Vec::with_capacity(chain.len());
        for blocks in chain {
            let p = Partition::from_masks(n, blocks.clone())?;
            let e = lattice.index_of(&p).ok_or_else(|| {
                Error::InvalidChains(format!("{p} is not noncrossing in {config}"))
            })?;
            idx.push(e);
        }
        out.push(idx);
    }
    Ok(ChainDecomposition { chains: out })
}

/// Outcome of [`verify_scd`]; `witness` describes the first failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScdReport {
    pub disjoint: bool,
    pub covering: bool,
    pub saturated: bool,
    pub centered: bool,
    pub witness: Option<String>,
}

impl ScdReport {
    pub fn passed(&self) -> bool {
        self.disjoint && self.covering && self.saturated && self.centered
    }
}

/// Independently checks that `decomposition` is a symmetric chain
/// decomposition of `lattice`.
pub fn verify_scd(lattice: &NCLattice, decomposition: &ChainDecomposition) -> ScdReport {
    let mut report = ScdReport {
        disjoint: true,
        covering: true,
        saturated: true,
        centered: true,
        witness: None,
    };
    let note = |w: &mut Option<String>, msg: String| {
        if w.is_none() {
            *w = Some(msg);
        }
    };
    let len = lattice.len();
    let height = lattice.n().saturating_sub(1);
    let mut seen = vec![false; len];
    for (c, chain) in decomposition.chains.iter().enumerate() {
        if chain.is_empty() {
            report.saturated = false;
            note(&mut report.witness, format!("chain {c} is empty"));
            continue;
        }
        if let Some(&bad) = chain.iter().find(|&&e| e >= len) {
            report.covering = false;
            note(
                &mut report.witness,
                format!("chain {c} names element {bad}, lattice has {len}"),
            );
            continue;
        }
        for &e in chain {
            if seen[e] {
                report.disjoint = false;
                note(
                    &mut report.witness,
                    format!("element {e} ({}) lies on two chains", lattice.elements()[e]),
                );
            }
            seen[e] = true;
        }
        for w in chain.windows(2) {
            if !lattice.is_cover(w[0], w[1]) {
                report.saturated = false;
                note(
                    &mut report.witness,
                    format!(
                        "chain {c}: {} -> {} is not a cover",
                        lattice.elements()[w[0]],
                        lattice.elements()[w[1]]
                    ),
                );
            }
        }
        let lo = lattice.rank(chain[0]);
        let hi = lattice.rank(chain[chain.len() - 1]);
        if lo + hi != height {
            report.centered = false;
            note(
                &mut report.witness,
                format!("chain {c} spans ranks {lo}..{hi}, height is {height}"),
            );
        }
    }
    if let Some(e) = seen.iter().position(|&s| !s) {
        report.covering = false;
        note(
            &mut report.witness,
            format!("element {e} ({}) lies on no chain", lattice.elements()[e]),
        );
    }
    report
}

pub fn to_json(lattice: &NCLattice, decomposition: &ChainDecomposition) -> ScdJson {
    ScdJson {
        shape: lattice.config().to_string(),
        chains: decomposition.chains.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    fn cfg(s: &str) -> HullConfig {
        s.parse().unwrap()
    }

    #[test]
    fn boolean_chains() {
        assert_eq!(bool_scd(0), vec![vec![0]]);
        let sizes = |m| {
            let mut s: Vec<usize> = bool_scd(m).iter().map(Vec::len).collect();
            s.sort_unstable();
            s
        };
        assert_eq!(sizes(3), vec![2, 2, 4]);
        assert_eq!(bool_scd(4).len(), 6);
        let total: usize = bool_scd(6).iter().map(Vec::len).sum();
        assert_eq!(total, 64);
    }

    #[test]
    fn peeling() {
        let sizes: Vec<usize> = product_peel(3, 3).iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![5, 3, 1]);
        assert_eq!(
            product_peel(1, 4),
            vec![vec![(0, 0), (0, 1), (0, 2), (0, 3)]]
        );
        let b1 = bool_scd(1);
        let sq = product_scd(&b1, &b1, |a, b| a | b << 1);
        let mut sizes: Vec<usize> = sq.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3]);
    }

    #[test]
    fn alpha_beta_examples() {
        let c = cfg("[0;3;2;1;2]");
        assert_eq!(
            alpha(&c, 3, 2).unwrap().to_string(),
            "0,7|1|2|3|4|5|6|8|9|10|11|12"
        );
        assert_eq!(
            beta(&c, 3, 2).unwrap().to_string(),
            "0,1,2,3,4,5,6,7|8,9,10,11,12"
        );
        assert_eq!(
            alpha(&c, 2, 0).unwrap().to_string(),
            "0,1|2|3|4|5|6|7|8|9|10|11|12"
        );
        assert!(alpha(&c, 5, 0).is_err());
        assert!(alpha(&c, 3, 3).is_err());
        assert!(alpha(&cfg("[1;0;0]"), 2, 0).is_err());
    }

    #[test]
    fn decompose_triangle() {
        let l = build_lattice(&cfg("[0;0;0]")).unwrap();
        let d = decompose(&l).unwrap();
        assert_eq!(d.x_part.len(), 4);
        assert_eq!(d.intervals.len(), 1);
        assert_eq!(d.intervals[0].0, 2);
        assert_eq!(d.intervals[0].2.len(), 1);
    }

    #[test]
    fn decompose_covers() {
        let l = build_lattice(&cfg("[0;1;1]")).unwrap();
        let d = decompose(&l).unwrap();
        let mut all: Vec<usize> = d.x_part.clone();
        for (_, _, e) in &d.intervals {
            all.extend(e);
        }
        all.sort_unstable();
        assert_eq!(all, (0..l.len()).collect::<Vec<_>>());
    }

    #[test]
    fn iso_on_the_big_example() {
        let c = cfg("[0;3;2;1;2]");
        let (a, b) = interval_arcs(&c, 3, 2).unwrap();
        assert_eq!(a.config.as_ref().unwrap().to_string(), "[3;1;0]");
        let sa = a.elements().unwrap();
        let sb = b.elements().unwrap();
        let al = alpha(&c, 3, 2).unwrap();
        let be = beta(&c, 3, 2).unwrap();
        let mut images = std::collections::HashSet::new();
        for s in &sa {
            for r in sb.iter().step_by(7) {
                let p = interval_product_iso(&c, 3, 2, s, r).unwrap();
                assert!(al.refines(&p) && p.refines(&be));
                assert_eq!(p.rank(), s.rank() + r.rank() + 1);
                assert!(is_noncrossing(&c, &p).unwrap());
                images.insert(p);
            }
        }
        assert_eq!(images.len(), sa.len() * sb.iter().step_by(7).count());
    }

    #[test]
    fn small_decompositions() {
        let l = build_lattice(&cfg("segment:3")).unwrap();
        assert_eq!(scd(&l).unwrap().sizes(), vec![3, 1]);
        let l = build_lattice(&cfg("[0;0;0]")).unwrap();
        let d = scd(&l).unwrap();
        assert_eq!(d.sizes(), vec![3, 1, 1]);
        assert!(verify_scd(&l, &d).passed());
        for s in [
            "[0;1;1]",
            "segment:6",
            "[0;3;2;1]",
            "[2;0;1;1]",
            "[1;1;0;2]",
            "[0;0;0;0;0;0;0]",
        ] {
            let l = build_lattice(&cfg(s)).unwrap();
            let d = scd(&l).unwrap();
            let r = verify_scd(&l, &d);
            assert!(r.passed(), "{s}: {r:?}");
            let widest = l.rank_polynomial().into_iter().max().unwrap();
            assert_eq!(d.len(), widest, "{s}");
        }
    }

    #[test]
    fn every_blank_side_works() {
        let l = build_lattice(&cfg("[0;2;0;1]")).unwrap();
        for side in [1, 3] {
            let d = scd_with(&l, Some(side)).unwrap();
            assert!(verify_scd(&l, &d).passed());
        }
        assert!(scd_with(&l, Some(2)).is_err());
    }

    #[test]
    fn no_blank_side_is_rejected() {
        let l = build_lattice(&cfg("[1;1;1]")).unwrap();
        assert_eq!(scd(&l), Err(Error::NoBlankSide));
    }

    #[test]
    fn verifier_catches_defects() {
        let l = build_lattice(&cfg("segment:4")).unwrap();
        let mut d = scd(&l).unwrap();
        let removed = d
            .chains
            .iter_mut()
            .find(|c| c.len() == 2)
            .unwrap()
            .pop()
            .unwrap();
        let r = verify_scd(&l, &d);
        assert!(!r.covering && !r.centered);
        assert!(r.witness.is_some());
        let _ = removed;

        let jump = ChainDecomposition {
            chains: vec![vec![l.bottom(), l.top()]],
        };
        let r = verify_scd(&l, &jump);
        assert!(!r.saturated);
        assert!(r.witness.unwrap().contains("not a cover"));
    }
}
