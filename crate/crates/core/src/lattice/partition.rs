use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest point count a [`Partition`] can hold (blocks are bit sets).
pub const MAX_POINTS: usize = 64;

/// A set partition of `0..n`, blocks sorted by their minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<u64>,
}

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

impl Partition {
    /// Builds a partition from block masks, canonicalizing the block order.
    pub fn from_masks(n: usize, mut blocks: Vec<u64>) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::InvalidPartition(format!(
                "at most {MAX_POINTS} points supported"
            )));
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut seen = 0u64;
        for &b in &blocks {
            if b == 0 {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if b & seen != 0 {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            seen |= b;
        }
        if seen != full {
            return Err(Error::InvalidPartition(format!(
                "blocks do not cover 0..{n}"
            )));
        }
        blocks.sort_unstable_by_key(|b| b.trailing_zeros());
        Ok(Partition { n, blocks })
    }

    pub(crate) fn from_masks_unchecked(n: usize, mut blocks: Vec<u64>) -> Self {
        blocks.sort_unstable_by_key(|b| b.trailing_zeros());
        Partition { n, blocks }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut m = 0u64;
            for &p in block {
                if p >= n {
                    return Err(Error::InvalidPartition(format!("point {p} out of range")));
                }
                if m >> p & 1 == 1 {
                    return Err(Error::InvalidPartition(format!("point {p} repeated")));
                }
                m |= 1 << p;
            }
            masks.push(m);
        }
        Partition::from_masks(n, masks)
    }

    /// Partition whose block labels are `labels[p]`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut masks: Vec<(usize, u64)> = Vec::new();
        for (p, &l) in labels.iter().enumerate() {
            match masks.iter_mut().find(|(x, _)| *x == l) {
                Some((_, m)) => *m |= 1 << p,
                None => masks.push((l, 1 << p)),
            }
        }
        Partition::from_masks_unchecked(n, masks.into_iter().map(|(_, m)| m).collect())
    }

    /// All singletons: the bottom element.
    pub fn singletons(n: usize) -> Self {
        Partition {
            n,
            blocks: (0..n).map(|p| 1u64 << p).collect(),
        }
    }

    /// One block: the top element.
    pub fn single_block(n: usize) -> Self {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Partition {
            n,
            blocks: if n == 0 { vec![] } else { vec![full] },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn masks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|&b| bits(b).collect()).collect()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `n - #blocks`.
    pub fn rank(&self) -> usize {
        self.n - self.blocks.len()
    }

    pub fn block_of(&self, p: usize) -> u64 {
        self.blocks
            .iter()
            .copied()
            .find(|b| b >> p & 1 == 1)
            .expect("point in range")
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of(a) >> b & 1 == 1
    }

    pub fn is_singleton(&self, p: usize) -> bool {
        self.block_of(p) == 1 << p
    }

    /// Refinement order: every block of `self` sits inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|&b| other.blocks.iter().any(|&c| b & !c == 0))
    }

    /// The partition obtained by merging blocks `i` and `j`.
    pub fn merge(&self, i: usize, j: usize) -> Partition {
        let mut blocks = self.blocks.clone();
        let merged = blocks[i] | blocks[j];
        let (lo, hi) = (i.min(j), i.max(j));
        blocks.remove(hi);
        blocks[lo] = merged;
        Partition::from_masks_unchecked(self.n, blocks)
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        let mut blocks = Vec::new();
        for &a in &self.blocks {
            for &b in &other.blocks {
                if a & b != 0 {
                    blocks.push(a & b);
                }
            }
        }
        Partition::from_masks_unchecked(self.n, blocks)
    }

    /// Finest common coarsening (join in the full partition lattice).
    pub fn transitive_join(&self, other: &Partition) -> Partition {
        let mut blocks: Vec<u64> = self.blocks.clone();
        for &b in &other.blocks {
            let mut acc = b;
            blocks.retain(|&c| {
                if c & acc != 0 {
                    acc |= c;
                    false
                } else {
                    true
                }
            });
            blocks.push(acc);
        }
        Partition::from_masks_unchecked(self.n, blocks)
    }

    /// Restricted growth string: block number of each point.
    pub fn rgs(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, &b) in self.blocks.iter().enumerate() {
            for p in bits(b) {
                out[p] = i;
            }
        }
        out
    }

    /// Applies `map[old] = new` to every point, producing a partition of `0..new_n`.
    pub fn relabel(&self, map: &[usize], new_n: usize) -> Partition {
        let blocks = self
            .blocks
            .iter()
            .map(|&b| bits(b).fold(0u64, |m, p| m | 1 << map[p]))
            .collect();
        Partition::from_masks_unchecked(new_n, blocks)
    }

    pub fn parse(n: usize, text: &str) -> Result<Partition> {
        let bad = || Error::InvalidPartition(format!("cannot parse {text:?}"));
        let mut blocks = Vec::new();
        for block in text.split('|') {
            let pts = block
                .split(',')
                .map(|t| {
                    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                        Err(bad())
                    } else {
                        t.parse::<usize>().map_err(|_| bad())
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(pts);
        }
        Partition::from_blocks(n, &blocks)
    }
}

impl fmt::Display for Partition {
    /// Wire format: blocks by minimum, `|`-separated, points `,`-delimited.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for (j, p) in bits(b).enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the wire format, inferring `n` from the largest point.
    fn from_str(s: &str) -> Result<Self> {
        let n = s
            .split(['|', ','])
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .map_or(0, |m| m + 1);
        Partition::parse(n, s)
    }
}

/// All set partitions of `0..n` via restricted growth strings, lexicographic.
pub fn set_partitions(n: usize) -> impl Iterator<Item = Partition> {
    let mut rgs = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let part = Partition::from_labels(&rgs);
        // advance: maxes[i] = max(rgs[..i])
        let mut i = n;
        loop {
            if i <= 1 {
                done = true;
                break;
            }
            i -= 1;
            if rgs[i] <= maxes[i] {
                rgs[i] += 1;
                for j in i + 1..n {
                    rgs[j] = 0;
                    maxes[j] = maxes[j - 1].max(rgs[j - 1]);
                }
                break;
            }
        }
        Some(part)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format_round_trip() {
        let p = Partition::parse(6, "0,1|2|3,4,5").unwrap();
        assert_eq!(p.to_string(), "0,1|2|3,4,5");
        assert_eq!(p.rank(), 3);
        let q: Partition = "3,0|1,2".parse().unwrap();
        assert_eq!(q.to_string(), "0,3|1,2");
    }

    #[test]
    fn rejects_invalid() {
        assert!(Partition::parse(3, "0,1").is_err());
        assert!(Partition::parse(3, "0,1|1,2").is_err());
        assert!(Partition::parse(3, "0,1|2|").is_err());
        assert!(Partition::parse(3, "0,1|5").is_err());
        assert!(Partition::from_masks(3, vec![0b011, 0]).is_err());
    }

    #[test]
    fn meets_and_joins_in_the_full_lattice() {
        let a = Partition::parse(4, "0,1|2|3").unwrap();
        let b = Partition::parse(4, "0|1,2|3").unwrap();
        assert_eq!(a.transitive_join(&b).to_string(), "0,1,2|3");
        assert_eq!(a.meet(&b), Partition::singletons(4));
        let c = Partition::parse(5, "0,2|1,3|4").unwrap();
        let d = Partition::parse(5, "0,1|2,3|4").unwrap();
        assert_eq!(c.transitive_join(&d).to_string(), "0,1,2,3|4");
        assert!(a.refines(&a.transitive_join(&b)));
        assert!(!a.refines(&b));
    }

    #[test]
    fn generator_matches_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bell.iter().enumerate() {
            let all: Vec<Partition> = set_partitions(n).collect();
            assert_eq!(all.len(), b, "n = {n}");
            let mut dedup = all.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), b);
        }
    }
}
