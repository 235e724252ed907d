//! Partitions of the position set `[n]`: intersection `⊓`, the coarsening join
//! `E`, supports, and coarsest supporting partitions of string-set stabilizers.
//!
//! A partition supports a set `A` when its pointwise stabilizer (all permutations
//! that keep every part in place) stabilizes `A`. That pointwise stabilizer is
//! generated by the transpositions inside each part, so support can be decided
//! on transpositions alone. Two positions whose transposition stabilizes `A` may
//! share a part of some supporting partition, and every part of a supporting
//! partition is connected in that transposition graph; the connected components
//! are therefore the unique coarsest support.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::{check_n, BitString, PosSet, StringSet, MAX_DIM};
use crate::error::{check_dim, Error, Result};
use crate::perm::PositionPerm;

/// A partition of `[n]` with parts ordered by their smallest element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: u8,
    parts: Vec<PosSet>,
}

impl Partition {
    pub fn new(n: usize, mut parts: Vec<PosSet>) -> Result<Self> {
        check_n(n)?;
        let mut seen = PosSet::EMPTY;
        for &p in &parts {
            if p.is_empty() {
                return Err(Error::InvalidPartition("empty part".into()));
            }
            if !p.is_subset(PosSet::full(n)) {
                return Err(Error::InvalidPartition(format!("part {p} outside [{n}]")));
            }
            if !p.intersect(seen).is_empty() {
                return Err(Error::InvalidPartition(format!("part {p} overlaps another part")));
            }
            seen = seen.union(p);
        }
        if seen != PosSet::full(n) {
            return Err(Error::InvalidPartition(format!(
                "parts do not cover [{n}], missing {}",
                PosSet::full(n).minus(seen)
            )));
        }
        parts.sort_unstable_by_key(|p| p.first());
        Ok(Partition { n: n as u8, parts })
    }

    /// Builds a partition from 1-based blocks, e.g. `[[1, 2], [3]]`.
    pub fn from_blocks<B: AsRef<[usize]>>(n: usize, blocks: &[B]) -> Result<Self> {
        let parts = blocks
            .iter()
            .map(|b| {
                b.as_ref()
                    .iter()
                    .try_fold(PosSet::EMPTY, |acc, &k| {
                        if k == 0 || k > MAX_DIM {
                            Err(Error::InvalidPartition(format!("position {k} out of range")))
                        } else {
                            Ok(acc.union(PosSet::singleton(k - 1)))
                        }
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(n, parts)
    }

    /// Canonicalizes parts that are already known to partition `[n]`.
    pub(crate) fn from_parts_unchecked(n: usize, mut parts: Vec<PosSet>) -> Self {
        parts.sort_unstable_by_key(|p| p.first());
        parts.dedup();
        Partition { n: n as u8, parts }
    }

    pub fn discrete(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Partition {
            n: n as u8,
            parts: (0..n).map(PosSet::singleton).collect(),
        })
    }

    /// The partition with the single part `[n]`.
    pub fn single_part(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Partition {
            n: n as u8,
            parts: vec![PosSet::full(n)],
        })
    }

    /// Zero positions and one positions of `a` (one part when `a` is constant).
    pub fn of_string(a: BitString) -> Self {
        let parts = [a.zeros_set(), a.ones_set()]
            .into_iter()
            .filter(|p| !p.is_empty())
            .collect();
        Partition::from_parts_unchecked(a.len(), parts)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// Number of parts.
    #[inline]
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[PosSet] {
        &self.parts
    }

    /// Index of the part holding the 0-based position `k`.
    pub fn part_index(&self, k: usize) -> usize {
        self.parts
            .iter()
            .position(|p| p.contains(k))
            .expect("position inside [n]")
    }

    /// Part holding the 0-based position `k`.
    pub fn part_of(&self, k: usize) -> PosSet {
        self.parts[self.part_index(k)]
    }

    /// `table[k]` = index of the part of position `k`.
    pub fn index_table(&self) -> [u8; MAX_DIM] {
        let mut t = [0u8; MAX_DIM];
        for (i, p) in self.parts.iter().enumerate() {
            for k in p.iter() {
                t[k] = i as u8;
            }
        }
        t
    }

    /// Part `P(k) ∩ Q(k)` for every `k`.
    pub fn intersect(&self, other: &Partition) -> Result<Partition> {
        check_dim(self.dim(), other.dim())?;
        let mut parts = Vec::with_capacity(self.len() + other.len());
        for p in &self.parts {
            for q in &other.parts {
                let r = p.intersect(*q);
                if !r.is_empty() {
                    parts.push(r);
                }
            }
        }
        Ok(Partition::from_parts_unchecked(self.dim(), parts))
    }

    /// Finest partition as coarse as both: components of the part-overlap relation.
    pub fn coarsen_join(&self, other: &Partition) -> Result<Partition> {
        check_dim(self.dim(), other.dim())?;
        let mut comps: Vec<PosSet> = Vec::new();
        for &p in self.parts.iter().chain(&other.parts) {
            let mut merged = p;
            comps.retain(|&c| {
                if c.intersect(merged).is_empty() {
                    true
                } else {
                    merged = merged.union(c);
                    false
                }
            });
            comps.push(merged);
        }
        Ok(Partition::from_parts_unchecked(self.dim(), comps))
    }

    /// True iff every part of `self` lies inside a part of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> Result<bool> {
        check_dim(self.dim(), coarser.dim())?;
        Ok(self
            .parts
            .iter()
            .all(|p| coarser.parts.iter().any(|q| p.is_subset(*q))))
    }

    /// Positions lying in singleton parts.
    pub fn singleton_positions(&self) -> PosSet {
        self.parts
            .iter()
            .filter(|p| p.len() == 1)
            .fold(PosSet::EMPTY, |acc, &p| acc.union(p))
    }

    /// True iff the pointwise stabilizer of `self` stabilizes `set` setwise.
    pub fn supports(&self, set: &StringSet) -> Result<bool> {
        check_dim(self.dim(), set.dim())?;
        let member = set.membership();
        for p in &self.parts {
            let idx: Vec<usize> = p.iter().collect();
            // Adjacent transpositions generate the symmetric group on the part.
            for w in idx.windows(2) {
                if !set
                    .iter()
                    .all(|a| member.contains(a.swap(w[0], w[1]).packed()))
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// True iff `π(P) = P` for every part.
    pub fn is_pointwise_fixed_by(&self, pi: &PositionPerm) -> bool {
        self.parts.iter().all(|&p| pi.apply_set(p) == p)
    }

    /// True iff `π` maps every part onto a part.
    pub fn is_setwise_fixed_by(&self, pi: &PositionPerm) -> bool {
        self.induced_part_perm(pi).is_some()
    }

    /// The permutation of parts induced by `π` (`images[i]` is the index of
    /// `π(parts[i])`), or `None` if some part is not mapped onto a part.
    pub fn induced_part_perm(&self, pi: &PositionPerm) -> Option<Vec<usize>> {
        let table = self.index_table();
        let mut images = Vec::with_capacity(self.len());
        for &p in &self.parts {
            let q = pi.apply_set(p);
            let j = table[q.first()?] as usize;
            if self.parts[j] != q {
                return None;
            }
            images.push(j);
        }
        Some(images)
    }

    /// Image partition `{π(P)}`.
    pub fn apply(&self, pi: &PositionPerm) -> Result<Partition> {
        check_dim(self.dim(), pi.degree())?;
        Ok(Partition::from_parts_unchecked(
            self.dim(),
            self.parts.iter().map(|&p| pi.apply_set(p)).collect(),
        ))
    }
}

impl fmt::Display for Partition {
    /// `{1,2}|{3}|{4}`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for raw in s.trim().split('|') {
            let inner = raw
                .trim()
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| Error::InvalidPartition(format!("bad part {raw:?}")))?;
            let block = inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidPartition(format!("bad position {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        Partition::from_blocks(n, &blocks)
    }
}

impl Serialize for Partition {
    /// JSON array of 1-based blocks.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks: Vec<Vec<usize>> = self
            .parts
            .iter()
            .map(|p| p.iter().map(|k| k + 1).collect())
            .collect();
        blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        Partition::from_blocks(n, &blocks).map_err(serde::de::Error::custom)
    }
}

pub fn intersect(p: &Partition, q: &Partition) -> Result<Partition> {
    p.intersect(q)
}

pub fn coarsen_join(p: &Partition, q: &Partition) -> Result<Partition> {
    p.coarsen_join(q)
}

/// True iff `p` refines `q`.
pub fn is_refinement(p: &Partition, q: &Partition) -> Result<bool> {
    p.refines(q)
}

pub fn supports(p: &Partition, set: &StringSet) -> Result<bool> {
    p.supports(set)
}

pub fn singleton_positions(p: &Partition) -> PosSet {
    p.singleton_positions()
}

/// The coarsest partition whose pointwise stabilizer stabilizes `set`:
/// connected components of the graph joining `i, j` whenever the
/// transposition `(i j)` maps `set` onto itself.
pub fn coarsest_supporting_partition(set: &StringSet) -> Result<Partition> {
    if set.is_empty() {
        return Err(Error::Empty("coarsest supporting partition of an empty set"));
    }
    let n = set.dim();
    let member = set.membership();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(comp: &mut [usize], mut x: usize) -> usize {
        while comp[x] != x {
            comp[x] = comp[comp[x]];
            x = comp[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if root(&mut comp, i) == root(&mut comp, j) {
                continue;
            }
            if set.iter().all(|a| member.contains(a.swap(i, j).packed())) {
                let (ri, rj) = (root(&mut comp, i), root(&mut comp, j));
                comp[rj] = ri;
            }
        }
    }
    let mut parts = vec![PosSet::EMPTY; n];
    for k in 0..n {
        let r = root(&mut comp, k);
        parts[r] = parts[r].union(PosSet::singleton(k));
    }
    parts.retain(|p| !p.is_empty());
    Ok(Partition::from_parts_unchecked(n, parts))
}

/// `⊓A`: intersection of the 0/1 splits of all strings of `set`.
pub fn intersect_family(set: &StringSet) -> Result<Partition> {
    let mut it = set.iter();
    let first = it
        .next()
        .ok_or(Error::Empty("intersection over an empty string set"))?;
    let mut acc = Partition::of_string(*first);
    for &a in it {
        acc = acc.intersect(&Partition::of_string(a))?;
    }
    Ok(acc)
}

/// Every partition of `[n]`, generated from restricted growth strings.
pub fn all_partitions(n: usize) -> Result<Vec<Partition>> {
    check_n(n)?;
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut parts = vec![PosSet::EMPTY; blocks];
        for (k, &b) in rgs.iter().enumerate() {
            parts[b] = parts[b].union(PosSet::singleton(k));
        }
        out.push(Partition::from_parts_unchecked(n, parts));
        // next restricted growth string
        let mut i = n;
        loop {
            if i <= 1 {
                return Ok(out);
            }
            i -= 1;
            let bound = rgs[..i].iter().copied().max().unwrap_or(0) + 1;
            if rgs[i] < bound {
                rgs[i] += 1;
                for x in rgs.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn set(words: &[&str]) -> StringSet {
        StringSet::parse(words).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p = part("{3}|{1,2}|{4}");
        assert_eq!(p.to_string(), "{1,2}|{3}|{4}");
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[1,2],[3],[4]]");
        let back: Partition = serde_json::from_str("[[3],[1,2],[4]]").unwrap();
        assert_eq!(back, p);
        assert!("{1,2}|{2,3}".parse::<Partition>().is_err());
        assert!("{1}|{3}".parse::<Partition>().is_err());
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(
            part("{1,2}|{3,4}").intersect(&part("{1}|{2,3}|{4}")).unwrap(),
            part("{1}|{2}|{3}|{4}")
        );
        let p = part("{1,3}|{2}|{4}");
        assert_eq!(p.intersect(&p).unwrap(), p);
        assert_eq!(
            part("{1,2,3,4}").intersect(&part("{1,2}|{3,4}")).unwrap(),
            part("{1,2}|{3,4}")
        );
        assert!(part("{1,2}").intersect(&part("{1,2,3}")).is_err());
    }

    #[test]
    fn join_examples() {
        assert_eq!(
            part("{1,2}|{3}|{4}").coarsen_join(&part("{2,3}|{1}|{4}")).unwrap(),
            part("{1,2,3}|{4}")
        );
        let p = part("{1,4}|{2}|{3}");
        assert_eq!(p.coarsen_join(&p).unwrap(), p);
        let d = Partition::discrete(4).unwrap();
        assert_eq!(d.coarsen_join(&p).unwrap(), p);
    }

    #[test]
    fn refinement_examples() {
        let d = Partition::discrete(3).unwrap();
        assert!(d.refines(&part("{1,3}|{2}")).unwrap());
        assert!(!part("{1,2}|{3}").refines(&d).unwrap());
        let (p, q) = (part("{1,2}|{3,4}"), part("{1,3}|{2,4}"));
        assert!(p.intersect(&q).unwrap().refines(&p).unwrap());
    }

    #[test]
    fn supports_examples() {
        let any = set(&["011", "100"]);
        assert!(Partition::discrete(3).unwrap().supports(&any).unwrap());
        assert!(part("{1,2}").supports(&set(&["01", "10"])).unwrap());
        assert!(!part("{1,2}").supports(&set(&["01"])).unwrap());
    }

    #[test]
    fn coarsest_support_examples() {
        assert_eq!(
            coarsest_supporting_partition(&set(&["0011"])).unwrap(),
            part("{1,2}|{3,4}")
        );
        assert_eq!(
            coarsest_supporting_partition(&set(&["01", "10"])).unwrap(),
            part("{1,2}")
        );
        assert_eq!(
            coarsest_supporting_partition(&StringSet::full(5).unwrap()).unwrap(),
            Partition::single_part(5).unwrap()
        );
        assert!(coarsest_supporting_partition(&StringSet::empty(3).unwrap()).is_err());
    }

    #[test]
    fn intersect_family_examples() {
        assert_eq!(
            intersect_family(&set(&["0011", "0101"])).unwrap(),
            Partition::discrete(4).unwrap()
        );
        assert_eq!(intersect_family(&set(&["00", "11"])).unwrap(), part("{1,2}"));
        let a: BitString = "0110".parse().unwrap();
        assert_eq!(
            intersect_family(&set(&["0110"])).unwrap(),
            Partition::of_string(a)
        );
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(
            Partition::discrete(4).unwrap().singleton_positions(),
            PosSet::full(4)
        );
        assert!(Partition::single_part(3)
            .unwrap()
            .singleton_positions()
            .is_empty());
        assert_eq!(part("{1}|{2,3}").singleton_positions(), PosSet::singleton(0));
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| all_partitions(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn induced_part_perm_detects_non_stabilizers() {
        let p = part("{1,2}|{3,4}");
        let swap_blocks: PositionPerm = "3 4 1 2".parse().unwrap();
        assert_eq!(p.induced_part_perm(&swap_blocks), Some(vec![1, 0]));
        let bad: PositionPerm = "3 2 1 4".parse().unwrap();
        assert_eq!(p.induced_part_perm(&bad), None);
    }
}
