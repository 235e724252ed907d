//! Brute-force permutation group engine over `Sym_n`.
//!
//! `Sym_n` is split into `n` shards by the image of position 1. Inside a
//! shard the remaining images are enumerated with Heap's algorithm, so
//! consecutive permutations differ by one swap. Shards are independent and
//! are evaluated with rayon; results are merged in shard order, which keeps
//! every output deterministic regardless of the thread count.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{check_n, StringSet, MAX_DIM};
use crate::error::{check_dim, Error, Result};
use crate::partition::Partition;
use crate::perm::PositionPerm;
use crate::preorder::OrderedPartition;

/// Default largest `n` for which `Sym_n` is enumerated (10! ≈ 3.6M).
pub const DEFAULT_CAP: usize = 10;

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Permutations of one shard: `π(1) = first`, the rest in Heap order.
pub struct ShardIter {
    first: u8,
    rest: Vec<u8>,
    c: Vec<usize>,
    i: usize,
    started: bool,
    scratch: Vec<u8>,
}

impl ShardIter {
    fn new(n: usize, first: usize) -> Self {
        let rest: Vec<u8> = (0..n as u8).filter(|&x| x != first as u8).collect();
        let m = rest.len();
        ShardIter {
            first: first as u8,
            rest,
            c: vec![0; m],
            i: 1,
            started: false,
            scratch: Vec::with_capacity(n),
        }
    }

    fn current(&mut self) -> PositionPerm {
        self.scratch.clear();
        self.scratch.push(self.first);
        self.scratch.extend_from_slice(&self.rest);
        PositionPerm::from_slice_unchecked(&self.scratch)
    }
}

impl Iterator for ShardIter {
    type Item = PositionPerm;

    fn next(&mut self) -> Option<PositionPerm> {
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        let m = self.rest.len();
        while self.i < m {
            let i = self.i;
            if self.c[i] < i {
                if i.is_multiple_of(2) {
                    self.rest.swap(0, i);
                } else {
                    self.rest.swap(self.c[i], i);
                }
                self.c[i] += 1;
                self.i = 1;
                return Some(self.current());
            }
            self.c[i] = 0;
            self.i += 1;
        }
        None
    }
}

/// Enumerates `Sym_n` exhaustively up to a configurable cap.
#[derive(Clone, Copy, Debug)]
pub struct SymEngine {
    cap: usize,
}

impl Default for SymEngine {
    fn default() -> Self {
        SymEngine { cap: DEFAULT_CAP }
    }
}

impl SymEngine {
    pub fn with_cap(cap: usize) -> Self {
        SymEngine {
            cap: cap.min(MAX_DIM),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn check(&self, n: usize) -> Result<()> {
        check_n(n)?;
        if n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }

    /// All `n!` permutations, shard by shard.
    pub fn enumerate(&self, n: usize) -> Result<impl Iterator<Item = PositionPerm>> {
        self.check(n)?;
        Ok((0..n).flat_map(move |f| ShardIter::new(n, f)))
    }

    /// Runs `f` on every shard (possibly in parallel); results in shard order.
    pub fn map_shards<T, F>(&self, n: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(ShardIter) -> T + Sync,
    {
        self.check(n)?;
        Ok((0..n)
            .into_par_iter()
            .map(|first| f(ShardIter::new(n, first)))
            .collect())
    }

    pub fn count_where<F>(&self, n: usize, pred: F) -> Result<u64>
    where
        F: Fn(&PositionPerm) -> bool + Sync,
    {
        Ok(self
            .map_shards(n, |it| it.filter(|p| pred(p)).count() as u64)?
            .into_iter()
            .sum())
    }

    /// The subgroup `{π | pred(π)}`; `pred` must define a subgroup.
    pub fn subgroup<F>(&self, n: usize, pred: F) -> Result<PermGroup>
    where
        F: Fn(&PositionPerm) -> bool + Sync,
    {
        let found: Vec<PositionPerm> = self
            .map_shards(n, |it| it.filter(|p| pred(p)).collect::<Vec<_>>())?
            .into_iter()
            .flatten()
            .collect();
        if found.len() as u64 == factorial(n) {
            Ok(PermGroup::symmetric(n)?)
        } else {
            PermGroup::from_elements(n, found)
        }
    }

    /// `Stab(A) = {π | π(A) = A}`.
    pub fn stabilizer_of_set(&self, set: &StringSet) -> Result<PermGroup> {
        let member = set.membership();
        self.subgroup(set.dim(), |pi| {
            set.iter().all(|&a| member.contains(pi.apply_packed(a.packed())))
        })
    }

    /// Simultaneous stabilizer of several sets of one dimension.
    pub fn stabilizer_of_sets(&self, n: usize, sets: &[StringSet]) -> Result<PermGroup> {
        for s in sets {
            check_dim(n, s.dim())?;
        }
        let members: Vec<_> = sets.iter().map(|s| s.membership()).collect();
        self.subgroup(n, |pi| {
            sets.iter().zip(&members).all(|(s, m)| {
                s.iter().all(|&a| m.contains(pi.apply_packed(a.packed())))
            })
        })
    }

    /// Permutations fixing every colour class setwise.
    pub fn stabilizer_of_ordered_partition(&self, p: &OrderedPartition) -> Result<PermGroup> {
        let table = p.class_table();
        self.subgroup(p.dim(), |pi| fixes_classes(pi, &table))
    }

    pub fn stabilizer_order_ordered_partition(&self, p: &OrderedPartition) -> Result<u64> {
        let table = p.class_table();
        self.count_where(p.dim(), |pi| fixes_classes(pi, &table))
    }

    /// `n! / |Stab(𝒫)|`.
    pub fn orbit_size_ordered_partition(&self, p: &OrderedPartition) -> Result<u64> {
        let stab = self.stabilizer_order_ordered_partition(p)?;
        Ok(factorial(p.dim()) / stab)
    }

    /// Counts the distinct images `π(𝒫)` directly, without the stabilizer.
    pub fn direct_orbit_ordered_partition(&self, p: &OrderedPartition) -> Result<u64> {
        let table = p.class_table();
        let shards = self.map_shards(p.dim(), |it| {
            let mut seen: HashSet<Vec<u16>> = HashSet::new();
            for pi in it {
                let mut img = vec![0u16; table.len()];
                for (v, &cls) in table.iter().enumerate() {
                    img[pi.apply_packed(v as u32) as usize] = cls;
                }
                seen.insert(img);
            }
            seen
        })?;
        let mut all = HashSet::new();
        for s in shards {
            all.extend(s);
        }
        Ok(all.len() as u64)
    }

    /// `Stab•(P)`: permutations keeping every part in place.
    pub fn pointwise_stabilizer(&self, p: &Partition) -> Result<PermGroup> {
        self.subgroup(p.dim(), |pi| p.is_pointwise_fixed_by(pi))
    }

    /// `Stab(P)`: permutations permuting the parts among themselves.
    pub fn setwise_stabilizer(&self, p: &Partition) -> Result<PermGroup> {
        self.subgroup(p.dim(), |pi| p.is_setwise_fixed_by(pi))
    }
}

#[inline]
fn fixes_classes(pi: &PositionPerm, table: &[u16]) -> bool {
    table
        .iter()
        .enumerate()
        .all(|(v, &c)| table[pi.apply_packed(v as u32) as usize] == c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Members {
    Symmetric,
    Explicit(Vec<PositionPerm>),
}

/// A permutation group on `[n]`: either all of `Sym_n` or an explicit
/// sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    members: Members,
}

impl PermGroup {
    pub fn symmetric(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(PermGroup {
            n,
            members: Members::Symmetric,
        })
    }

    pub fn from_elements(n: usize, mut elements: Vec<PositionPerm>) -> Result<Self> {
        check_n(n)?;
        for e in &elements {
            check_dim(n, e.degree())?;
        }
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::Empty("permutation group without elements"));
        }
        let g = PermGroup {
            n,
            members: Members::Explicit(elements),
        };
        debug_assert!(g.order() > 1000 || g.is_closed(), "element list is not a group");
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        match &self.members {
            Members::Symmetric => factorial(self.n),
            Members::Explicit(e) => e.len() as u64,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.members {
            Members::Symmetric => true,
            Members::Explicit(e) => e.len() as u64 == factorial(self.n),
        }
    }

    pub fn contains(&self, pi: &PositionPerm) -> bool {
        if pi.degree() != self.n {
            return false;
        }
        match &self.members {
            Members::Symmetric => true,
            Members::Explicit(e) => e.binary_search(pi).is_ok(),
        }
    }

    /// Elements in sorted order (enumerates `Sym_n` for the symmetric tag).
    pub fn elements(&self) -> Vec<PositionPerm> {
        match &self.members {
            Members::Symmetric => {
                let mut all: Vec<_> = (0..self.n)
                    .flat_map(|f| ShardIter::new(self.n, f))
                    .collect();
                all.sort_unstable();
                all
            }
            Members::Explicit(e) => e.clone(),
        }
    }

    /// Element-wise containment `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        if self.n != other.n {
            return false;
        }
        match (&self.members, &other.members) {
            (_, Members::Symmetric) => true,
            (Members::Symmetric, Members::Explicit(_)) => other.is_symmetric(),
            (Members::Explicit(e), Members::Explicit(_)) => e.iter().all(|p| other.contains(p)),
        }
    }

    fn is_closed(&self) -> bool {
        let elems = self.elements();
        elems.iter().all(|a| {
            self.contains(&a.inverse())
                && elems
                    .iter()
                    .all(|b| self.contains(&a.compose(b).expect("same degree")))
        })
    }

    /// A generating set found by greedy sifting: an element becomes a
    /// generator when it lies outside the closure of the ones chosen so far.
    pub fn generators(&self) -> Vec<PositionPerm> {
        let n = self.n;
        if let Members::Symmetric = self.members {
            if n == 1 {
                return vec![];
            }
            let swap = PositionPerm::transposition(n, 0, 1).expect("n >= 2");
            if n == 2 {
                return vec![swap];
            }
            let cycle: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
            return vec![swap, PositionPerm::from_images(&cycle).expect("cycle")];
        }
        let id = PositionPerm::identity(n).expect("valid degree");
        let mut closure: HashSet<u64> = HashSet::from([id.key()]);
        let mut list = vec![id];
        let mut gens: Vec<PositionPerm> = Vec::new();
        for g in self.elements() {
            if closure.contains(&g.key()) {
                continue;
            }
            gens.push(g);
            let mut queue: VecDeque<PositionPerm> = list.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for s in &gens {
                    let y = x.compose(s).expect("same degree");
                    if closure.insert(y.key()) {
                        list.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            n: self.n,
            order: self.order(),
            generators: self.generators().iter().map(|g| g.to_string()).collect(),
        }
    }
}

/// JSON form `{ "n", "order", "generators" }`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GroupSummary {
    pub n: usize,
    pub order: u64,
    pub generators: Vec<String>,
}

/// Convenience wrapper over [`SymEngine::enumerate`] with the default cap.
pub fn enumerate_sym(n: usize) -> Result<impl Iterator<Item = PositionPerm>> {
    SymEngine::default().enumerate(n)
}
