//! Realizability of simultaneous part permutations of coarsest supports.
//!
//! For string sets `A_1..A_m`, a permutation `π` of positions realizes a tuple
//! `σ̄ = (σ_1..σ_m)` when it maps every part `P` of `SP(A_i)` onto `σ_i(P)`.
//! Part permutations are stored as index images into the canonical part order
//! of the partition they act on.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bits::StringSet;
use crate::error::{check_dim, Error, Result};
use crate::group::SymEngine;
use crate::partition::{coarsest_supporting_partition, Partition};
use crate::perm::PositionPerm;

/// Images of part indices: `perm[i]` is the index of `σ(parts[i])`.
pub type PartPerm = Vec<usize>;

/// One part permutation per string set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PartPermTuple(pub Vec<PartPerm>);

impl PartPermTuple {
    pub fn identity(family: &SupportFamily) -> Self {
        PartPermTuple(
            family
                .supports()
                .iter()
                .map(|sp| (0..sp.len()).collect())
                .collect(),
        )
    }
}

/// Result of the inductive construction of the induced permutation on `⊓ SP(A_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaOutcome {
    Induced(PartPerm),
    /// Some constructed image is empty, is not a part, or collides with another.
    Unrealizable,
}

/// String sets of one dimension together with their coarsest supports and
/// the intersection of those supports.
#[derive(Clone, Debug)]
pub struct SupportFamily {
    n: usize,
    sets: Vec<StringSet>,
    supports: Vec<Partition>,
    meet: Partition,
}

impl SupportFamily {
    pub fn new(n: usize, sets: Vec<StringSet>) -> Result<Self> {
        let mut meet = Partition::single_part(n)?;
        let mut supports = Vec::with_capacity(sets.len());
        for s in &sets {
            check_dim(n, s.dim())?;
            let sp = coarsest_supporting_partition(s)?;
            meet = meet.intersect(&sp)?;
            supports.push(sp);
        }
        Ok(SupportFamily {
            n,
            sets,
            supports,
            meet,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[StringSet] {
        &self.sets
    }

    pub fn supports(&self) -> &[Partition] {
        &self.supports
    }

    /// `⊓_i SP(A_i)` (the single part `[n]` for an empty family).
    pub fn meet(&self) -> &Partition {
        &self.meet
    }

    fn check_tuple(&self, sigma: &PartPermTuple) -> Result<()> {
        if sigma.0.len() != self.supports.len() {
            return Err(Error::InvalidParameter(format!(
                "tuple has {} components for {} sets",
                sigma.0.len(),
                self.supports.len()
            )));
        }
        for (s, sp) in sigma.0.iter().zip(&self.supports) {
            let mut seen = vec![false; sp.len()];
            if s.len() != sp.len() {
                return Err(Error::InvalidParameter(format!(
                    "component {s:?} does not act on {} parts",
                    sp.len()
                )));
            }
            for &x in s {
                if x >= sp.len() || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidParameter(format!(
                        "component {s:?} is not a bijection"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The tuple `π` induces, if it stabilizes every support setwise.
    pub fn induced_tuple(&self, pi: &PositionPerm) -> Option<PartPermTuple> {
        self.supports
            .iter()
            .map(|sp| sp.induced_part_perm(pi))
            .collect::<Option<Vec<_>>>()
            .map(PartPermTuple)
    }

    pub fn realizes(&self, pi: &PositionPerm, sigma: &PartPermTuple) -> Result<bool> {
        check_dim(self.n, pi.degree())?;
        self.check_tuple(sigma)?;
        Ok(self
            .supports
            .iter()
            .zip(&sigma.0)
            .all(|(sp, s)| {
                sp.parts()
                    .iter()
                    .zip(s)
                    .all(|(&p, &j)| pi.apply_set(p) == sp.parts()[j])
            }))
    }

    /// All tuples realized by at least one `π ∈ Sym_n`.
    pub fn realizable_tuples(&self, engine: &SymEngine) -> Result<BTreeSet<PartPermTuple>> {
        if self.sets.is_empty() {
            return Ok(BTreeSet::from([PartPermTuple(vec![])]));
        }
        let shards = engine.map_shards(self.n, |it| {
            it.filter_map(|pi| self.induced_tuple(&pi))
                .collect::<BTreeSet<_>>()
        })?;
        Ok(shards.into_iter().flatten().collect())
    }

    /// Every `π` realizing `σ̄`.
    pub fn realizers(
        &self,
        engine: &SymEngine,
        sigma: &PartPermTuple,
    ) -> Result<Vec<PositionPerm>> {
        self.check_tuple(sigma)?;
        let shards = engine.map_shards(self.n, |it| {
            it.filter(|pi| self.induced_tuple(pi).as_ref() == Some(sigma))
                .collect::<Vec<_>>()
        })?;
        Ok(shards.into_iter().flatten().collect())
    }

    /// Builds the permutation of the parts of `⊓ SP(A_i)` that every realizer
    /// of `σ̄` induces, one set at a time: a part `P` of the next intersection
    /// lies in `Q_P` (previous intersection) and `Q'_P` (next support), and is
    /// sent to `θ'(Q_P) ∩ σ_{m+1}(Q'_P)`.
    pub fn induced_theta(&self, sigma: &PartPermTuple) -> Result<ThetaOutcome> {
        self.check_tuple(sigma)?;
        let mut current = Partition::single_part(self.n)?;
        let mut theta: PartPerm = vec![0];
        for (sp, s) in self.supports.iter().zip(&sigma.0) {
            let next = current.intersect(sp)?;
            let next_table = next.index_table();
            let mut images = Vec::with_capacity(next.len());
            let mut hit = vec![false; next.len()];
            for &p in next.parts() {
                let k = p.first().expect("parts are non-empty");
                let q = current.part_index(k);
                let q2 = sp.part_index(k);
                let img = current.parts()[theta[q]].intersect(sp.parts()[s[q2]]);
                let Some(m) = img.first() else {
                    return Ok(ThetaOutcome::Unrealizable);
                };
                let j = next_table[m] as usize;
                if next.parts()[j] != img || std::mem::replace(&mut hit[j], true) {
                    return Ok(ThetaOutcome::Unrealizable);
                }
                images.push(j);
            }
            current = next;
            theta = images;
        }
        Ok(ThetaOutcome::Induced(theta))
    }
}

/// Does `π` realize `σ̄` on the coarsest supports of `sets`?
pub fn realizes(pi: &PositionPerm, sigma: &PartPermTuple, sets: &[StringSet]) -> Result<bool> {
    SupportFamily::new(pi.degree(), sets.to_vec())?.realizes(pi, sigma)
}

pub fn realizable_tuples(
    engine: &SymEngine,
    n: usize,
    sets: &[StringSet],
) -> Result<BTreeSet<PartPermTuple>> {
    SupportFamily::new(n, sets.to_vec())?.realizable_tuples(engine)
}

pub fn induced_theta(n: usize, sigma: &PartPermTuple, sets: &[StringSet]) -> Result<ThetaOutcome> {
    SupportFamily::new(n, sets.to_vec())?.induced_theta(sigma)
}
