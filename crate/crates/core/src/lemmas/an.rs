use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use super::factorial_big;
use crate::bits::{BitString, PosSet, StringSet};
use crate::error::{check_dim, Error, Result};
use crate::group::SymEngine;
use crate::partition::{coarsest_supporting_partition, Partition};
use crate::perm::PositionPerm;

/// `Σ_P max(|P ∩ S| − 2, 0)`.
pub fn potential(p: &Partition, s: PosSet) -> usize {
    p.parts()
        .iter()
        .map(|&q| q.intersect(s).len().saturating_sub(2))
        .sum()
}

/// A small subset `A ⊆ B` whose string partition is fine enough on the
/// singleton positions `S` of `SP(B)`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AnTrace {
    pub n: usize,
    /// Singleton positions of `SP(B)`.
    pub singletons: PosSet,
    pub chosen: Vec<BitString>,
    /// Potential before the first step and after each step.
    pub potentials: Vec<usize>,
    /// `⊓_{a ∈ A} {0(a), 1(a)}`.
    pub final_partition: Partition,
}

impl AnTrace {
    pub fn chosen_set(&self) -> StringSet {
        StringSet::new(self.n, self.chosen.iter().copied()).expect("strings share n")
    }
}

fn big_parts(p: &Partition, s: PosSet) -> Vec<PosSet> {
    p.parts()
        .iter()
        .map(|&q| q.intersect(s))
        .filter(|q| q.len() > 2)
        .collect()
}

/// A remaining string qualifies for the part restriction `target` if it is
/// non-constant there and either splits two large restrictions at once or is
/// not imbalanced on `target`.
fn qualifies(b: BitString, target: PosSet, big: &[PosSet]) -> bool {
    if b.is_constant_on(target) {
        return false;
    }
    let split = big.iter().filter(|&&q| !b.is_constant_on(q)).count();
    split >= 2 || !b.is_imbalanced_on(target)
}

/// Does every part of `partition` meet one of the two output conditions?
fn final_conditions_hold(
    b: &StringSet,
    chosen: &StringSet,
    partition: &Partition,
    s: PosSet,
) -> Option<String> {
    let big = big_parts(partition, s);
    for &target in &big {
        for &x in b.iter().filter(|x| !chosen.contains(x)) {
            if x.is_constant_on(target) {
                continue;
            }
            let others_constant = big
                .iter()
                .filter(|&&q| q != target)
                .all(|&q| x.is_constant_on(q));
            if !(x.is_imbalanced_on(target) && others_constant) {
                return Some(format!("string {x} violates both conditions on {target}"));
            }
        }
    }
    None
}

/// Stepwise construction: while some part restricted to `S` has more than two
/// positions, add the lexicographically least qualifying string. The result
/// is verified before it is returned.
pub fn build_an(b: &StringSet) -> Result<AnTrace> {
    if b.is_empty() {
        return Err(Error::Empty("string set"));
    }
    let n = b.dim();
    let s = coarsest_supporting_partition(b)?.singleton_positions();
    let mut current = Partition::single_part(n)?;
    let mut chosen: Vec<BitString> = Vec::new();
    let mut potentials = vec![potential(&current, s)];
    loop {
        let big = big_parts(&current, s);
        if big.is_empty() {
            break;
        }
        let next = b
            .iter()
            .copied()
            .find(|&x| big.iter().any(|&target| qualifies(x, target, &big)));
        let Some(a) = next else { break };
        chosen.push(a);
        current = current.intersect(&Partition::of_string(a))?;
        potentials.push(potential(&current, s));
    }

    let fail = |detail: String| Error::Postcondition {
        construction: "subset selection",
        detail,
    };
    if 2 * chosen.len() > s.len() {
        return Err(fail(format!(
            "{} strings chosen for {} singleton positions",
            chosen.len(),
            s.len()
        )));
    }
    if let Some(w) = potentials.windows(2).find(|w| w[0] < w[1] + 2) {
        return Err(fail(format!("potential dropped from {} to {}", w[0], w[1])));
    }
    let chosen_set = StringSet::new(n, chosen.iter().copied())?;
    if let Some(detail) = final_conditions_hold(b, &chosen_set, &current, s) {
        return Err(fail(detail));
    }
    Ok(AnTrace {
        n,
        singletons: s,
        chosen,
        potentials,
        final_partition: current,
    })
}

/// Forced target parts for every position: `Q(k)` is the part of `⊓A` that
/// any realizer must send `k` into.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum QAssignment {
    Feasible(Vec<PosSet>),
    Infeasible,
}

fn check_pairs(b: &StringSet, pairs: &[(BitString, BitString)]) -> Result<()> {
    let mut images = Vec::with_capacity(pairs.len());
    for &(a, pa) in pairs {
        check_dim(b.dim(), a.len())?;
        check_dim(b.dim(), pa.len())?;
        if !b.contains(&a) || !b.contains(&pa) {
            return Err(Error::InvalidParameter(format!(
                "pair ({a}, {pa}) leaves the string set"
            )));
        }
        images.push(pa);
    }
    let mut domain: Vec<_> = pairs.iter().map(|p| p.0).collect();
    domain.sort_unstable();
    images.sort_unstable();
    if domain.windows(2).any(|w| w[0] == w[1]) || images.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter("assignment is not injective".into()));
    }
    Ok(())
}

/// Builds `Q_p` one pair `(a, p(a))` at a time: positions where `p(a)` has a
/// 0 must land on 0-positions of `a`, and likewise for 1s.
pub fn q_assignment(b: &StringSet, pairs: &[(BitString, BitString)]) -> Result<QAssignment> {
    check_pairs(b, pairs)?;
    let n = b.dim();
    let mut q = vec![PosSet::full(n); n];
    for &(a, pa) in pairs {
        if a.weight() != pa.weight() {
            return Ok(QAssignment::Infeasible);
        }
        for (k, slot) in q.iter_mut().enumerate() {
            let side = if pa.bit(k) { a.ones_set() } else { a.zeros_set() };
            *slot = slot.intersect(side);
            if slot.is_empty() {
                return Ok(QAssignment::Infeasible);
            }
        }
    }
    // A bijection needs |Q⁻¹(P)| = |P| for every target part.
    let mut preimage: HashMap<u32, usize> = HashMap::new();
    for part in &q {
        *preimage.entry(part.0).or_default() += 1;
    }
    if preimage.iter().any(|(&mask, &cnt)| PosSet(mask).len() != cnt) {
        return Ok(QAssignment::Infeasible);
    }
    Ok(QAssignment::Feasible(q))
}

/// `{π ∈ Stab(B) | π(p(a)) = a for every pair}`.
pub fn gamma_p(
    engine: &SymEngine,
    b: &StringSet,
    pairs: &[(BitString, BitString)],
) -> Result<Vec<PositionPerm>> {
    check_pairs(b, pairs)?;
    let member = b.membership();
    let shards = engine.map_shards(b.dim(), |it| {
        it.filter(|pi| {
            pairs
                .iter()
                .all(|&(a, pa)| pi.apply_packed(pa.packed()) == a.packed())
                && b.iter().all(|&x| member.contains(pi.apply_packed(x.packed())))
        })
        .collect::<Vec<_>>()
    })?;
    Ok(shards.into_iter().flatten().collect())
}

/// `2^⌊|S|/2⌋ · (n − |S|)!`.
pub fn gamma_p_bound(n: usize, singletons: usize) -> BigUint {
    factorial_big(n - singletons) << (singletons / 2)
}

/// Positions of `S` whose part in the trace's partition keeps more than two
/// positions of `S`.
pub fn p_big2_positions(trace: &AnTrace) -> PosSet {
    big_parts(&trace.final_partition, trace.singletons)
        .into_iter()
        .fold(PosSet::EMPTY, PosSet::union)
}

/// Over `Γ_p`, preimages of the positions outside `P_{>2}` determine the
/// preimages inside it.
pub fn p_big2_rigidity_check(
    engine: &SymEngine,
    b: &StringSet,
    trace: &AnTrace,
    pairs: &[(BitString, BitString)],
) -> Result<bool> {
    let members = gamma_p(engine, b, pairs)?;
    if members.len() <= 1 {
        return Ok(true);
    }
    let n = b.dim();
    let big = p_big2_positions(trace);
    let mut seen: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
    for pi in &members {
        let inv = pi.inverse();
        let (mut outside, mut inside) = (Vec::new(), Vec::new());
        for k in 0..n {
            let pre = inv.image(k) as u8;
            if big.contains(k) {
                inside.push(pre);
            } else {
                outside.push(pre);
            }
        }
        match seen.get(&outside) {
            Some(prev) if *prev != inside => return Ok(false),
            Some(_) => {}
            None => {
                seen.insert(outside, inside);
            }
        }
    }
    Ok(true)
}
