use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::{factorial_big, nonsingleton_allowance};
use crate::bits::PosSet;
use crate::error::{Error, Result};
use crate::partition::{coarsest_supporting_partition, Partition};
use crate::preorder::OrderedPartition;

/// Greedy selection of colour classes whose supports jointly individualize
/// every globally singleton position.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct JnTrace {
    pub n: usize,
    /// 0-based class indices in the order they were added.
    pub chosen: Vec<usize>,
    /// Part-count increase of the running intersection at each step.
    pub increases: Vec<usize>,
    /// Singletons of the intersection over all class supports.
    pub target: PosSet,
    pub final_partition: Partition,
}

impl JnTrace {
    pub fn steps(&self) -> usize {
        self.chosen.len()
    }
}

/// Adds, lowest index first, any class whose support splits the running
/// intersection, until every position of `target` is a singleton.
pub fn build_jn(p: &OrderedPartition) -> Result<JnTrace> {
    let n = p.dim();
    let supports = p
        .classes()
        .iter()
        .map(coarsest_supporting_partition)
        .collect::<Result<Vec<_>>>()?;
    let mut meet = Partition::single_part(n)?;
    for sp in &supports {
        meet = meet.intersect(sp)?;
    }
    let target = meet.singleton_positions();

    let mut current = Partition::single_part(n)?;
    let mut chosen = Vec::new();
    let mut increases = Vec::new();
    while !target.is_subset(current.singleton_positions()) {
        let step = supports.iter().enumerate().find_map(|(i, sp)| {
            let next = current.intersect(sp).expect("same dimension");
            (next.len() > current.len()).then_some((i, next))
        });
        // The full family individualizes `target`, so some class still refines.
        let (i, next) = step.ok_or_else(|| Error::Postcondition {
            construction: "class selection",
            detail: format!("no refining class left at {current}"),
        })?;
        increases.push(next.len() - current.len());
        chosen.push(i);
        current = next;
    }
    Ok(JnTrace {
        n,
        chosen,
        increases,
        target,
        final_partition: current,
    })
}

/// The two bounds on the number of realizable support-permutation tuples
/// over the selected classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JnBound {
    /// `∏ (min(k_i + 1, f))!` over the trace.
    pub product: BigUint,
    /// `(f!)^⌈n/(f−1)⌉ · 2^n`.
    pub closed_form: BigUint,
}

pub fn jn_gamma_bound(trace: &JnTrace, f: usize) -> Result<JnBound> {
    if f < 2 {
        return Err(Error::InvalidParameter(format!(
            "support-size bound f = {f} must be at least 2"
        )));
    }
    let product = trace
        .increases
        .iter()
        .fold(BigUint::one(), |acc, &k| acc * factorial_big((k + 1).min(f)));
    Ok(JnBound {
        product,
        closed_form: tuple_count_closed_form(trace.n, f),
    })
}

pub(crate) fn tuple_count_closed_form(n: usize, f: usize) -> BigUint {
    let exp = n.div_ceil(f - 1) as u32;
    factorial_big(f).pow(exp) << n
}

/// Size of the non-singleton region of the global intersection against
/// `8·log₂ n`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NonsingletonReport {
    pub n: usize,
    pub nonsingleton_positions: usize,
    pub threshold: f64,
    pub holds: bool,
    /// Whether every class has at most `c·n` strings; the comparison is only
    /// meaningful when it does.
    pub size_hypothesis_ok: bool,
    pub c: u64,
}

pub fn check_nonsingleton_bound(p: &OrderedPartition, c: u64) -> Result<NonsingletonReport> {
    let n = p.dim();
    let mut meet = Partition::single_part(n)?;
    for cls in p.classes() {
        meet = meet.intersect(&coarsest_supporting_partition(cls)?)?;
    }
    let nonsingleton = n - meet.singleton_positions().len();
    let threshold = 8.0 * (n as f64).log2();
    Ok(NonsingletonReport {
        n,
        nonsingleton_positions: nonsingleton,
        threshold,
        holds: (nonsingleton as f64) < threshold,
        size_hypothesis_ok: p.max_class_size() as u64 <= c * n as u64,
        c,
    })
}

pub(crate) fn nonsingleton_fits_allowance(report: &NonsingletonReport) -> bool {
    report.holds && report.nonsingleton_positions <= nonsingleton_allowance(report.n)
}
