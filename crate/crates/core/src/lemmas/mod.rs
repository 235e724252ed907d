//! Executable versions of the counting constructions behind the orbit bounds,
//! and exact evaluators for the bounds themselves.

mod an;
mod bounds;
mod jn;

use num_bigint::BigUint;
use num_traits::One;

pub use an::{
    build_an, gamma_p, gamma_p_bound, p_big2_positions, p_big2_rigidity_check, potential,
    q_assignment, AnTrace, QAssignment,
};
pub use bounds::{
    growth_report, stab_bound_report, stab_bound_report_for_class, BoundEntry, BoundId,
    BoundParams, BoundReport, GrowthRow, GROWTH_CSV_HEADER,
};
pub use jn::{
    build_jn, check_nonsingleton_bound, jn_gamma_bound, JnBound, JnTrace, NonsingletonReport,
};

pub fn factorial_big(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `⌊8·log₂ n⌋`, the non-singleton allowance for preorders with small classes.
pub fn nonsingleton_allowance(n: usize) -> usize {
    (8.0 * (n as f64).log2()).floor().max(0.0) as usize
}
