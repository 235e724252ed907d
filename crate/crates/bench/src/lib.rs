//! Fixed instances shared by the benchmarks.

use orbitlab::preorder::{lex_block_preorder, random_block_preorder};
use orbitlab::{BitString, OrderedPartition, StringSet};

/// Seeded random blocks of size n.
pub fn random_blocks(n: usize) -> OrderedPartition {
    random_block_preorder(n, 1, 42).expect("n within range")
}

pub fn lex_blocks(n: usize) -> OrderedPartition {
    lex_block_preorder(n, 1).expect("n within range")
}

/// Every string of weight at most 2 that starts with a 1.
pub fn sparse_set(n: usize) -> StringSet {
    let all = BitString::all(n).expect("n within range");
    StringSet::new(n, all.filter(|v| v.weight() <= 2 && v.bit(0))).expect("same length")
}
