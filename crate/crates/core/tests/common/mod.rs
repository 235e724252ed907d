//! Independent brute-force oracles. Strings are plain `Vec<u8>` of 0/1 and
//! permutations are image vectors, so nothing here goes through the library's
//! packed representations.
#![allow(dead_code)]

use orbitlab::{BitString, OrderedPartition, StringSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Word = Vec<u8>;

pub fn word(v: &BitString) -> Word {
    v.to_string().bytes().map(|b| b - b'0').collect()
}

pub fn words(set: &StringSet) -> Vec<Word> {
    let mut w: Vec<Word> = set.iter().map(word).collect();
    w.sort();
    w
}

/// The bit at position `j` moves to position `pi[j]`.
pub fn act(pi: &[usize], w: &[u8]) -> Word {
    let mut out = vec![0; w.len()];
    for (j, &b) in w.iter().enumerate() {
        out[pi[j]] = b;
    }
    out
}

pub fn act_set(pi: &[usize], set: &[Word]) -> Vec<Word> {
    let mut out: Vec<Word> = set.iter().map(|w| act(pi, w)).collect();
    out.sort();
    out
}

pub fn perms(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// All set partitions of `0..n`, each as sorted blocks.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(k: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == n {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(k);
            rec(k + 1, n, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![k]);
        rec(k + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

pub fn block_of(blocks: &[Vec<usize>], k: usize) -> usize {
    blocks.iter().position(|b| b.contains(&k)).unwrap()
}

pub fn fixes_blocks_pointwise(pi: &[usize], blocks: &[Vec<usize>]) -> bool {
    (0..pi.len()).all(|k| block_of(blocks, k) == block_of(blocks, pi[k]))
}

pub fn permutes_blocks(pi: &[usize], blocks: &[Vec<usize>]) -> bool {
    blocks.iter().all(|b| {
        let mut img: Vec<usize> = b.iter().map(|&k| pi[k]).collect();
        img.sort();
        blocks.contains(&img)
    })
}

/// `a` refines `b`: every block of `a` sits inside a block of `b`.
pub fn refines(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    a.iter()
        .all(|blk| blk.iter().all(|&k| block_of(b, k) == block_of(b, blk[0])))
}

/// Blocks in canonical order (by minimum), 1-based, for comparison with
/// `Partition::to_string`.
pub fn blocks_string(blocks: &[Vec<usize>]) -> String {
    let mut b: Vec<Vec<usize>> = blocks.to_vec();
    for blk in &mut b {
        blk.sort();
    }
    b.sort_by_key(|blk| blk[0]);
    b.iter()
        .map(|blk| {
            let inner: Vec<String> = blk.iter().map(|k| (k + 1).to_string()).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join("|")
}

pub fn random_set<R: Rng>(rng: &mut R, n: usize) -> StringSet {
    let total = 1usize << n;
    let size = rng.random_range(1..=total.min(12));
    let mut all: Vec<usize> = (0..total).collect();
    all.shuffle(rng);
    StringSet::new(
        n,
        all[..size]
            .iter()
            .map(|&r| BitString::from_lex_rank(n, r as u32).unwrap()),
    )
    .unwrap()
}

/// Random shuffle of `{0,1}^n` cut at random points.
pub fn random_ordered_partition<R: Rng>(rng: &mut R, n: usize) -> OrderedPartition {
    let mut all: Vec<BitString> = BitString::all(n).unwrap().collect();
    all.shuffle(rng);
    let mut classes = Vec::new();
    let mut rest = &all[..];
    while !rest.is_empty() {
        let take = rng.random_range(1..=rest.len().min(2 * n));
        let (head, tail) = rest.split_at(take);
        classes.push(StringSet::new(n, head.iter().copied()).unwrap());
        rest = tail;
    }
    OrderedPartition::new(n, classes).unwrap()
}
