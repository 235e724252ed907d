//! Bit strings over `{0,1}^n`, position sets, and finite sets of strings.
//!
//! Strings are packed LSB-first: position 1 (the leftmost character of the
//! textual form) is bit 0 of the word. Ordering is lexicographic on the
//! textual form, which is also the numeric order when the string is read as
//! a binary number with position 1 most significant.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};

/// Largest supported dimension for strings, permutations and partitions.
pub const MAX_DIM: usize = 16;

pub(crate) fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidDimension { n, max: MAX_DIM })
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A set of positions of `[n]`, stored as a bit mask (index 0 is position 1).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosSet(pub u32);

impl PosSet {
    pub const EMPTY: PosSet = PosSet(0);

    pub fn full(n: usize) -> Self {
        PosSet(low_mask(n))
    }

    pub fn singleton(idx: usize) -> Self {
        PosSet(1 << idx)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        PosSet(it.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    #[inline]
    pub fn contains(self, idx: usize) -> bool {
        self.0 >> idx & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Smallest index in the set.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    #[inline]
    pub fn intersect(self, other: PosSet) -> PosSet {
        PosSet(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: PosSet) -> PosSet {
        PosSet(self.0 | other.0)
    }

    #[inline]
    pub fn minus(self, other: PosSet) -> PosSet {
        PosSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: PosSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Display for PosSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, k) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", k + 1)?;
        }
        f.write_str("}")
    }
}

impl Serialize for PosSet {
    /// A 1-based array of positions.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|k| k + 1))
    }
}

impl fmt::Debug for PosSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A word in `{0,1}^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: u32,
    n: u8,
}

impl BitString {
    pub fn zeros(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(BitString { bits: 0, n: n as u8 })
    }

    pub fn ones(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(BitString {
            bits: low_mask(n),
            n: n as u8,
        })
    }

    /// Builds a string from its packed form (bit `i` is position `i + 1`).
    pub fn from_packed(n: usize, bits: u32) -> Result<Self> {
        check_n(n)?;
        if bits & !low_mask(n) != 0 {
            return Err(Error::InvalidBitString(format!(
                "packed value {bits:#x} has bits beyond dimension {n}"
            )));
        }
        Ok(BitString { bits, n: n as u8 })
    }

    #[inline]
    pub(crate) fn from_packed_unchecked(n: usize, bits: u32) -> Self {
        BitString { bits, n: n as u8 }
    }

    /// Builds the string whose lexicographic rank in `{0,1}^n` is `value`
    /// (position 1 is the most significant bit).
    pub fn from_lex_rank(n: usize, value: u32) -> Result<Self> {
        check_n(n)?;
        if value & !low_mask(n) != 0 {
            return Err(Error::InvalidBitString(format!(
                "rank {value} out of range for n = {n}"
            )));
        }
        Ok(BitString {
            bits: value.reverse_bits() >> (32 - n),
            n: n as u8,
        })
    }

    /// Lexicographic rank, inverse of [`BitString::from_lex_rank`].
    #[inline]
    pub fn lex_rank(self) -> u32 {
        self.bits.reverse_bits() >> (32 - self.n as u32)
    }

    #[inline]
    pub fn packed(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn len(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.n == 0
    }

    /// Bit at 0-based index `idx`.
    #[inline]
    pub fn bit(self, idx: usize) -> bool {
        self.bits >> idx & 1 == 1
    }

    pub fn with_bit(self, idx: usize, value: bool) -> Self {
        let bits = if value {
            self.bits | 1 << idx
        } else {
            self.bits & !(1 << idx)
        };
        BitString { bits, ..self }
    }

    #[inline]
    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn xor(self, other: BitString) -> Result<Self> {
        check_dim(self.len(), other.len())?;
        Ok(BitString {
            bits: self.bits ^ other.bits,
            n: self.n,
        })
    }

    /// Exchanges the bits at indices `i` and `j`.
    #[inline]
    pub fn swap(self, i: usize, j: usize) -> Self {
        let d = (self.bits >> i ^ self.bits >> j) & 1;
        BitString {
            bits: self.bits ^ (d << i | d << j),
            n: self.n,
        }
    }

    /// Positions holding a 1.
    #[inline]
    pub fn ones_set(self) -> PosSet {
        PosSet(self.bits)
    }

    /// Positions holding a 0.
    #[inline]
    pub fn zeros_set(self) -> PosSet {
        PosSet(!self.bits & low_mask(self.len()))
    }

    /// True when all positions in `set` carry the same bit.
    #[inline]
    pub fn is_constant_on(self, set: PosSet) -> bool {
        let m = self.bits & set.0;
        m == 0 || m == set.0
    }

    /// True when exactly one position of `set` differs from the others.
    pub fn is_imbalanced_on(self, set: PosSet) -> bool {
        let ones = (self.bits & set.0).count_ones() as usize;
        let len = set.len();
        ones == 1 || ones + 1 == len
    }

    /// All strings of `{0,1}^n` in lexicographic order.
    pub fn all(n: usize) -> Result<impl Iterator<Item = BitString>> {
        check_n(n)?;
        Ok((0..1u32 << n).map(move |r| BitString {
            bits: r.reverse_bits() >> (32 - n),
            n: n as u8,
        }))
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.lex_rank().cmp(&other.lex_rank()))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.len();
        if !(1..=MAX_DIM).contains(&n) || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::InvalidBitString(s.to_string()));
        }
        let bits = s
            .bytes()
            .enumerate()
            .fold(0u32, |acc, (i, b)| acc | u32::from(b == b'1') << i);
        Ok(BitString { bits, n: n as u8 })
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Membership bitmap over `{0,1}^n`, indexed by packed value.
#[derive(Clone, Debug)]
pub(crate) struct Membership {
    words: Vec<u64>,
}

impl Membership {
    pub(crate) fn new(n: usize) -> Self {
        Membership {
            words: vec![0; (1usize << n).div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn insert(&mut self, v: u32) {
        self.words[v as usize >> 6] |= 1 << (v & 63);
    }

    #[inline]
    pub(crate) fn contains(&self, v: u32) -> bool {
        self.words[v as usize >> 6] >> (v & 63) & 1 == 1
    }
}

/// A finite set of strings sharing one dimension, kept sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringSet {
    n: u8,
    elems: Vec<BitString>,
}

impl StringSet {
    pub fn new<I: IntoIterator<Item = BitString>>(n: usize, elems: I) -> Result<Self> {
        check_n(n)?;
        let mut elems: Vec<BitString> = elems.into_iter().collect();
        for e in &elems {
            check_dim(n, e.len())?;
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(StringSet { n: n as u8, elems })
    }

    /// Parses every word; the dimension is taken from the first one.
    pub fn parse<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        let parsed = words
            .iter()
            .map(|w| w.as_ref().parse::<BitString>())
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.first().ok_or(Error::Empty("string set"))?.len();
        StringSet::new(n, parsed)
    }

    pub fn empty(n: usize) -> Result<Self> {
        StringSet::new(n, [])
    }

    /// All of `{0,1}^n`.
    pub fn full(n: usize) -> Result<Self> {
        StringSet::new(n, BitString::all(n)?)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.elems.binary_search(s).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BitString> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[BitString] {
        &self.elems
    }

    pub fn is_disjoint(&self, other: &StringSet) -> bool {
        self.elems.iter().all(|e| !other.contains(e))
    }

    pub(crate) fn membership(&self) -> Membership {
        let mut m = Membership::new(self.dim());
        for e in &self.elems {
            m.insert(e.packed());
        }
        m
    }
}

impl<'a> IntoIterator for &'a StringSet {
    type Item = &'a BitString;
    type IntoIter = std::slice::Iter<'a, BitString>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

impl fmt::Display for StringSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for StringSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for StringSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip_and_packing() {
        let b = bs("0110");
        assert_eq!(b.to_string(), "0110");
        assert!(!b.bit(0) && b.bit(1) && b.bit(2) && !b.bit(3));
        assert_eq!(b.packed(), 0b0110);
        assert_eq!(bs("1000").packed(), 1);
        assert_eq!(b.weight(), 2);
    }

    #[test]
    fn lex_order_follows_text() {
        let v: Vec<_> = BitString::all(2).unwrap().map(|b| b.to_string()).collect();
        assert_eq!(v, ["00", "01", "10", "11"]);
        assert!(bs("01") < bs("10"));
        assert_eq!(bs("011").lex_rank(), 3);
        assert_eq!(BitString::from_lex_rank(3, 3).unwrap(), bs("011"));
    }

    #[test]
    fn rejects_bad_words() {
        assert!("".parse::<BitString>().is_err());
        assert!("012".parse::<BitString>().is_err());
        assert!("0".repeat(MAX_DIM + 1).parse::<BitString>().is_err());
    }

    #[test]
    fn swap_and_constancy() {
        assert_eq!(bs("0110").swap(0, 1), bs("1010"));
        assert_eq!(bs("0110").swap(1, 2), bs("0110"));
        let set = PosSet::from_indices([1, 2]);
        assert!(bs("0110").is_constant_on(set));
        assert!(!bs("0100").is_constant_on(set));
        assert!(bs("0001").is_imbalanced_on(PosSet::full(4)));
        assert!(bs("1101").is_imbalanced_on(PosSet::full(4)));
        assert!(!bs("0011").is_imbalanced_on(PosSet::full(4)));
    }

    #[test]
    fn string_set_dedups_and_checks_dim() {
        let s = StringSet::parse(&["10", "01", "10"]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_string(), "{01, 10}");
        assert!(StringSet::parse(&["10", "011"]).is_err());
        assert_eq!(StringSet::full(3).unwrap().len(), 8);
    }

    #[test]
    fn pos_set_display_is_one_based() {
        assert_eq!(PosSet::from_indices([0, 2]).to_string(), "{1,3}");
        assert_eq!(PosSet::EMPTY.to_string(), "{}");
    }
}
