//! Permutations of string positions and hypercube automorphisms `(π, w)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::{check_n, BitString, PosSet, StringSet, MAX_DIM};
use crate::error::{check_dim, Error, Result};

/// A bijection on `[n]`, acting on strings by moving the bit at position `j`
/// to position `π(j)`, i.e. `π(v)_k = v_{π⁻¹(k)}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionPerm {
    n: u8,
    img: [u8; MAX_DIM],
}

impl PositionPerm {
    pub fn identity(n: usize) -> Result<Self> {
        check_n(n)?;
        let mut img = [0u8; MAX_DIM];
        for (i, x) in img.iter_mut().enumerate().take(n) {
            *x = i as u8;
        }
        Ok(PositionPerm { n: n as u8, img })
    }

    /// From 0-based images: `images[j] = π(j)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        check_n(n)?;
        let mut seen = 0u32;
        let mut img = [0u8; MAX_DIM];
        for (j, &x) in images.iter().enumerate() {
            if x >= n || seen >> x & 1 == 1 {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen |= 1 << x;
            img[j] = x as u8;
        }
        Ok(PositionPerm { n: n as u8, img })
    }

    #[inline]
    pub(crate) fn from_slice_unchecked(images: &[u8]) -> Self {
        let mut img = [0u8; MAX_DIM];
        img[..images.len()].copy_from_slice(images);
        PositionPerm {
            n: images.len() as u8,
            img,
        }
    }

    /// Swaps the 0-based positions `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut p = PositionPerm::identity(n)?;
        if i >= n || j >= n {
            return Err(Error::InvalidPermutation(format!(
                "transposition ({i} {j}) outside degree {n}"
            )));
        }
        p.img.swap(i, j);
        Ok(p)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.n as usize
    }

    /// 0-based image of `j`.
    #[inline]
    pub fn image(&self, j: usize) -> usize {
        self.img[j] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.img[..self.degree()]
    }

    pub fn is_identity(&self) -> bool {
        self.images().iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut img = [0u8; MAX_DIM];
        for (j, &x) in self.images().iter().enumerate() {
            img[x as usize] = j as u8;
        }
        PositionPerm { n: self.n, img }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PositionPerm) -> Result<Self> {
        check_dim(self.degree(), other.degree())?;
        let mut img = [0u8; MAX_DIM];
        for (j, x) in img.iter_mut().enumerate().take(self.degree()) {
            *x = self.img[other.img[j] as usize];
        }
        Ok(PositionPerm { n: self.n, img })
    }

    pub fn apply(&self, v: BitString) -> Result<BitString> {
        check_dim(self.degree(), v.len())?;
        Ok(self.apply_unchecked(v))
    }

    #[inline]
    pub(crate) fn apply_unchecked(&self, v: BitString) -> BitString {
        BitString::from_packed_unchecked(self.degree(), self.apply_packed(v.packed()))
    }

    #[inline]
    pub(crate) fn apply_packed(&self, mut bits: u32) -> u32 {
        let mut out = 0u32;
        while bits != 0 {
            let j = bits.trailing_zeros();
            out |= 1 << self.img[j as usize];
            bits &= bits - 1;
        }
        out
    }

    /// Image of a position set.
    #[inline]
    pub fn apply_set(&self, set: PosSet) -> PosSet {
        PosSet(self.apply_packed(set.0))
    }

    pub fn apply_strings(&self, set: &StringSet) -> Result<StringSet> {
        check_dim(self.degree(), set.dim())?;
        StringSet::new(set.dim(), set.iter().map(|&v| self.apply_unchecked(v)))
    }

    /// Compact key (4 bits per image).
    pub fn key(&self) -> u64 {
        self.images()
            .iter()
            .enumerate()
            .fold(0u64, |k, (j, &x)| k | (x as u64) << (4 * j))
    }
}

impl fmt::Display for PositionPerm {
    /// One-line 1-based images, e.g. `3 1 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, &x) in self.images().iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PositionPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for PositionPerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split_whitespace()
            .map(|t| match t.parse::<usize>() {
                Ok(x) if x >= 1 => Ok(x - 1),
                _ => Err(Error::InvalidPermutation(format!("bad image {t:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        PositionPerm::from_images(&images)
    }
}

impl Serialize for PositionPerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PositionPerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// A hypercube automorphism `v ↦ π(v) ⊕ w`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AutPair {
    perm: PositionPerm,
    word: BitString,
}

impl AutPair {
    pub fn new(perm: PositionPerm, word: BitString) -> Result<Self> {
        check_dim(perm.degree(), word.len())?;
        Ok(AutPair { perm, word })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(AutPair {
            perm: PositionPerm::identity(n)?,
            word: BitString::zeros(n)?,
        })
    }

    pub fn perm(&self) -> &PositionPerm {
        &self.perm
    }

    pub fn word(&self) -> BitString {
        self.word
    }

    pub fn degree(&self) -> usize {
        self.perm.degree()
    }

    pub fn apply(&self, v: BitString) -> Result<BitString> {
        check_dim(self.degree(), v.len())?;
        Ok(self.apply_unchecked(v))
    }

    #[inline]
    pub(crate) fn apply_unchecked(&self, v: BitString) -> BitString {
        BitString::from_packed_unchecked(
            self.degree(),
            self.perm.apply_packed(v.packed()) ^ self.word.packed(),
        )
    }

    /// `self ∘ other`: `v ↦ π(ρ(v) ⊕ u) ⊕ w = πρ(v) ⊕ (π(u) ⊕ w)`.
    pub fn compose(&self, other: &AutPair) -> Result<Self> {
        let perm = self.perm.compose(&other.perm)?;
        let word = self.perm.apply_unchecked(other.word).xor(self.word)?;
        Ok(AutPair { perm, word })
    }
}

impl fmt::Display for AutPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.perm, self.word)
    }
}
